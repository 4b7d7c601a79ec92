// Copyright 2026 The PPDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ppdr/classifier.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ppdr/error.h"
#include "test_util.h"

namespace ppdr {
namespace {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

std::vector<int> Signs(const std::vector<int>& labels) {
  std::vector<int> y;
  for (int l : labels) y.push_back(l == 0 ? 1 : -1);
  return y;
}

double TrainingAccuracy(const SvmModel& m, const Matrix& x, const std::vector<int>& y) {
  int hit = 0;
  for (Index i = 0; i < x.rows(); ++i) hit += m.Predict(x.row(i).transpose()) == y[i];
  return static_cast<double>(hit) / static_cast<double>(x.rows());
}

TEST(Svm, LinearlySeparable) {
  std::vector<int> labels;
  Matrix centres(2, 2);
  centres << -3, 0, 3, 0;
  const Matrix x = testing::Clusters(centres, 25, 0.5, 1, labels);
  const auto y = Signs(labels);
  SmoOptions o;
  o.c = 10;
  const SvmModel m = TrainSvm(x, y, KernelSpec::Linear(), o);
  EXPECT_TRUE(m.converged);
  EXPECT_EQ(TrainingAccuracy(m, x, y), 1.0);
}

TEST(Svm, XorWithRbf) {
  Matrix x(4, 2);
  x << 0, 0, 1, 1, 0, 1, 1, 0;
  const std::vector<int> y = {1, 1, -1, -1};
  SmoOptions o;
  o.c = 10;
  const SvmModel m = TrainSvm(x, y, KernelSpec::Rbf(0.5), o);
  EXPECT_EQ(TrainingAccuracy(m, x, y), 1.0);
}

TEST(Svm, IdenticalFeaturesGiveMajority) {
  const Matrix x = Matrix::Ones(10, 2);
  const std::vector<int> y = {1, 1, 1, 1, 1, 1, 1, -1, -1, -1};
  SmoOptions o;
  o.c = 1;
  const SvmModel m = TrainSvm(x, y, KernelSpec::Rbf(1.0), o);
  EXPECT_DOUBLE_EQ(TrainingAccuracy(m, x, y), 0.7);
}

TEST(Svm, SymmetricMidpointGoesToFirstClass) {
  Matrix x(2, 1);
  x << -1, 1;
  const std::vector<int> labels = {0, 1};
  SmoOptions o;
  const MulticlassSvm m = MulticlassSvm::Train(x, labels, 2, KernelSpec::Linear(), o);
  EXPECT_EQ(m.Predict(Vector(Vector::Zero(1))), 0);
  EXPECT_EQ(m.Predict(Vector(Vector::Constant(1, 0.5))), 1);
}

// KKT conditions of the dual at tolerance tol, checked from scratch.
TEST(SolveSmo, SatisfiesKktConditions) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<int> labels;
    Matrix centres(2, 3);
    centres << 0, 0, 0, 1.5, 0.5, 0;
    const Matrix x = testing::Clusters(centres, 30, 1.0, seed, labels);
    const auto y = Signs(labels);
    const Matrix gram = KernelMatrix(KernelSpec::Rbf(1.2), x);
    SmoOptions o;
    o.c = 2.0;
    o.tol = 1e-6;
    const SmoSolution s = SolveSmo(gram, y, o);
    ASSERT_TRUE(s.converged);
    double balance = 0;
    for (Index i = 0; i < x.rows(); ++i) {
      const double a = s.alpha(i);
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, o.c);
      balance += a * y[static_cast<std::size_t>(i)];
      double f = s.bias;
      for (Index j = 0; j < x.rows(); ++j) {
        f += s.alpha(j) * y[static_cast<std::size_t>(j)] * gram(j, i);
      }
      const double margin = y[static_cast<std::size_t>(i)] * f;
      if (a < 1e-9) EXPECT_GE(margin, 1.0 - 1e-4) << i;
      if (a > o.c - 1e-9) EXPECT_LE(margin, 1.0 + 1e-4) << i;
      if (a > 1e-9 && a < o.c - 1e-9) EXPECT_NEAR(margin, 1.0, 1e-4) << i;
    }
    EXPECT_NEAR(balance, 0.0, 1e-9);
  }
}

TEST(SolveSmo, Errors) {
  const Matrix g = Matrix::Identity(3, 3);
  SmoOptions o;
  try {
    SolveSmo(g, std::vector<int>{1, 1, 1}, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClassInput);
  }
  EXPECT_THROW(SolveSmo(g, std::vector<int>{1, -1}, o), Error);
  EXPECT_THROW(SolveSmo(g, std::vector<int>{1, -1, 0}, o), Error);
  o.c = 0;
  EXPECT_THROW(SolveSmo(g, std::vector<int>{1, -1, 1}, o), Error);
}

TEST(SolveSmo, StrictModeReportsIterationCap) {
  std::vector<int> labels;
  Matrix centres(2, 2);
  centres << 0, 0, 0.2, 0;
  const Matrix x = testing::Clusters(centres, 40, 1.0, 3, labels);
  SmoOptions o;
  o.c = 100;
  o.max_iter = 3;
  o.strict = true;
  try {
    SolveSmo(KernelMatrix(KernelSpec::Rbf(0.1), x), Signs(labels), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoConvergence);
  }
}

TEST(MulticlassSvm, ThreeClustersAndBatchMatchesRows) {
  std::vector<int> labels;
  Matrix centres(3, 2);
  centres << 0, 0, 4, 0, 2, 3.5;
  const Matrix x = testing::Clusters(centres, 20, 0.6, 4, labels);
  SmoOptions o;
  o.c = 10;
  const MulticlassSvm m = MulticlassSvm::Train(x, labels, 3, KernelSpec::Rbf(1.5), o);
  const auto batch = m.Predict(x);
  EXPECT_GE(Accuracy(batch, labels), 0.95);
  for (Index i = 0; i < x.rows(); ++i) {
    EXPECT_EQ(batch[static_cast<std::size_t>(i)], m.Predict(Vector(x.row(i).transpose())));
  }
}

TEST(MulticlassSvm, AbsentClassIsNeverPredicted) {
  std::vector<int> labels;
  Matrix centres(2, 2);
  centres << 0, 0, 4, 0;
  const Matrix x = testing::Clusters(centres, 15, 0.5, 5, labels);
  SmoOptions o;
  const MulticlassSvm m = MulticlassSvm::Train(x, labels, 3, KernelSpec::Rbf(1.0), o);
  const Matrix q = testing::RandomMatrix(30, 2, 6) * 3.0;
  for (int p : m.Predict(q)) EXPECT_NE(p, 2);
}

TEST(MulticlassSvm, SerializationRoundTrip) {
  std::vector<int> labels;
  Matrix centres(3, 2);
  centres << 0, 0, 4, 0, 2, 3.5;
  const Matrix x = testing::Clusters(centres, 10, 0.6, 7, labels);
  SmoOptions o;
  o.c = 3;
  const MulticlassSvm m = MulticlassSvm::Train(x, labels, 3, KernelSpec::Rbf(1.1), o);
  const MulticlassSvm back = MulticlassSvm::Deserialize(m.Serialize());
  const Matrix q = testing::RandomMatrix(20, 2, 8) * 3.0;
  EXPECT_EQ(back.Decisions(q), m.Decisions(q));
  EXPECT_EQ(back.num_classes(), 3);
  EXPECT_THROW(MulticlassSvm::Deserialize("[]"), Error);
}

TEST(Accuracy, CountsMatches) {
  EXPECT_DOUBLE_EQ(Accuracy({0, 1, 1, 0}, {0, 1, 0, 0}), 0.75);
  EXPECT_THROW(Accuracy({0}, {0, 1}), Error);
}

TEST(GridSearch, SinglePointIsSelected) {
  std::vector<int> labels;
  Matrix centres(2, 2);
  centres << 0, 0, 3, 0;
  const Matrix x = testing::Clusters(centres, 20, 0.8, 9, labels);
  GridSpec g;
  g.c = {1.0};
  g.sigma_multipliers = {1.0};
  const GridSearchReport r = GridSearch(x, labels, 2, 5, g, 1);
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.selected, 0u);
  EXPECT_DOUBLE_EQ(r.best().sigma, r.median_distance);
}

TEST(GridSearch, SelectsMaxAccuracyWithSmallCTieBreak) {
  std::vector<int> labels;
  Matrix centres(2, 2);
  centres << 0, 0, 6, 0;
  const Matrix x = testing::Clusters(centres, 20, 0.5, 10, labels);
  const GridSearchReport r = GridSearch(x, labels, 2, 5, GridSpec{}, 2);
  ASSERT_EQ(r.points.size(), 20u);
  for (const auto& p : r.points) EXPECT_LE(p.accuracy, r.best().accuracy);
  // Separable: every point reaches 1, so the smallest C and sigma win.
  EXPECT_DOUBLE_EQ(r.best().accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.best().c, 0.1);
  EXPECT_DOUBLE_EQ(r.best().sigma_multiplier, 0.25);
}

TEST(GridSearch, DeterministicAcrossJobCounts) {
  std::vector<int> labels;
  Matrix centres(3, 2);
  centres << 0, 0, 1.5, 0, 0.7, 1.2;
  const Matrix x = testing::Clusters(centres, 15, 0.8, 11, labels);
  const GridSearchReport a = GridSearch(x, labels, 3, 5, GridSpec{}, 4, 1);
  const GridSearchReport b = GridSearch(x, labels, 3, 5, GridSpec{}, 4, 3);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].accuracy, b.points[i].accuracy);
  }
  EXPECT_EQ(a.selected, b.selected);
}

}  // namespace
}  // namespace ppdr
