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


// Kernel support vector machines: a binary soft-margin SVM solved by SMO
// with second-order working-set selection, one-vs-rest multiclass models and
// a stratified k-fold grid search over (C, sigma).

#ifndef PPDR_CLASSIFIER_H_
#define PPDR_CLASSIFIER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppdr/kernel.h"
#include "ppdr/linalg.h"

namespace ppdr {

struct SmoOptions {
  double c = 1.0;
  double tol = 1e-3;
  // 0 picks max(100000, 100 * n).
  long max_iter = 0;
  // Throw NoConvergence when the iteration cap is hit instead of returning
  // the current iterate.
  bool strict = false;
};

// Dual solution of one binary problem over a fixed training set.
struct SmoSolution {
  linalg::Vector alpha;  // in [0, C]
  double bias = 0.0;     // f(x) = sum_i alpha_i y_i k(x_i, x) + bias
  long iterations = 0;
  bool converged = false;
};

// Solves the binary dual from a precomputed Gram matrix and labels in
// {-1, +1}. Throws SingleClassInput, InvalidArgument, NoConvergence (strict).
SmoSolution SolveSmo(const linalg::Matrix& gram, std::span<const int> y,
                     const SmoOptions& options);

struct SvmModel {
  KernelSpec spec;
  double c = 1.0;
  linalg::Matrix support;  // support vectors as rows
  linalg::Vector alpha;    // dual coefficients of the support vectors
  std::vector<int> y;      // +1 / -1 of the support vectors
  double bias = 0.0;
  bool converged = true;

  double Decision(const linalg::Vector& x) const;
  // +1 when Decision(x) >= 0, else -1.
  int Predict(const linalg::Vector& x) const;
};

// Throws SingleClassInput, InvalidArgument, NoConvergence (strict).
SvmModel TrainSvm(const linalg::Matrix& x, std::span<const int> y,
                  const KernelSpec& spec, const SmoOptions& options);

// One binary model for two classes (class 0 is +1), one-vs-rest otherwise.
// Prediction takes the largest decision value, lowest index on ties; with two
// classes a decision >= 0 selects class 0.
class MulticlassSvm {
 public:
  MulticlassSvm() = default;

  // Throws SingleClassInput if fewer than two classes occur.
  static MulticlassSvm Train(const linalg::Matrix& x,
                             const std::vector<int>& labels, int num_classes,
                             const KernelSpec& spec, const SmoOptions& options);
  // Same, reusing a Gram matrix of x under spec.
  static MulticlassSvm TrainFromGram(const linalg::Matrix& x,
                                     const linalg::Matrix& gram,
                                     const std::vector<int>& labels,
                                     int num_classes, const KernelSpec& spec,
                                     const SmoOptions& options);

  int num_classes() const { return num_classes_; }
  const KernelSpec& spec() const { return spec_; }
  double c() const { return c_; }
  bool converged() const { return converged_; }

  // Rows are samples, columns are per-model decision values.
  linalg::Matrix Decisions(const linalg::Matrix& x) const;
  std::vector<int> Predict(const linalg::Matrix& x) const;
  int Predict(const linalg::Vector& x) const;

  std::string Serialize() const;
  static MulticlassSvm Deserialize(std::string_view text);

 private:
  KernelSpec spec_;
  double c_ = 1.0;
  int num_classes_ = 0;
  bool converged_ = true;
  // Union of the support vectors of all binary models.
  linalg::Matrix support_;
  // coef_(i, m) = alpha_i y_i of support row i in model m.
  linalg::Matrix coef_;
  linalg::Vector bias_;
};

double Accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

struct GridPoint {
  double c = 1.0;
  double sigma = 1.0;
  double sigma_multiplier = 1.0;
  double accuracy = 0.0;  // mean over folds, in [0, 1]
};

struct GridSearchReport {
  std::vector<GridPoint> points;
  std::size_t selected = 0;
  int folds = 0;
  double median_distance = 1.0;

  const GridPoint& best() const { return points[selected]; }
};

struct GridSpec {
  std::vector<double> c = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> sigma_multipliers = {0.25, 0.5, 1.0, 2.0, 4.0};
  double tol = 1e-3;
};

// Stratified k-fold search over rbf SVMs. The selected point has the largest
// mean fold accuracy, ties broken toward smaller C, then smaller sigma.
// Throws ClassTooSmall, InvalidArgument.
GridSearchReport GridSearch(const linalg::Matrix& x,
                            const std::vector<int>& labels, int num_classes,
                            int folds, const GridSpec& grid, std::uint64_t seed,
                            int jobs = 1);

}  // namespace ppdr

#endif  // PPDR_CLASSIFIER_H_
