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

#include "ppdr/kernel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppdr/dataset.h"
#include "ppdr/error.h"

namespace ppdr {
namespace {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

double SquaredDistance(const auto& x, const auto& y) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double d = x(i) - y(i);
    s += d * d;
  }
  return s;
}

double EvalUnchecked(const KernelSpec& spec, const auto& x, const auto& y) {
  switch (spec.family) {
    case KernelFamily::kRbf:
      return std::exp(-SquaredDistance(x, y) / (2.0 * spec.sigma * spec.sigma));
    case KernelFamily::kLinear:
      return x.dot(y);
    case KernelFamily::kPolynomial:
      return std::pow(x.dot(y) + spec.coef, spec.degree);
  }
  return 0.0;
}

// Total order on row sets used to make Mmd(x, y) and Mmd(y, x) evaluate the
// identical expression.
bool RowSetLess(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  if (a.cols() != b.cols()) return a.cols() < b.cols();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    }
  }
  return false;
}

double MeanKernel(const KernelSpec& spec, const Matrix& x, const Matrix& y) {
  double sum = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < y.rows(); ++j) {
      sum += EvalUnchecked(spec, x.row(i), y.row(j));
    }
  }
  return sum / (static_cast<double>(x.rows()) * static_cast<double>(y.rows()));
}

Matrix PairwiseSquaredDistances(const Matrix& x, const Matrix& y) {
  Matrix d(x.rows(), y.rows());
  if (x.cols() <= 16) {
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index j = 0; j < y.rows(); ++j) {
        d(i, j) = SquaredDistance(x.row(i), y.row(j));
      }
    }
    return d;
  }
  const Vector xn = x.rowwise().squaredNorm();
  const Vector yn = y.rowwise().squaredNorm();
  d.noalias() = -2.0 * x * y.transpose();
  d.colwise() += xn;
  d.rowwise() += yn.transpose();
  return d.cwiseMax(0.0);
}

}  // namespace

std::string_view KernelFamilyName(KernelFamily family) {
  switch (family) {
    case KernelFamily::kRbf: return "rbf";
    case KernelFamily::kLinear: return "linear";
    case KernelFamily::kPolynomial: return "polynomial";
  }
  return "rbf";
}

KernelFamily ParseKernelFamily(std::string_view name) {
  if (name == "rbf") return KernelFamily::kRbf;
  if (name == "linear") return KernelFamily::kLinear;
  if (name == "polynomial") return KernelFamily::kPolynomial;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::Validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "kernel sigma must be positive");
  }
  if (degree < 1) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial degree must be >= 1");
  }
}

double KernelEval(const KernelSpec& spec, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  return EvalUnchecked(spec, x, y);
}

Matrix KernelMatrix(const KernelSpec& spec, const Matrix& x, const Matrix& y) {
  if (x.cols() != y.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "kernel matrix operand widths");
  }
  switch (spec.family) {
    case KernelFamily::kRbf: {
      const double gamma = 1.0 / (2.0 * spec.sigma * spec.sigma);
      return (-gamma * PairwiseSquaredDistances(x, y)).array().exp().matrix();
    }
    case KernelFamily::kLinear:
      return x * y.transpose();
    case KernelFamily::kPolynomial:
      return ((x * y.transpose()).array() + spec.coef)
          .pow(static_cast<double>(spec.degree))
          .matrix();
  }
  return {};
}

Matrix KernelMatrix(const KernelSpec& spec, const Matrix& x) {
  Matrix k = KernelMatrix(spec, x, x);
  return linalg::Symmetrize(k);
}

double Mmd(const KernelSpec& spec, const Matrix& x, const Matrix& y) {
  if (x.rows() == 0 || y.rows() == 0) {
    throw Error(ErrorCode::kEmptySampleSet, "MMD needs non-empty sample sets");
  }
  if (x.cols() != y.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "MMD operand widths");
  }
  const bool swap = RowSetLess(y, x);
  const Matrix& a = swap ? y : x;
  const Matrix& b = swap ? x : y;
  const double kaa = MeanKernel(spec, a, a);
  const double kbb = MeanKernel(spec, b, b);
  const double kab = MeanKernel(spec, a, b);
  const double squared = (kaa + kbb) - 2.0 * kab;
  return std::sqrt(std::max(0.0, squared));
}

ClassBank::ClassBank(const KernelSpec& spec, std::vector<Matrix> classes)
    : spec_(spec), classes_(std::move(classes)) {
  spec_.Validate();
  if (classes_.empty()) {
    throw Error(ErrorCode::kEmptySampleSet, "class bank without classes");
  }
  dim_ = classes_.front().cols();
  self_means_.reserve(classes_.size());
  for (std::size_t l = 0; l < classes_.size(); ++l) {
    const Matrix& c = classes_[l];
    if (c.rows() == 0) {
      throw Error(ErrorCode::kEmptySampleSet,
                  "class " + std::to_string(l) + " has no samples");
    }
    if (c.cols() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch, "class bank widths differ");
    }
    self_means_.push_back(KernelMatrix(spec_, c).mean());
  }
}

double ClassBank::CrossMean(int l, const Vector& x) const {
  const Matrix& c = samples(l);
  double sum = 0.0;
  for (Index i = 0; i < c.rows(); ++i) {
    sum += EvalUnchecked(spec_, c.row(i), x);
  }
  return sum / static_cast<double>(c.rows());
}

std::vector<double> LabelScores(const ClassBank& bank, const Vector& x) {
  if (x.size() != bank.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(x.size()) + " dims, bank " +
                    std::to_string(bank.dim()));
  }
  std::vector<double> scores(static_cast<std::size_t>(bank.num_classes()));
  for (int l = 0; l < bank.num_classes(); ++l) {
    scores[static_cast<std::size_t>(l)] =
        bank.self_mean(l) - 2.0 * bank.CrossMean(l, x);
  }
  return scores;
}

int Label(const ClassBank& bank, const Vector& x) {
  const auto scores = LabelScores(bank, x);
  int best = 0;
  for (int l = 1; l < static_cast<int>(scores.size()); ++l) {
    if (scores[static_cast<std::size_t>(l)] <
        scores[static_cast<std::size_t>(best)]) {
      best = l;
    }
  }
  return best;
}

double MedianPairwiseDistance(const Matrix& x, Index max_rows) {
  if (x.rows() < 2) return 1.0;
  Matrix sub = x;
  if (x.rows() > max_rows) {
    sub.resize(max_rows, x.cols());
    for (Index i = 0; i < max_rows; ++i) {
      sub.row(i) = x.row(i * x.rows() / max_rows);
    }
  }
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(sub.rows() * (sub.rows() - 1) / 2));
  for (Index i = 0; i < sub.rows(); ++i) {
    for (Index j = i + 1; j < sub.rows(); ++j) {
      d.push_back(std::sqrt(SquaredDistance(sub.row(i), sub.row(j))));
    }
  }
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double median = *mid;
  if (d.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(d.begin(), mid));
  }
  return median > 0.0 ? median : 1.0;
}

BandwidthSelection SelectBandwidth(const Matrix& x, const std::vector<int>& labels,
                                   int num_classes, int folds, std::uint64_t seed,
                                   std::span<const double> multipliers,
                                   BandwidthRule rule) {
  if (multipliers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty bandwidth grid");
  }
  BandwidthSelection out;
  out.median_distance = MedianPairwiseDistance(x);
  const std::vector<int> fold = StratifiedFolds(labels, num_classes, folds, seed);
  const Matrix d2 = PairwiseSquaredDistances(x, x);
  const Index n = x.rows();

  double best_acc = -1.0;
  for (double mult : multipliers) {
    const double sigma = mult * out.median_distance;
    const Matrix k = (-d2 / (2.0 * sigma * sigma)).array().exp().matrix();
    std::size_t correct = 0;
    for (int f = 0; f < folds; ++f) {
      // Self-similarity and membership of the training part of this fold.
      std::vector<std::vector<Index>> members(static_cast<std::size_t>(num_classes));
      for (Index i = 0; i < n; ++i) {
        if (fold[static_cast<std::size_t>(i)] != f) {
          members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]
              .push_back(i);
        }
      }
      std::vector<double> self(static_cast<std::size_t>(num_classes), 0.0);
      for (int l = 0; l < num_classes; ++l) {
        const auto& m = members[static_cast<std::size_t>(l)];
        if (m.empty()) {
          self[static_cast<std::size_t>(l)] = std::numeric_limits<double>::infinity();
          continue;
        }
        double s = 0.0;
        for (Index a : m) {
          for (Index b : m) s += k(a, b);
        }
        self[static_cast<std::size_t>(l)] =
            s / (static_cast<double>(m.size()) * static_cast<double>(m.size()));
      }
      for (Index q = 0; q < n; ++q) {
        if (fold[static_cast<std::size_t>(q)] != f) continue;
        int best = 0;
        double best_score = std::numeric_limits<double>::infinity();
        for (int l = 0; l < num_classes; ++l) {
          const auto& m = members[static_cast<std::size_t>(l)];
          if (m.empty()) continue;
          double cross = 0.0;
          for (Index a : m) cross += k(a, q);
          const double score = self[static_cast<std::size_t>(l)] -
                               2.0 * cross / static_cast<double>(m.size());
          if (score < best_score) {
            best_score = score;
            best = l;
          }
        }
        if (best == labels[static_cast<std::size_t>(q)]) ++correct;
      }
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(n);
    out.candidates.push_back(sigma);
    out.accuracies.push_back(acc);
    best_acc = std::max(best_acc, acc);
  }
  out.best_accuracy = best_acc;
  const double se =
      rule == BandwidthRule::kOneStandardError
          ? std::sqrt(best_acc * (1.0 - best_acc) / static_cast<double>(n))
          : 0.0;
  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    if (out.accuracies[i] < best_acc - se) continue;
    if (out.sigma_index < 0 || (rule == BandwidthRule::kOneStandardError &&
                                out.candidates[i] > out.sigma)) {
      out.sigma = out.candidates[i];
      out.sigma_index = static_cast<int>(i);
    }
  }
  return out;
}

}  // namespace ppdr
