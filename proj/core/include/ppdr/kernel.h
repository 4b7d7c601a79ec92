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

// Kernels, kernel MMD and the kernel-mean class label.

#ifndef PPDR_KERNEL_H_
#define PPDR_KERNEL_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ppdr/linalg.h"

namespace ppdr {

enum class KernelFamily { kRbf, kLinear, kPolynomial };

std::string_view KernelFamilyName(KernelFamily family);
KernelFamily ParseKernelFamily(std::string_view name);

struct KernelSpec {
  KernelFamily family = KernelFamily::kRbf;
  double sigma = 1.0;  // rbf: exp(-|x-y|^2 / (2 sigma^2))
  int degree = 2;      // polynomial: (x.y + coef)^degree
  double coef = 1.0;

  static KernelSpec Rbf(double sigma) { return {KernelFamily::kRbf, sigma, 2, 1.0}; }
  static KernelSpec Linear() { return {KernelFamily::kLinear, 1.0, 2, 1.0}; }
  static KernelSpec Polynomial(int degree, double coef) {
    return {KernelFamily::kPolynomial, 1.0, degree, coef};
  }

  // Throws InvalidArgument unless sigma > 0 and degree >= 1.
  void Validate() const;
};

// Throws DimensionMismatch.
double KernelEval(const KernelSpec& spec, const linalg::Vector& x,
                  const linalg::Vector& y);

// K(i, j) = k(x_i, y_j) over rows.
linalg::Matrix KernelMatrix(const KernelSpec& spec, const linalg::Matrix& x,
                            const linalg::Matrix& y);
linalg::Matrix KernelMatrix(const KernelSpec& spec, const linalg::Matrix& x);

// Biased kernel MMD between row sets, clamped at zero before the square
// root. Exactly symmetric in its arguments. Throws EmptySampleSet.
double Mmd(const KernelSpec& spec, const linalg::Matrix& x,
           const linalg::Matrix& y);

// Per-class sample banks with their self-similarity terms
// (1/n_l^2) sum_ij k(x_i, x_j) precomputed.
class ClassBank {
 public:
  ClassBank() = default;
  // Throws EmptySampleSet if any class is empty, DimensionMismatch if the
  // classes disagree on width.
  ClassBank(const KernelSpec& spec, std::vector<linalg::Matrix> classes);

  const KernelSpec& spec() const { return spec_; }
  int num_classes() const { return static_cast<int>(classes_.size()); }
  linalg::Index dim() const { return dim_; }
  const linalg::Matrix& samples(int l) const {
    return classes_[static_cast<std::size_t>(l)];
  }
  double self_mean(int l) const { return self_means_[static_cast<std::size_t>(l)]; }

  // (1/n_l) sum_i k(x_i, x).
  double CrossMean(int l, const linalg::Vector& x) const;

 private:
  KernelSpec spec_;
  std::vector<linalg::Matrix> classes_;
  std::vector<double> self_means_;
  linalg::Index dim_ = 0;
};

// Score of each class: self_mean(l) - 2 * CrossMean(l, x). The k(x, x) term
// of the squared feature-space distance is class independent and omitted.
std::vector<double> LabelScores(const ClassBank& bank, const linalg::Vector& x);

// argmin of LabelScores; ties go to the lowest class index.
int Label(const ClassBank& bank, const linalg::Vector& x);

// Median Euclidean distance over row pairs; at most `max_rows` rows are used,
// taken evenly spaced.
double MedianPairwiseDistance(const linalg::Matrix& x,
                              linalg::Index max_rows = 1000);

struct BandwidthSelection {
  double sigma = 1.0;
  double median_distance = 1.0;
  std::vector<double> candidates;
  std::vector<double> accuracies;  // cross-validated, per candidate
  double best_accuracy = 0.0;
  int sigma_index = -1;
};

inline constexpr double kBandwidthMultipliers[] = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};

enum class BandwidthRule {
  kBest,              // highest accuracy; ties go to the smaller sigma
  kOneStandardError,  // widest sigma within one binomial standard error
};

// Chooses the rbf bandwidth of the kernel-mean label classifier by stratified
// k-fold accuracy over multipliers of the median pairwise distance.
BandwidthSelection SelectBandwidth(const linalg::Matrix& x,
                                   const std::vector<int>& labels,
                                   int num_classes, int folds,
                                   std::uint64_t seed,
                                   std::span<const double> multipliers =
                                       kBandwidthMultipliers,
                                   BandwidthRule rule = BandwidthRule::kBest);

}  // namespace ppdr

#endif  // PPDR_KERNEL_H_
