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


// Fine-grained perturbation of projected samples.
//
// A sample x is labelled by the kernel-mean classifier over the verification
// bank, a target class t is drawn, and a noise vector theta is descended on
//
//   L(theta) = |mu_t - phi(z)|^2 - |mu_s - phi(z)|^2 + (lambda/2)|theta|^2,
//   z = x + theta,
//
// with mu_l the kernel mean of ground bank class l, until the verification
// label of z is t and L is at or below the stop level: -margin, lowered to
// the loss at a random verification sample of class t when match_depth is set.

#ifndef PPDR_SANITIZER_H_
#define PPDR_SANITIZER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppdr/dataset.h"
#include "ppdr/kernel.h"
#include "ppdr/linalg.h"

namespace ppdr {

struct SanitizerParams {
  double lambda = 1e-3;
  double alpha = 0.1;
  int max_iters = 500;
  double margin = 0.0;
  // Also require L <= L(v - x), the loss of moving x onto v, for v drawn
  // uniformly from the target class of the verification bank. Released
  // samples then sit as deep in class t as its members do rather than on the
  // decision boundary.
  bool match_depth = true;
  // Start from a Gaussian theta with standard deviation init_scale * sigma
  // instead of zero.
  bool random_init = false;
  double init_scale = 0.1;
  // Steps are theta -= alpha * sigma^2 * grad when true, which is the
  // literal update in coordinates measured in bandwidths; false applies
  // alpha * grad in raw units.
  bool bandwidth_step = true;
  // A sample that does not converge is run once more from theta = g - x,
  // with g drawn uniformly from the retry_neighbors target-class ground
  // samples nearest to x among those already meeting the stop level. If none
  // does, g is the depth anchor (or, without match_depth, the plain nearest).
  bool retry = true;
  int retry_neighbors = 5;
  // Central differences instead of the analytic rbf gradient. Required for
  // non-rbf kernels.
  bool finite_difference = false;

  // Throws InvalidArgument.
  void Validate() const;
};

struct GroundVerify {
  ClassBank ground;
  ClassBank verify;
};

// Stratified 50/50 split of each class under the seed; the ground half gets
// the extra sample of an odd class. Throws ClassTooSmall.
GroundVerify SplitGroundVerify(const linalg::Matrix& x,
                               const std::vector<int>& labels, int num_classes,
                               const KernelSpec& spec, std::uint64_t seed);
GroundVerify SplitGroundVerify(const LabeledDataset& projected,
                               const std::string& privacy_target,
                               const KernelSpec& spec, std::uint64_t seed);

class SanitizerModel {
 public:
  // Throws DimensionMismatch if the banks disagree on width or class count.
  SanitizerModel(GroundVerify banks, const SanitizerParams& params,
                 std::uint64_t seed);

  const ClassBank& ground() const { return banks_.ground; }
  const ClassBank& verify() const { return banks_.verify; }
  const KernelSpec& spec() const { return banks_.ground.spec(); }
  const SanitizerParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  int num_classes() const { return banks_.ground.num_classes(); }
  linalg::Index dim() const { return banks_.ground.dim(); }

 private:
  GroundVerify banks_;
  SanitizerParams params_;
  std::uint64_t seed_;
};

// L evaluated at z = anchor + theta. Throws SameClass, DimensionMismatch.
double Loss(const SanitizerModel& model, const linalg::Vector& anchor,
            const linalg::Vector& theta, int s, int t);

// Gradient of Loss with respect to theta. Throws SameClass and, for non-rbf
// kernels without finite_difference, UnsupportedKernelGradient.
linalg::Vector LossGradient(const SanitizerModel& model,
                            const linalg::Vector& anchor,
                            const linalg::Vector& theta, int s, int t);

struct SanitizeTrace {
  int source = 0;
  int target = 0;
  // The loss level the descent had to reach.
  double stop_level = 0.0;
  int iterations = 0;
  std::vector<double> losses;
  linalg::Vector z;
  bool converged = false;
  bool retried = false;
};

// Sanitizes one sample. The target is drawn uniformly over all classes from
// the substream (model seed, stream) when not given; t == s returns x after
// zero iterations. Non-convergence is reported through the trace.
SanitizeTrace Sanitize(const SanitizerModel& model, const linalg::Vector& x,
                       std::optional<int> target, std::uint64_t stream);

// Throws NotConverged unless trace.converged.
void RequireConverged(const SanitizeTrace& trace);

struct SanitizeBatchResult {
  linalg::Matrix z;  // rows in input order
  std::vector<SanitizeTrace> traces;
  std::vector<std::uint64_t> not_converged;  // row ids
  std::size_t retried = 0;

  double convergence_rate() const;
};

// Row r uses stream row_ids[r], so results do not depend on row order or on
// the number of worker threads.
SanitizeBatchResult SanitizeBatch(const SanitizerModel& model,
                                  const linalg::Matrix& x,
                                  std::span<const std::uint64_t> row_ids,
                                  int jobs = 1);

}  // namespace ppdr

#endif  // PPDR_SANITIZER_H_
