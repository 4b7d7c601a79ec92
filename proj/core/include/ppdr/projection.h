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

// Coarse-grained perturbation: linear projections onto K < M dimensions.
//
// The supervised methods are all top-K generalized eigenvectors of a
// scatter pencil (numerator, denominator):
//
//   dca         (S_B(u),                       S_total(u) + rho0 I)
//   mdr         (S_B(u),                       S_B(p) + rho0 I)
//   jupa        (S_B(u) + rho1' S_W(p),        S_W(u) + rho1 S_B(p) + rho0 I)
//   jupa-multi  (sum S_B(u_i) + sum rho'_j S_W(p_j),
//                sum S_W(u_i) + sum rho_j S_B(p_j) + rho0 I)
//
// pca and random are the label-free baselines.

#ifndef PPDR_PROJECTION_H_
#define PPDR_PROJECTION_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppdr/dataset.h"
#include "ppdr/linalg.h"
#include "ppdr/scatter.h"

namespace ppdr {

enum class ProjectionMethod { kPca, kRandom, kDca, kMdr, kJupa, kJupaMulti };

std::string_view ProjectionMethodName(ProjectionMethod method);
// Throws InvalidArgument for unknown names.
ProjectionMethod ParseProjectionMethod(std::string_view name);

inline constexpr double kDefaultRho0 = 1e-3;

struct ProjectionParams {
  linalg::Index k = 1;
  double rho0 = kDefaultRho0;
  std::vector<double> rho;        // privacy between-class weights (rho1)
  std::vector<double> rho_prime;  // privacy within-class weights (rho1')
  std::uint64_t seed = 0;         // random method only
  // When false, Project() skips subtracting the training mean.
  bool centered = true;
};

struct ProjectionModel {
  ProjectionMethod method = ProjectionMethod::kPca;
  ProjectionParams params;
  linalg::Matrix w;            // M x K, unit-norm columns
  linalg::Vector mean;         // training mean, length M
  linalg::Vector eigenvalues;  // retained spectrum; empty for random

  linalg::Index input_dim() const { return w.rows(); }
  linalg::Index output_dim() const { return w.cols(); }
};

ProjectionModel FitPca(const LabeledDataset& train, linalg::Index k);
ProjectionModel FitPca(const linalg::Matrix& x, linalg::Index k);

// Gaussian matrix orthonormalized by QR. The mean is zero unless a training
// matrix is supplied.
ProjectionModel FitRandom(linalg::Index m, linalg::Index k, std::uint64_t seed);
ProjectionModel FitRandom(const linalg::Matrix& train, linalg::Index k,
                          std::uint64_t seed);

ProjectionModel FitDca(const ScatterSet& utility, linalg::Index k, double rho0);
ProjectionModel FitMdr(const ScatterSet& utility, const ScatterSet& privacy,
                       linalg::Index k, double rho0);
ProjectionModel FitJupa(const ScatterSet& utility, const ScatterSet& privacy,
                        linalg::Index k, double rho0, double rho1,
                        double rho1_prime);
// Throws LengthMismatch when the weight lists do not match the privacy list.
ProjectionModel FitJupaMulti(std::span<const ScatterSet> utilities,
                             std::span<const ScatterSet> privacies,
                             linalg::Index k, double rho0,
                             std::span<const double> rho,
                             std::span<const double> rho_prime);

// x_hat = (x - mean)^T W, row-wise for matrices. Throws DimensionMismatch.
linalg::Vector Project(const ProjectionModel& model, const linalg::Vector& x);
linalg::Matrix Project(const ProjectionModel& model, const linalg::Matrix& x);

// Versioned JSON document; doubles are written in shortest round-trip form so
// that a save/load cycle is bit-exact.
std::string SerializeProjection(const ProjectionModel& model);
ProjectionModel DeserializeProjection(std::string_view text);
void SaveProjection(const std::filesystem::path& path,
                    const ProjectionModel& model);
ProjectionModel LoadProjection(const std::filesystem::path& path);

}  // namespace ppdr

#endif  // PPDR_PROJECTION_H_
