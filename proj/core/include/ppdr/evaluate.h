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


// Evaluation protocol: per seed and method, fit the projection on the
// training split, train the utility classifier on the projected training
// split and the attack classifier on the projected adversary split, then
// score both on the projected testing split (coarse) and on its sanitized
// version (fine).

#ifndef PPDR_EVALUATE_H_
#define PPDR_EVALUATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppdr/classifier.h"
#include "ppdr/dataset.h"
#include "ppdr/projection.h"
#include "ppdr/sanitizer.h"

namespace ppdr {

struct MethodSpec {
  // Full-dimensional rows skip the projection; `method` is then ignored.
  bool full_dimensional = false;
  ProjectionMethod method = ProjectionMethod::kPca;
  std::vector<double> rho;
  std::vector<double> rho_prime;

  static MethodSpec Full();
  static MethodSpec Of(ProjectionMethod method);
  static MethodSpec Jupa(double rho1, double rho1_prime);

  // "full", "pca", ..., "jupa(rho1=1,rho1'=100)".
  std::string Label() const;
};

// The fourteen rows of the published tables, in table order.
std::vector<MethodSpec> TableMethods();

struct ScenarioConfig {
  std::string dataset;
  std::string utility;
  std::string privacy;
  // Additional targets used by jupa-multi only.
  std::vector<std::string> extra_utility;
  std::vector<std::string> extra_privacy;
  std::vector<MethodSpec> methods;
  linalg::Index k = 1;
  double rho0 = kDefaultRho0;
  bool centered = true;
  bool standardize = true;
  SanitizerParams sanitizer;
  GridSpec grid;
  int folds = 5;
  int label_folds = 5;
  std::vector<double> label_multipliers = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int jobs = 1;

  // Throws InvalidConfig.
  void Validate() const;
};

struct SeedResult {
  std::uint64_t seed = 0;
  // Percentages.
  double utility_coarse = 0.0;
  double utility_fine = 0.0;
  double privacy_coarse = 0.0;
  double privacy_fine = 0.0;
  double advantage_coarse = 0.0;
  double advantage_fine = 0.0;
  double utility_c = 0.0;
  double utility_sigma = 0.0;
  double attack_c = 0.0;
  double attack_sigma = 0.0;
  double label_sigma = 0.0;
  std::size_t sanitized = 0;
  std::size_t not_converged = 0;
  std::size_t retried = 0;
  // Attack guesses on the sanitized testing split.
  std::vector<int> fine_guesses;
  // Empty on success; the error otherwise.
  std::string failure;
  std::string failure_code;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over seeds
};

struct MethodRow {
  MethodSpec method;
  Stat utility_coarse;
  Stat utility_fine;
  Stat privacy_coarse;
  Stat privacy_fine;
  Stat advantage_fine;
  std::size_t not_converged = 0;
  std::size_t failed_seeds = 0;
  std::vector<SeedResult> seeds;
};

struct ExperimentReport {
  std::string dataset;
  std::string utility;
  std::string privacy;
  int utility_classes = 0;
  int privacy_classes = 0;
  double baseline = 0.0;  // 100 / privacy_classes
  linalg::Index k = 0;
  int folds = 0;
  std::vector<std::uint64_t> seeds;
  std::size_t training_rows = 0;
  std::size_t testing_rows = 0;
  std::size_t adversary_rows = 0;
  std::vector<MethodRow> rows;

  bool has_failures() const;
  bool has_unconverged() const;
};

// Throws the configuration and data errors; per-method numeric failures are
// recorded in the rows instead.
ExperimentReport RunScenario(const ScenarioConfig& config,
                             const DataSplits& splits);

struct ReleaseResult {
  Standardizer standardizer;
  // Absent for the full-dimensional method.
  std::optional<ProjectionModel> projection;
  double label_sigma = 0.0;
  std::optional<SanitizerModel> sanitizer;
  SanitizeBatchResult batch;  // sanitized testing split, input row order
};

// Coarse and fine perturbation of the testing split with one method, using
// the same per-seed derivations as RunScenario.
ReleaseResult ReleaseTesting(const ScenarioConfig& config, const MethodSpec& method,
                             const DataSplits& splits, std::uint64_t seed);

// Max pairwise gap between the rates at which the attacker outputs each
// class; 0 for a perfectly balanced output. Throws EmptyReport.
double Advantage(std::span<const int> guesses, int num_classes);

}  // namespace ppdr

#endif  // PPDR_EVALUATE_H_
