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


// Run configuration and dataset presets.
//
// A run config is a JSON object. Every key has a command-line flag of the
// same name with '_' written as '-' (e.g. "max_iters" and --max-iters);
// flags override the file. Unknown keys are rejected.

#ifndef PPDR_CONFIG_H_
#define PPDR_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppdr/archive.h"
#include "ppdr/dataset.h"
#include "ppdr/evaluate.h"

namespace ppdr {

struct DatasetPreset {
  std::string name;
  // Relative to the data directory.
  std::filesystem::path file;
  Schema schema;
  std::string utility;
  std::string privacy;
  SplitSpec split;
  linalg::Index k = 1;
};

// har, census, census-swap, bank, har-surrogate, bank-surrogate.
// Throws InvalidConfig for other names.
const DatasetPreset& Preset(std::string_view name);
std::vector<std::string> PresetNames();

// $PPDR_DATA_DIR, else "data".
std::filesystem::path DataDir();

struct Profile {
  int seeds = 3;
  int folds = 5;
};

// desk or full. Throws InvalidConfig.
Profile ProfileByName(std::string_view name);

struct RunConfig {
  std::string dataset;
  // Prepared archive directory; empty selects <out>/archive.
  std::string archive;
  // Raw CSV; empty selects DataDir() / preset file.
  std::string data;
  std::string out = "out";
  std::string profile = "desk";
  std::uint64_t seed = 42;
  // 0 selects the profile value.
  int seeds = 0;
  int folds = 0;
  int label_folds = 5;
  // 0 selects the hardware concurrency.
  int jobs = 0;
  std::string utility;  // empty selects the preset target
  std::string privacy;
  std::vector<std::string> extra_utility;
  std::vector<std::string> extra_privacy;
  // Method names, or "table" for the fourteen published rows.
  std::vector<std::string> method = {"table"};
  // jupa / jupa-multi rows are generated for every (rho1, rho1p) pair.
  std::vector<double> rho1 = {1.0};
  std::vector<double> rho1p = {1.0};
  long k = 0;  // 0 selects the preset value
  double rho0 = kDefaultRho0;
  double lambda = 1e-3;
  double alpha = 0.1;
  double margin = 0.0;
  int max_iters = 500;
  bool retry = true;
  bool match_depth = true;
  std::vector<double> c_grid = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> sigma_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> label_sigma_grid = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  bool centered = true;
  bool standardize = true;
  // Write a sidecar with the drawn targets next to released data.
  bool debug_sidecar = false;
};

// Every config key, in declaration order.
const std::vector<std::string>& ConfigKeys();

// Throws InvalidConfig on unknown keys, wrong types or out-of-range values.
RunConfig ParseRunConfig(std::string_view json_text);
RunConfig LoadRunConfig(const std::filesystem::path& path);
std::string RunConfigToJson(const RunConfig& config);

// Range checks shared by file and flag input. Throws InvalidConfig.
void ValidateRunConfig(const RunConfig& config);

// Loads the preset's CSV, binary-encodes it and draws the balanced splits.
// The standardizer fitted on the training split is recorded but not applied.
DatasetArchive PrepareArchive(const DatasetPreset& preset,
                              const std::filesystem::path& csv,
                              std::uint64_t seed);

DataSplits SplitsOf(const DatasetArchive& archive);

// Expands methods and resolves preset and profile defaults.
ScenarioConfig ToScenario(const RunConfig& config);

}  // namespace ppdr

#endif  // PPDR_CONFIG_H_
