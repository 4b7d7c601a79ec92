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


#include "ppdr/config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ppdr/error.h"

namespace ppdr {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void Invalid(const std::string& msg) {
  throw Error(ErrorCode::kInvalidConfig, msg);
}

ColumnSpec Num(std::string name) { return {std::move(name), ColumnKind::kNumeric, {}, {}}; }
ColumnSpec Cat(std::string name) { return {std::move(name), ColumnKind::kCategorical, {}, {}}; }
ColumnSpec Lab(std::string name) { return {std::move(name), ColumnKind::kLabel, {}, {}}; }

std::vector<ColumnSpec> NumberedFeatures(int count, int digits) {
  std::vector<ColumnSpec> out;
  for (int i = 1; i <= count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "feature_%0*d", digits, i);
    out.push_back(Num(buf));
  }
  return out;
}

SplitSpec Split(std::size_t per, std::size_t tr, std::size_t te, std::size_t ad) {
  SplitSpec s;
  s.per_combination = per;
  s.training = tr;
  s.testing = te;
  s.adversary = ad;
  return s;
}

std::vector<DatasetPreset> BuildPresets() {
  std::vector<DatasetPreset> out;

  DatasetPreset har;
  har.name = "har";
  har.file = "har/har.csv";
  har.schema.columns = NumberedFeatures(561, 3);
  har.schema.columns.push_back(Lab("activity"));
  har.schema.columns.push_back(Lab("subject"));
  har.utility = "activity";
  har.privacy = "subject";
  har.split = Split(20, 8, 4, 8);
  har.k = 5;
  out.push_back(har);

  DatasetPreset census;
  census.name = "census";
  census.file = "census/adult.csv";
  census.schema.columns = {Num("age"), Cat("workclass"), Num("fnlwgt"),
                           Cat("education"), Num("education-num"),
                           Cat("marital-status"), Cat("occupation"),
                           Cat("relationship"), Cat("race"), Lab("sex"),
                           Num("capital-gain"), Num("capital-loss"),
                           Num("hours-per-week"), Cat("native-country"),
                           Lab("income")};
  census.utility = "income";
  census.privacy = "sex";
  census.split = Split(750, 300, 150, 300);
  census.k = 1;
  out.push_back(census);

  DatasetPreset swap = census;
  swap.name = "census-swap";
  swap.utility = "sex";
  swap.privacy = "income";
  out.push_back(swap);

  DatasetPreset bank;
  bank.name = "bank";
  bank.file = "bank/bank-full.csv";
  bank.schema.columns = {Num("age"), Cat("job"), Lab("marital"), Cat("education"),
                         Cat("default"), Num("balance"), Cat("housing"),
                         Cat("loan"), Cat("contact"), Num("day"), Cat("month"),
                         Num("duration"), Num("campaign"), Num("pdays"),
                         Num("previous"), Cat("poutcome"), Lab("y")};
  bank.utility = "y";
  bank.privacy = "marital";
  bank.split = Split(410, 164, 82, 164);
  bank.k = 1;
  out.push_back(bank);

  DatasetPreset har_s;
  har_s.name = "har-surrogate";
  har_s.file = "har-surrogate.csv";
  har_s.schema.columns = NumberedFeatures(40, 2);
  har_s.schema.columns.push_back(Lab("activity"));
  har_s.schema.columns.push_back(Lab("subject"));
  har_s.utility = "activity";
  har_s.privacy = "subject";
  har_s.split = har.split;
  har_s.k = 5;
  out.push_back(har_s);

  DatasetPreset bank_s;
  bank_s.name = "bank-surrogate";
  bank_s.file = "bank-surrogate.csv";
  bank_s.schema.columns = {Num("age"), Cat("job"), Lab("marital"),
                           Cat("education"), Num("balance"), Cat("housing"),
                           Num("duration"), Num("campaign"), Lab("y")};
  bank_s.utility = "y";
  bank_s.privacy = "marital";
  bank_s.split = bank.split;
  bank_s.k = 1;
  out.push_back(bank_s);
  return out;
}

const std::vector<DatasetPreset>& Presets() {
  static const std::vector<DatasetPreset> presets = BuildPresets();
  return presets;
}

template <typename T>
T Get(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    Invalid("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

const DatasetPreset& Preset(std::string_view name) {
  for (const auto& p : Presets()) {
    if (p.name == name) return p;
  }
  Invalid("unknown dataset '" + std::string(name) + "'");
}

std::vector<std::string> PresetNames() {
  std::vector<std::string> out;
  for (const auto& p : Presets()) out.push_back(p.name);
  return out;
}

std::filesystem::path DataDir() {
  const char* env = std::getenv("PPDR_DATA_DIR");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("data");
}

Profile ProfileByName(std::string_view name) {
  if (name == "desk") return {3, 5};
  if (name == "full") return {15, 10};
  Invalid("unknown profile '" + std::string(name) + "' (desk or full)");
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "dataset", "archive", "data", "out", "profile", "seed", "seeds", "folds",
      "label_folds", "jobs", "utility", "privacy", "extra_utility",
      "extra_privacy", "method", "rho1", "rho1p", "k", "rho0", "lambda",
      "alpha", "margin", "max_iters", "retry", "match_depth", "c_grid", "sigma_grid",
      "label_sigma_grid", "centered", "standardize", "debug_sidecar"};
  return keys;
}

RunConfig ParseRunConfig(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    Invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) Invalid("config must be a JSON object");
  const auto& keys = ConfigKeys();
  for (const auto& [key, value] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      Invalid("unknown config key '" + key + "'");
    }
  }
  RunConfig c;
  auto read = [&](const char* key, auto& field) {
    if (doc.contains(key)) {
      field = Get<std::decay_t<decltype(field)>>(doc.at(key), key);
    }
  };
  read("dataset", c.dataset);
  read("archive", c.archive);
  read("data", c.data);
  read("out", c.out);
  read("profile", c.profile);
  read("seed", c.seed);
  read("seeds", c.seeds);
  read("folds", c.folds);
  read("label_folds", c.label_folds);
  read("jobs", c.jobs);
  read("utility", c.utility);
  read("privacy", c.privacy);
  read("extra_utility", c.extra_utility);
  read("extra_privacy", c.extra_privacy);
  read("method", c.method);
  read("rho1", c.rho1);
  read("rho1p", c.rho1p);
  read("k", c.k);
  read("rho0", c.rho0);
  read("lambda", c.lambda);
  read("alpha", c.alpha);
  read("margin", c.margin);
  read("max_iters", c.max_iters);
  read("retry", c.retry);
  read("match_depth", c.match_depth);
  read("c_grid", c.c_grid);
  read("sigma_grid", c.sigma_grid);
  read("label_sigma_grid", c.label_sigma_grid);
  read("centered", c.centered);
  read("standardize", c.standardize);
  read("debug_sidecar", c.debug_sidecar);
  ValidateRunConfig(c);
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str());
}

std::string RunConfigToJson(const RunConfig& c) {
  ordered_json doc;
  doc["dataset"] = c.dataset;
  doc["archive"] = c.archive;
  doc["data"] = c.data;
  doc["out"] = c.out;
  doc["profile"] = c.profile;
  doc["seed"] = c.seed;
  doc["seeds"] = c.seeds;
  doc["folds"] = c.folds;
  doc["label_folds"] = c.label_folds;
  doc["jobs"] = c.jobs;
  doc["utility"] = c.utility;
  doc["privacy"] = c.privacy;
  doc["extra_utility"] = c.extra_utility;
  doc["extra_privacy"] = c.extra_privacy;
  doc["method"] = c.method;
  doc["rho1"] = c.rho1;
  doc["rho1p"] = c.rho1p;
  doc["k"] = c.k;
  doc["rho0"] = c.rho0;
  doc["lambda"] = c.lambda;
  doc["alpha"] = c.alpha;
  doc["margin"] = c.margin;
  doc["max_iters"] = c.max_iters;
  doc["retry"] = c.retry;
  doc["match_depth"] = c.match_depth;
  doc["c_grid"] = c.c_grid;
  doc["sigma_grid"] = c.sigma_grid;
  doc["label_sigma_grid"] = c.label_sigma_grid;
  doc["centered"] = c.centered;
  doc["standardize"] = c.standardize;
  doc["debug_sidecar"] = c.debug_sidecar;
  return doc.dump(2) + "\n";
}

void ValidateRunConfig(const RunConfig& c) {
  if (!c.dataset.empty()) (void)Preset(c.dataset);
  (void)ProfileByName(c.profile);
  if (c.seeds < 0) Invalid("seeds must be >= 0");
  if (c.folds < 0 || c.folds == 1) Invalid("folds must be >= 2 (0 selects the profile)");
  if (c.label_folds < 2) Invalid("label_folds must be >= 2");
  if (c.jobs < 0) Invalid("jobs must be >= 0");
  if (c.k < 0) Invalid("k must be >= 1 (0 selects the preset)");
  if (!(c.rho0 > 0.0) || !std::isfinite(c.rho0)) Invalid("rho0 must be positive");
  for (double v : c.rho1) {
    if (!(v >= 0.0) || !std::isfinite(v)) Invalid("rho1 must be >= 0");
  }
  for (double v : c.rho1p) {
    if (!(v >= 0.0) || !std::isfinite(v)) Invalid("rho1p must be >= 0");
  }
  if (!(c.lambda >= 0.0) || !std::isfinite(c.lambda)) Invalid("lambda must be >= 0");
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) Invalid("alpha must be positive");
  if (!(c.margin >= 0.0) || !std::isfinite(c.margin)) Invalid("margin must be >= 0");
  if (c.max_iters < 1) Invalid("max_iters must be >= 1");
  if (c.method.empty()) Invalid("method list is empty");
  for (const auto& m : c.method) {
    if (m == "table" || m == "full") continue;
    try {
      (void)ParseProjectionMethod(m);
    } catch (const Error&) {
      Invalid("unknown method '" + m + "'");
    }
  }
  for (const auto* grid : {&c.c_grid, &c.sigma_grid, &c.label_sigma_grid}) {
    if (grid->empty()) Invalid("grids must be non-empty");
    for (double v : *grid) {
      if (!(v > 0.0) || !std::isfinite(v)) Invalid("grid values must be positive");
    }
  }
}

DatasetArchive PrepareArchive(const DatasetPreset& preset,
                              const std::filesystem::path& csv,
                              std::uint64_t seed) {
  const LabeledDataset data = BinaryEncode(LoadCsv(csv, preset.schema));
  SplitSpec spec = preset.split;
  spec.seed = seed;
  DataSplits splits = BalancedSample(data, preset.utility, preset.privacy, spec);
  DatasetArchive archive;
  archive.dataset = preset.name;
  archive.utility_target = preset.utility;
  archive.privacy_target = preset.privacy;
  archive.split_spec = spec;
  archive.standardizer = Standardizer::Fit(splits.training.features);
  archive.splits = {std::move(splits.training), std::move(splits.testing),
                    std::move(splits.adversary)};
  return archive;
}

DataSplits SplitsOf(const DatasetArchive& archive) {
  return {archive.split(SplitRole::kTraining), archive.split(SplitRole::kTesting),
          archive.split(SplitRole::kAdversary)};
}

ScenarioConfig ToScenario(const RunConfig& c) {
  ValidateRunConfig(c);
  if (c.dataset.empty()) Invalid("dataset is required");
  const DatasetPreset& preset = Preset(c.dataset);
  const Profile profile = ProfileByName(c.profile);

  ScenarioConfig s;
  s.dataset = preset.name;
  s.utility = c.utility.empty() ? preset.utility : c.utility;
  s.privacy = c.privacy.empty() ? preset.privacy : c.privacy;
  s.extra_utility = c.extra_utility;
  s.extra_privacy = c.extra_privacy;
  s.k = c.k > 0 ? static_cast<linalg::Index>(c.k) : preset.k;
  s.rho0 = c.rho0;
  s.centered = c.centered;
  s.standardize = c.standardize;
  s.sanitizer.lambda = c.lambda;
  s.sanitizer.alpha = c.alpha;
  s.sanitizer.margin = c.margin;
  s.sanitizer.max_iters = c.max_iters;
  s.sanitizer.retry = c.retry;
  s.sanitizer.match_depth = c.match_depth;
  s.grid.c = c.c_grid;
  s.grid.sigma_multipliers = c.sigma_grid;
  s.label_multipliers = c.label_sigma_grid;
  s.folds = c.folds > 0 ? c.folds : profile.folds;
  s.label_folds = c.label_folds;
  const int seeds = c.seeds > 0 ? c.seeds : profile.seeds;
  s.seeds.clear();
  for (int i = 0; i < seeds; ++i) s.seeds.push_back(c.seed + static_cast<std::uint64_t>(i));
  s.jobs = c.jobs > 0 ? c.jobs
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  for (const auto& m : c.method) {
    if (m == "table") {
      for (auto& t : TableMethods()) s.methods.push_back(t);
    } else if (m == "full") {
      s.methods.push_back(MethodSpec::Full());
    } else {
      const ProjectionMethod pm = ParseProjectionMethod(m);
      if (pm == ProjectionMethod::kJupa || pm == ProjectionMethod::kJupaMulti) {
        for (double r : c.rho1) {
          for (double rp : c.rho1p) {
            MethodSpec spec = MethodSpec::Jupa(r, rp);
            spec.method = pm;
            s.methods.push_back(spec);
          }
        }
      } else {
        s.methods.push_back(MethodSpec::Of(pm));
      }
    }
  }
  s.Validate();
  return s;
}

}  // namespace ppdr
