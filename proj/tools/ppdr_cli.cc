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


// ppdr: prepare datasets, run evaluations, reproduce the published tables
// and release sanitized data.
//
// Exit codes: 0 success, 2 usage or validation error, 3 some samples did not
// converge, 4 numeric failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppdr/archive.h"
#include "ppdr/config.h"
#include "ppdr/error.h"
#include "ppdr/evaluate.h"
#include "ppdr/report.h"
#include "ppdr/synth.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;
constexpr int kExitNumeric = 4;

enum class Kind { kString, kU64, kInt, kDouble, kBool, kStringList, kDoubleList };

struct KeyInfo {
  const char* key;
  Kind kind;
  const char* help;
};

const KeyInfo kKeys[] = {
    {"dataset", Kind::kString,
     "har | census | census-swap | bank | har-surrogate | bank-surrogate"},
    {"archive", Kind::kString, "prepared archive directory (default OUT/archive)"},
    {"data", Kind::kString, "raw CSV (default $PPDR_DATA_DIR/<preset file>)"},
    {"out", Kind::kString, "output directory"},
    {"profile", Kind::kString, "desk (3 seeds, 5 folds) | full (15 seeds, 10 folds)"},
    {"seed", Kind::kU64, "base seed; run seeds are seed, seed+1, ..."},
    {"seeds", Kind::kInt, "number of seeds (0: profile)"},
    {"folds", Kind::kInt, "classifier CV folds (0: profile)"},
    {"label_folds", Kind::kInt, "CV folds for the label bandwidth"},
    {"jobs", Kind::kInt, "worker threads (0: core count)"},
    {"utility", Kind::kString, "utility target (default: preset)"},
    {"privacy", Kind::kString, "privacy target (default: preset)"},
    {"extra_utility", Kind::kStringList, "extra utility targets for jupa-multi"},
    {"extra_privacy", Kind::kStringList, "extra privacy targets for jupa-multi"},
    {"method", Kind::kStringList,
     "table | full | pca | random | dca | mdr | jupa | jupa-multi"},
    {"rho1", Kind::kDoubleList, "jupa privacy between-class weights"},
    {"rho1p", Kind::kDoubleList, "jupa privacy within-class weights"},
    {"k", Kind::kInt, "projection dimension (0: preset)"},
    {"rho0", Kind::kDouble, "pencil ridge"},
    {"lambda", Kind::kDouble, "noise norm regularizer"},
    {"alpha", Kind::kDouble, "sanitizer learning rate"},
    {"margin", Kind::kDouble, "stop only once the loss is <= -margin"},
    {"max_iters", Kind::kInt, "sanitizer iteration cap"},
    {"retry", Kind::kBool, "retry unconverged samples from a nearby target-class sample"},
    {"match_depth", Kind::kBool, "stop no shallower than a random member of the target class"},
    {"c_grid", Kind::kDoubleList, "SVM C grid"},
    {"sigma_grid", Kind::kDoubleList, "SVM sigma grid, multiples of the median distance"},
    {"label_sigma_grid", Kind::kDoubleList,
     "label bandwidth grid, multiples of the median distance"},
    {"centered", Kind::kBool, "subtract the training mean before projecting"},
    {"standardize", Kind::kBool, "z-score features with training statistics"},
    {"debug_sidecar", Kind::kBool, "release: also write the drawn targets"},
};

std::string FlagName(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

// Raw flag values per key; converted into a JSON patch over the config file.
struct FlagValues {
  std::map<std::string, std::vector<std::string>> raw;
  std::string config;
};

void AddConfigFlags(CLI::App* app, FlagValues& values) {
  app->add_option("--config", values.config, "JSON run config; flags override it");
  for (const auto& k : kKeys) {
    auto* opt = app->add_option(FlagName(k.key), values.raw[k.key], k.help);
    if (k.kind == Kind::kStringList || k.kind == Kind::kDoubleList) {
      opt->expected(1, CLI::detail::expected_max_vector_size)->delimiter(',');
    } else {
      opt->expected(1);
    }
  }
}

json Convert(const KeyInfo& k, const std::vector<std::string>& v) {
  auto fail = [&](const std::string& s) -> json {
    throw ppdr::Error(ppdr::ErrorCode::kInvalidConfig,
                      FlagName(k.key) + ": cannot parse '" + s + "'");
  };
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(s, &pos);
      if (pos != s.size()) fail(s);
      return d;
    } catch (const std::logic_error&) {
      fail(s);
    }
    return 0.0;
  };
  switch (k.kind) {
    case Kind::kString:
      return v.back();
    case Kind::kU64:
    case Kind::kInt: {
      const std::string& s = v.back();
      try {
        std::size_t pos = 0;
        if (k.kind == Kind::kU64) {
          if (!s.empty() && s[0] == '-') fail(s);
          const unsigned long long x = std::stoull(s, &pos);
          if (pos != s.size()) fail(s);
          return x;
        }
        const long long x = std::stoll(s, &pos);
        if (pos != s.size()) fail(s);
        return x;
      } catch (const std::logic_error&) {
        return fail(s);
      }
    }
    case Kind::kDouble:
      return to_double(v.back());
    case Kind::kBool: {
      const std::string& s = v.back();
      if (s == "true" || s == "1" || s == "on") return true;
      if (s == "false" || s == "0" || s == "off") return false;
      return fail(s);
    }
    case Kind::kStringList:
      return v;
    case Kind::kDoubleList: {
      json out = json::array();
      for (const auto& s : v) out.push_back(to_double(s));
      return out;
    }
  }
  return nullptr;
}

ppdr::RunConfig ResolveConfig(const FlagValues& values) {
  json doc = json::object();
  if (!values.config.empty()) {
    std::ifstream in(values.config, std::ios::binary);
    if (!in) throw ppdr::Error(ppdr::ErrorCode::kFileNotFound, values.config);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      doc = json::parse(ss.str());
    } catch (const json::exception& e) {
      throw ppdr::Error(ppdr::ErrorCode::kInvalidConfig,
                        values.config + ": " + e.what());
    }
    if (!doc.is_object()) {
      throw ppdr::Error(ppdr::ErrorCode::kInvalidConfig,
                        values.config + ": not a JSON object");
    }
  }
  for (const auto& k : kKeys) {
    const auto& v = values.raw.at(k.key);
    if (!v.empty()) doc[k.key] = Convert(k, v);
  }
  return ppdr::ParseRunConfig(doc.dump());
}

int ExitCodeFor(ppdr::ErrorCode code) {
  using ppdr::ErrorCode;
  switch (code) {
    case ErrorCode::kNotSquare:
    case ErrorCode::kNotSymmetric:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNotPositiveDefinite:
    case ErrorCode::kEmptyPencil:
    case ErrorCode::kUnsupportedKernelGradient:
      return kExitNumeric;
    case ErrorCode::kNotConverged:
      return kExitPartial;
    default:
      return kExitUsage;
  }
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw ppdr::Error(ppdr::ErrorCode::kIoError, "cannot write " + path.string());
}

fs::path CsvPath(const ppdr::RunConfig& c, const ppdr::DatasetPreset& preset) {
  return c.data.empty() ? ppdr::DataDir() / preset.file : fs::path(c.data);
}

fs::path ArchivePath(const ppdr::RunConfig& c) {
  return c.archive.empty() ? fs::path(c.out) / "archive" : fs::path(c.archive);
}

void RequireDataset(const ppdr::RunConfig& c) {
  if (c.dataset.empty()) {
    throw ppdr::Error(ppdr::ErrorCode::kInvalidConfig, "--dataset is required");
  }
}

// An existing archive is read; otherwise the splits are drawn from the raw
// CSV in memory.
ppdr::DatasetArchive LoadOrPrepare(const ppdr::RunConfig& c) {
  const fs::path dir = ArchivePath(c);
  if (fs::exists(dir / "meta.json")) return ppdr::ReadArchive(dir);
  const auto& preset = ppdr::Preset(c.dataset);
  const fs::path csv = CsvPath(c, preset);
  if (!fs::exists(csv)) {
    throw ppdr::Error(ppdr::ErrorCode::kFileNotFound,
                      "no archive at " + dir.string() + " and no raw data at " +
                          csv.string());
  }
  return ppdr::PrepareArchive(preset, csv, c.seed);
}

int CmdPrepare(const ppdr::RunConfig& c) {
  RequireDataset(c);
  const auto& preset = ppdr::Preset(c.dataset);
  const fs::path csv = CsvPath(c, preset);
  if (!fs::exists(csv)) {
    throw ppdr::Error(ppdr::ErrorCode::kFileNotFound, "raw data not found: " + csv.string());
  }
  const ppdr::DatasetArchive archive = ppdr::PrepareArchive(preset, csv, c.seed);
  const fs::path dir = ArchivePath(c);
  ppdr::WriteArchive(dir, archive);
  const auto& first = archive.splits.front();
  const int lu = first.target(preset.utility).num_classes();
  const int lp = first.target(preset.privacy).num_classes();
  std::cout << preset.name << ": " << first.cols() << " features, " << lu << " x "
            << lp << " = " << lu * lp << " (" << preset.utility << ", "
            << preset.privacy << ") combinations\n";
  for (const auto& s : archive.splits) {
    std::cout << "  " << ppdr::SplitRoleName(s.role) << ": " << s.rows() << " rows ("
              << s.rows() / (lu * lp) << " per combination)\n";
  }
  std::cout << "archive " << dir.string() << " digest " << ppdr::ArchiveDigest(dir)
            << "\n";
  return kExitOk;
}

int StatusOf(const ppdr::ExperimentReport& report) {
  if (report.has_failures()) return kExitNumeric;
  if (report.has_unconverged()) return kExitPartial;
  return kExitOk;
}

int CmdRun(const ppdr::RunConfig& c) {
  RequireDataset(c);
  const ppdr::ScenarioConfig scenario = ppdr::ToScenario(c);
  const ppdr::DatasetArchive archive = LoadOrPrepare(c);
  const ppdr::ExperimentReport report = ppdr::RunScenario(scenario, ppdr::SplitsOf(archive));
  const fs::path out(c.out);
  WriteFile(out / "report.json", ppdr::ReportToJson(report));
  const std::string table = ppdr::ReportToTable(report);
  WriteFile(out / "report.txt", table);
  std::cout << table;
  return StatusOf(report);
}

int CmdReproduce(ppdr::RunConfig c, int table_number) {
  const ppdr::ReferenceTable& ref = ppdr::PublishedTable(table_number);
  if (c.dataset.empty()) c.dataset = ref.dataset;
  c.method = {"table"};
  const ppdr::ScenarioConfig scenario = ppdr::ToScenario(c);
  const ppdr::DatasetArchive archive = LoadOrPrepare(c);
  const ppdr::ExperimentReport report = ppdr::RunScenario(scenario, ppdr::SplitsOf(archive));
  const fs::path out = fs::path(c.out) / ("table" + std::to_string(table_number));
  WriteFile(out / "report.json", ppdr::ReportToJson(report));
  WriteFile(out / "report.txt", ppdr::ReportToTable(report));
  WriteFile(out / "comparison.json", ppdr::ComparisonJson(report, ref));
  const std::string cmp = ppdr::ComparisonTable(report, ref);
  WriteFile(out / "comparison.txt", cmp);
  std::cout << cmp;
  return StatusOf(report);
}

int CmdRelease(const ppdr::RunConfig& c) {
  RequireDataset(c);
  const ppdr::ScenarioConfig scenario = ppdr::ToScenario(c);
  if (scenario.methods.size() != 1) {
    throw ppdr::Error(ppdr::ErrorCode::kInvalidConfig,
                      "release needs exactly one method (got " +
                          std::to_string(scenario.methods.size()) + ")");
  }
  const ppdr::DatasetArchive archive = LoadOrPrepare(c);
  const ppdr::DataSplits splits = ppdr::SplitsOf(archive);
  const ppdr::ReleaseResult rel =
      ppdr::ReleaseTesting(scenario, scenario.methods.front(), splits, c.seed);

  // Released rows carry no labels at all.
  ppdr::LabeledDataset released;
  released.features = rel.batch.z;
  released.role = ppdr::SplitRole::kTesting;
  released.row_ids = splits.testing.row_ids;
  for (long j = 0; j < released.features.cols(); ++j) {
    released.feature_names.push_back(rel.projection ? "z" + std::to_string(j + 1)
                                                    : splits.testing.feature_names
                                                          [static_cast<std::size_t>(j)]);
  }
  ppdr::DatasetArchive out;
  out.dataset = archive.dataset;
  out.split_spec = archive.split_spec;
  out.splits = {released};
  const fs::path dir = fs::path(c.out) / "release";
  ppdr::WriteArchive(dir, out);
  if (rel.projection) ppdr::SaveProjection(dir / "projection.json", *rel.projection);

  if (c.debug_sidecar) {
    std::string text = "row_id,source,target,iterations,converged\n";
    for (std::size_t r = 0; r < rel.batch.traces.size(); ++r) {
      const auto& t = rel.batch.traces[r];
      text += std::to_string(released.row_ids[r]) + "," + std::to_string(t.source + 1) +
              "," + std::to_string(t.target + 1) + "," + std::to_string(t.iterations) +
              "," + (t.converged ? "1" : "0") + "\n";
    }
    WriteFile(fs::path(c.out) / "release-debug" / "targets.csv", text);
  }
  std::cout << "released " << released.rows() << " rows x " << released.cols()
            << " to " << dir.string() << "; " << rel.batch.not_converged.size()
            << " did not converge\n";
  return rel.batch.not_converged.empty() ? kExitOk : kExitPartial;
}

int CmdSynth(const ppdr::RunConfig& c) {
  RequireDataset(c);
  const auto& preset = ppdr::Preset(c.dataset);
  const fs::path path = c.data.empty() ? fs::path(c.out) / preset.file : fs::path(c.data);
  ppdr::WriteSurrogate(path, preset.name, c.seed);
  std::cout << "wrote " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utility-aware privacy-preserving data release: coarse projection "
               "plus kernel-MMD sanitization, with an SVM evaluation harness."};
  app.require_subcommand(1);

  FlagValues prepare_flags, run_flags, reproduce_flags, release_flags, synth_flags;
  auto* prepare = app.add_subcommand("prepare", "encode a raw CSV and write the split archive");
  AddConfigFlags(prepare, prepare_flags);
  auto* run = app.add_subcommand("run", "evaluate methods and write report.json / report.txt");
  AddConfigFlags(run, run_flags);
  int table = 0;
  auto* reproduce = app.add_subcommand("reproduce", "run a published table and compare");
  AddConfigFlags(reproduce, reproduce_flags);
  reproduce->add_option("--table", table, "published table, 1-4")->required();
  auto* release = app.add_subcommand("release", "sanitize the testing split with one method");
  AddConfigFlags(release, release_flags);
  auto* synth = app.add_subcommand("synth", "write a synthetic surrogate CSV");
  AddConfigFlags(synth, synth_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*prepare) return CmdPrepare(ResolveConfig(prepare_flags));
    if (*run) return CmdRun(ResolveConfig(run_flags));
    if (*reproduce) return CmdReproduce(ResolveConfig(reproduce_flags), table);
    if (*release) return CmdRelease(ResolveConfig(release_flags));
    if (*synth) return CmdSynth(ResolveConfig(synth_flags));
  } catch (const ppdr::Error& e) {
    std::cerr << "ppdr: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ppdr: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
