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

#include "ppdr/archive.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "ppdr/error.h"

namespace ppdr {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kFormatTag = "ppdr-dataset-archive";

SplitRole RoleFromName(const std::string& name) {
  if (name == "training") return SplitRole::kTraining;
  if (name == "testing") return SplitRole::kTesting;
  if (name == "adversary") return SplitRole::kAdversary;
  if (name == "unassigned") return SplitRole::kUnassigned;
  throw Error(ErrorCode::kFormatError, "unknown split role '" + name + "'");
}

std::vector<std::string> SplitPlain(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseStrict(const std::string& s, const fs::path& file) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kFormatError,
                file.string() + ": bad number '" + s + "'");
  }
  return v;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed " + path.string());
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::kFormatError, "to_chars");
  return std::string(buf, ptr);
}

const LabeledDataset& DatasetArchive::split(SplitRole role) const {
  for (const auto& s : splits) {
    if (s.role == role) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "archive has no " + std::string(SplitRoleName(role)) + " split");
}

void WriteArchive(const fs::path& dir, const DatasetArchive& archive) {
  if (archive.splits.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "archive without splits");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());

  const LabeledDataset& first = archive.splits.front();
  ordered_json meta;
  meta["format"] = kFormatTag;
  meta["version"] = kArchiveVersion;
  meta["dataset"] = archive.dataset;
  meta["utility_target"] = archive.utility_target;
  meta["privacy_target"] = archive.privacy_target;
  meta["seed"] = archive.split_spec.seed;
  meta["per_combination"] = archive.split_spec.per_combination;
  meta["split_counts"] = {{"training", archive.split_spec.training},
                          {"testing", archive.split_spec.testing},
                          {"adversary", archive.split_spec.adversary}};
  meta["feature_names"] = first.feature_names;
  ordered_json targets = ordered_json::object();
  for (const auto& [name, t] : first.targets) {
    targets[name] = {{"classes", t.classes}};
  }
  meta["targets"] = targets;
  if (archive.standardizer) {
    std::vector<double> mean(archive.standardizer->mean.begin(),
                             archive.standardizer->mean.end());
    std::vector<double> scale(archive.standardizer->scale.begin(),
                              archive.standardizer->scale.end());
    meta["standardization"] = {{"mean", mean}, {"scale", scale}};
  }
  ordered_json splits = ordered_json::object();

  for (const auto& split : archive.splits) {
    split.Validate();
    if (split.feature_names != first.feature_names) {
      throw Error(ErrorCode::kInvalidArgument, "splits disagree on features");
    }
    const std::string role(SplitRoleName(split.role));
    const std::string file = role + ".csv";
    std::string text = "row_id";
    for (const auto& f : split.feature_names) text += "," + f;
    for (const auto& [name, t] : split.targets) text += "," + name;
    text += "\n";
    for (linalg::Index r = 0; r < split.rows(); ++r) {
      text += std::to_string(split.row_ids[static_cast<std::size_t>(r)]);
      for (linalg::Index c = 0; c < split.cols(); ++c) {
        text += ",";
        text += FormatDouble(split.features(r, c));
      }
      for (const auto& [name, t] : split.targets) {
        text += ",";
        text += std::to_string(t.labels[static_cast<std::size_t>(r)] + 1);
      }
      text += "\n";
    }
    WriteText(dir / file, text);
    splits[role] = {{"file", file}, {"rows", split.rows()}};
  }
  meta["splits"] = splits;
  WriteText(dir / "meta.json", meta.dump(2) + "\n");
}

DatasetArchive ReadArchive(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  std::ifstream in(meta_path);
  if (!in) throw Error(ErrorCode::kFileNotFound, meta_path.string());
  ordered_json meta;
  try {
    meta = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, meta_path.string() + ": " + e.what());
  }
  if (meta.value("format", "") != kFormatTag) {
    throw Error(ErrorCode::kFormatError, "not a ppdr dataset archive");
  }
  if (meta.value("version", 0) != kArchiveVersion) {
    throw Error(ErrorCode::kFormatError,
                "unsupported archive version " +
                    std::to_string(meta.value("version", 0)));
  }

  DatasetArchive archive;
  try {
    archive.dataset = meta.at("dataset").get<std::string>();
    archive.utility_target = meta.at("utility_target").get<std::string>();
    archive.privacy_target = meta.at("privacy_target").get<std::string>();
    archive.split_spec.seed = meta.at("seed").get<std::uint64_t>();
    archive.split_spec.per_combination =
        meta.at("per_combination").get<std::size_t>();
    archive.split_spec.training =
        meta.at("split_counts").at("training").get<std::size_t>();
    archive.split_spec.testing =
        meta.at("split_counts").at("testing").get<std::size_t>();
    archive.split_spec.adversary =
        meta.at("split_counts").at("adversary").get<std::size_t>();
    if (meta.contains("standardization")) {
      auto mean = meta["standardization"].at("mean").get<std::vector<double>>();
      auto scale = meta["standardization"].at("scale").get<std::vector<double>>();
      Standardizer s;
      s.mean = Eigen::Map<const linalg::Vector>(mean.data(),
                                                static_cast<linalg::Index>(mean.size()));
      s.scale = Eigen::Map<const linalg::Vector>(scale.data(),
                                                 static_cast<linalg::Index>(scale.size()));
      archive.standardizer = std::move(s);
    }
    const auto feature_names =
        meta.at("feature_names").get<std::vector<std::string>>();
    std::map<std::string, std::vector<std::string>> classes;
    for (const auto& [name, t] : meta.at("targets").items()) {
      classes[name] = t.at("classes").get<std::vector<std::string>>();
    }

    for (const auto& [role_name, info] : meta.at("splits").items()) {
      const fs::path file = dir / info.at("file").get<std::string>();
      const auto expected_rows = info.at("rows").get<std::size_t>();
      std::ifstream split_in(file);
      if (!split_in) throw Error(ErrorCode::kFileNotFound, file.string());
      std::string line;
      std::getline(split_in, line);
      const auto header = SplitPlain(line);
      const std::size_t width = 1 + feature_names.size() + classes.size();
      if (header.size() != width || header[0] != "row_id") {
        throw Error(ErrorCode::kFormatError, file.string() + ": header");
      }
      LabeledDataset ds;
      ds.role = RoleFromName(role_name);
      ds.feature_names = feature_names;
      ds.features.resize(static_cast<linalg::Index>(expected_rows),
                         static_cast<linalg::Index>(feature_names.size()));
      std::vector<Target*> target_cols;
      for (std::size_t k = 0; k < classes.size(); ++k) {
        const std::string& name = header[1 + feature_names.size() + k];
        auto it = classes.find(name);
        if (it == classes.end()) {
          throw Error(ErrorCode::kFormatError,
                      file.string() + ": unknown target column " + name);
        }
        Target& t = ds.targets[name];
        t.classes = it->second;
        target_cols.push_back(&t);
      }
      std::size_t r = 0;
      while (std::getline(split_in, line)) {
        if (line.empty()) continue;
        if (r >= expected_rows) {
          throw Error(ErrorCode::kFormatError, file.string() + ": extra rows");
        }
        const auto fields = SplitPlain(line);
        if (fields.size() != width) {
          throw Error(ErrorCode::kFormatError,
                      file.string() + ": row " + std::to_string(r) + " width");
        }
        ds.row_ids.push_back(std::stoull(fields[0]));
        for (std::size_t c = 0; c < feature_names.size(); ++c) {
          ds.features(static_cast<linalg::Index>(r),
                      static_cast<linalg::Index>(c)) =
              ParseStrict(fields[1 + c], file);
        }
        for (std::size_t k = 0; k < target_cols.size(); ++k) {
          const int label = std::stoi(fields[1 + feature_names.size() + k]) - 1;
          target_cols[k]->labels.push_back(label);
        }
        ++r;
      }
      if (r != expected_rows) {
        throw Error(ErrorCode::kFormatError, file.string() + ": row count");
      }
      ds.Validate();
      archive.splits.push_back(std::move(ds));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, meta_path.string() + ": " + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::kFormatError, dir.string() + ": bad integer field");
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::kFormatError, dir.string() + ": integer overflow");
  }
  return archive;
}

std::string ArchiveDigest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&](unsigned char c) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  };
  for (const auto& f : files) {
    for (char c : f.filename().string()) mix(static_cast<unsigned char>(c));
    std::ifstream in(f, std::ios::binary);
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
      for (std::streamsize i = 0; i < in.gcount(); ++i) {
        mix(static_cast<unsigned char>(buf[i]));
      }
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace ppdr
