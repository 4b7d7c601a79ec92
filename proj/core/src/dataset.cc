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

#include "ppdr/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ppdr/error.h"
#include "ppdr/rng.h"

namespace ppdr {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t\r");
    const auto last = f.find_last_not_of(" \t\r");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

bool ParseDouble(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

// Numbers sort numerically, everything else lexicographically; used for the
// order of label classes only.
bool NaturalLess(const std::string& a, const std::string& b) {
  double x, y;
  const bool na = ParseDouble(a, x);
  const bool nb = ParseDouble(b, y);
  if (na && nb) return x < y || (x == y && a < b);
  if (na != nb) return na;
  return a < b;
}

}  // namespace

std::string_view SplitRoleName(SplitRole role) {
  switch (role) {
    case SplitRole::kTraining: return "training";
    case SplitRole::kTesting: return "testing";
    case SplitRole::kAdversary: return "adversary";
    case SplitRole::kUnassigned: return "unassigned";
  }
  return "unassigned";
}

RawTable ParseCsv(std::istream& in, const Schema& schema,
                  const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kSchemaMismatch, source_name + ": missing header");
  }
  char delim = schema.delimiter;
  if (delim == '\0') {
    delim = (line.find(';') != std::string::npos &&
             line.find(',') == std::string::npos)
                ? ';'
                : ',';
  }
  RawTable table;
  table.schema = schema;
  table.header = SplitCsvLine(line, delim);

  std::unordered_map<std::string, std::size_t> spec_index;
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    spec_index.emplace(schema.columns[i].name, i);
  }
  std::vector<const ColumnSpec*> header_specs;
  std::set<std::string> seen;
  for (const auto& name : table.header) {
    auto it = spec_index.find(name);
    if (it == spec_index.end()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  source_name + ": unknown column '" + name + "'");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kSchemaMismatch,
                  source_name + ": duplicate column '" + name + "'");
    }
    header_specs.push_back(&schema.columns[it->second]);
  }
  for (const auto& col : schema.columns) {
    if (!seen.count(col.name)) {
      throw Error(ErrorCode::kSchemaMismatch,
                  source_name + ": schema column '" + col.name +
                      "' missing from header");
    }
  }

  const std::set<std::string> global_missing(schema.missing_tokens.begin(),
                                              schema.missing_tokens.end());
  std::uint64_t data_row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::uint64_t row_index = data_row++;
    auto fields = SplitCsvLine(line, delim);
    bool missing = fields.size() != table.header.size();
    for (std::size_t c = 0; !missing && c < fields.size(); ++c) {
      const auto& f = fields[c];
      const auto& local = header_specs[c]->missing_values;
      if (header_specs[c]->kind == ColumnKind::kIgnore) continue;
      missing = global_missing.count(f) > 0 ||
                std::find(local.begin(), local.end(), f) != local.end();
    }
    if (missing) {
      ++table.dropped;
      continue;
    }
    table.rows.push_back(std::move(fields));
    table.source_rows.push_back(row_index);
  }
  if (table.rows.empty()) {
    throw Error(ErrorCode::kEmptyAfterDropping,
                source_name + ": no complete rows (" +
                    std::to_string(table.dropped) + " dropped)");
  }
  return table;
}

RawTable LoadCsv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, path.string());
  }
  return ParseCsv(in, schema, path.string());
}

int BinaryWidth(std::size_t categories) {
  int bits = 0;
  while ((std::size_t{1} << bits) < categories) ++bits;
  return bits;
}

LabeledDataset BinaryEncode(const RawTable& table) {
  const std::size_t n = table.rows.size();
  std::unordered_map<std::string, const ColumnSpec*> by_name;
  for (const auto& col : table.schema.columns) by_name.emplace(col.name, &col);

  struct Encoded {
    std::size_t column;
    ColumnKind kind;
    std::vector<std::string> categories;  // categorical only
    int width = 1;
  };
  std::vector<Encoded> plan;
  std::size_t total_width = 0;
  LabeledDataset out;
  out.role = SplitRole::kUnassigned;

  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const ColumnSpec& spec = *by_name.at(table.header[c]);
    if (spec.kind == ColumnKind::kIgnore) continue;
    if (spec.kind == ColumnKind::kLabel) {
      std::vector<std::string> values;
      values.reserve(n);
      for (const auto& row : table.rows) values.push_back(row[c]);
      std::vector<std::string> classes = values;
      std::sort(classes.begin(), classes.end(), NaturalLess);
      classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
      std::unordered_map<std::string, int> code;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        code.emplace(classes[i], static_cast<int>(i));
      }
      Target target;
      target.classes = classes;
      target.labels.reserve(n);
      for (const auto& v : values) target.labels.push_back(code.at(v));
      const std::string name = spec.target.empty() ? spec.name : spec.target;
      out.targets.emplace(name, std::move(target));
      continue;
    }
    Encoded e{c, spec.kind, {}, 1};
    if (spec.kind == ColumnKind::kCategorical) {
      std::set<std::string> cats;
      for (const auto& row : table.rows) cats.insert(row[c]);
      if (cats.size() < 2) {
        throw Error(ErrorCode::kSingleCategoryColumn, spec.name);
      }
      e.categories.assign(cats.begin(), cats.end());
      e.width = BinaryWidth(cats.size());
    }
    total_width += static_cast<std::size_t>(e.width);
    plan.push_back(std::move(e));
  }

  out.features.resize(static_cast<linalg::Index>(n),
                      static_cast<linalg::Index>(total_width));
  linalg::Index col = 0;
  for (const auto& e : plan) {
    const std::string& name = table.header[e.column];
    if (e.kind == ColumnKind::kNumeric) {
      for (std::size_t r = 0; r < n; ++r) {
        double v;
        if (!ParseDouble(table.rows[r][e.column], v)) {
          throw Error(ErrorCode::kSchemaMismatch,
                      "column '" + name + "' row " +
                          std::to_string(table.source_rows[r]) +
                          ": not a finite number: '" +
                          table.rows[r][e.column] + "'");
        }
        out.features(static_cast<linalg::Index>(r), col) = v;
      }
      out.feature_names.push_back(name);
      ++col;
      continue;
    }
    std::unordered_map<std::string, std::size_t> code;
    for (std::size_t i = 0; i < e.categories.size(); ++i) {
      code.emplace(e.categories[i], i);
    }
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t value = code.at(table.rows[r][e.column]);
      for (int b = 0; b < e.width; ++b) {
        const int shift = e.width - 1 - b;
        out.features(static_cast<linalg::Index>(r), col + b) =
            static_cast<double>((value >> shift) & 1U);
      }
    }
    for (int b = 0; b < e.width; ++b) {
      out.feature_names.push_back(name + "#" + std::to_string(b));
    }
    col += e.width;
  }
  out.row_ids = table.source_rows;
  out.Validate();
  return out;
}

const Target& LabeledDataset::target(const std::string& name) const {
  auto it = targets.find(name);
  if (it == targets.end()) {
    throw Error(ErrorCode::kUnknownTarget, "no target named '" + name + "'");
  }
  return it->second;
}

LabeledDataset LabeledDataset::Subset(
    std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.feature_names = feature_names;
  out.role = role;
  out.features.resize(static_cast<linalg::Index>(indices.size()), cols());
  out.row_ids.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.features.row(static_cast<linalg::Index>(i)) =
        features.row(static_cast<linalg::Index>(indices[i]));
    out.row_ids.push_back(row_ids[indices[i]]);
  }
  for (const auto& [name, t] : targets) {
    Target sub;
    sub.classes = t.classes;
    sub.labels.reserve(indices.size());
    for (auto i : indices) sub.labels.push_back(t.labels[i]);
    out.targets.emplace(name, std::move(sub));
  }
  return out;
}

LabeledDataset LabeledDataset::WithFeatures(linalg::Matrix replacement) const {
  if (replacement.rows() != rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "replacement row count");
  }
  LabeledDataset out;
  out.features = std::move(replacement);
  for (linalg::Index j = 0; j < out.features.cols(); ++j) {
    out.feature_names.push_back("z" + std::to_string(j + 1));
  }
  out.targets = targets;
  out.role = role;
  out.row_ids = row_ids;
  return out;
}

void LabeledDataset::Validate() const {
  const auto n = static_cast<std::size_t>(rows());
  if (!features.allFinite()) {
    throw Error(ErrorCode::kFormatError, "non-finite feature value");
  }
  if (feature_names.size() != static_cast<std::size_t>(cols())) {
    throw Error(ErrorCode::kFormatError, "feature name count");
  }
  if (row_ids.size() != n) {
    throw Error(ErrorCode::kFormatError, "row id count");
  }
  for (const auto& [name, t] : targets) {
    if (t.labels.size() != n) {
      throw Error(ErrorCode::kFormatError, "target '" + name + "' row count");
    }
    for (int l : t.labels) {
      if (l < 0 || l >= t.num_classes()) {
        throw Error(ErrorCode::kFormatError,
                    "target '" + name + "' class index out of range");
      }
    }
  }
}

DataSplits BalancedSample(const LabeledDataset& data,
                          const std::string& utility,
                          const std::string& privacy, const SplitSpec& spec) {
  if (spec.training + spec.testing + spec.adversary != spec.per_combination) {
    throw Error(ErrorCode::kInvalidArgument,
                "split counts must sum to the per-combination count");
  }
  const Target& u = data.target(utility);
  const Target& p = data.target(privacy);
  const int lu = u.num_classes();
  const int lp = p.num_classes();
  std::vector<std::vector<std::size_t>> pools(
      static_cast<std::size_t>(lu * lp));
  for (std::size_t i = 0; i < static_cast<std::size_t>(data.rows()); ++i) {
    pools[static_cast<std::size_t>(u.labels[i] * lp + p.labels[i])].push_back(i);
  }

  Rng rng(spec.seed);
  std::vector<std::size_t> train, test, adv;
  for (int a = 0; a < lu; ++a) {
    for (int b = 0; b < lp; ++b) {
      auto& pool = pools[static_cast<std::size_t>(a * lp + b)];
      if (pool.size() < spec.per_combination) {
        throw Error(ErrorCode::kInsufficientSamples,
                    utility + "=" + u.classes[static_cast<std::size_t>(a)] +
                        ", " + privacy + "=" +
                        p.classes[static_cast<std::size_t>(b)] + " has " +
                        std::to_string(pool.size()) + " rows, need " +
                        std::to_string(spec.per_combination));
      }
      rng.Shuffle(std::span<std::size_t>(pool));
      auto it = pool.begin();
      train.insert(train.end(), it, it + static_cast<std::ptrdiff_t>(spec.training));
      it += static_cast<std::ptrdiff_t>(spec.training);
      test.insert(test.end(), it, it + static_cast<std::ptrdiff_t>(spec.testing));
      it += static_cast<std::ptrdiff_t>(spec.testing);
      adv.insert(adv.end(), it, it + static_cast<std::ptrdiff_t>(spec.adversary));
    }
  }
  for (auto* v : {&train, &test, &adv}) std::sort(v->begin(), v->end());

  DataSplits out{data.Subset(train), data.Subset(test), data.Subset(adv)};
  out.training.role = SplitRole::kTraining;
  out.testing.role = SplitRole::kTesting;
  out.adversary.role = SplitRole::kAdversary;
  return out;
}

std::vector<int> StratifiedFolds(const std::vector<int>& labels, int num_classes,
                                 int folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
  std::vector<std::vector<std::size_t>> members(
      static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  Rng rng(seed);
  std::vector<int> fold(labels.size(), 0);
  for (auto& m : members) {
    if (m.empty()) continue;
    if (m.size() < static_cast<std::size_t>(folds)) {
      throw Error(ErrorCode::kClassTooSmall,
                  "a class has " + std::to_string(m.size()) +
                      " samples, fewer than " + std::to_string(folds) + " folds");
    }
    rng.Shuffle(std::span<std::size_t>(m));
    const std::size_t start = rng.UniformIndex(static_cast<std::size_t>(folds));
    for (std::size_t j = 0; j < m.size(); ++j) {
      fold[m[j]] = static_cast<int>((start + j) % static_cast<std::size_t>(folds));
    }
  }
  return fold;
}

Standardizer Standardizer::Fit(const linalg::Matrix& x) {
  Standardizer s;
  const double n = static_cast<double>(x.rows());
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (linalg::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    s.scale(j) = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

linalg::Matrix Standardizer::Apply(const linalg::Matrix& x) const {
  if (x.cols() != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "standardizer width");
  }
  linalg::Matrix out = x.rowwise() - mean.transpose();
  return out.array().rowwise() / scale.transpose().array();
}

}  // namespace ppdr
