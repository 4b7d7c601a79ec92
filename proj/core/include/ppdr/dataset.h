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

// Tabular ingestion: CSV loading against a declared schema, binary encoding
// of categorical columns, balanced per-label-combination sampling into
// training / testing / adversary splits, and z-score standardization.

#ifndef PPDR_DATASET_H_
#define PPDR_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ppdr/linalg.h"

namespace ppdr {

enum class ColumnKind { kNumeric, kCategorical, kLabel, kIgnore };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Target name for label columns; defaults to the column name.
  std::string target;
  // Column-specific values treated as missing (e.g. "unknown").
  std::vector<std::string> missing_values;
};

struct Schema {
  std::vector<ColumnSpec> columns;
  // '\0' selects ';' when the header contains ';' and no ',', else ','.
  char delimiter = '\0';
  std::vector<std::string> missing_tokens = {"", "?", "NA"};
};

struct RawTable {
  Schema schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 0-based data-row index in the source file for each kept row.
  std::vector<std::uint64_t> source_rows;
  std::size_t dropped = 0;
};

// Throws FileNotFound, SchemaMismatch, EmptyAfterDropping.
RawTable LoadCsv(const std::filesystem::path& path, const Schema& schema);
RawTable ParseCsv(std::istream& in, const Schema& schema,
                  const std::string& source_name);

// Class indices are 0-based in memory; archives store them 1-based.
struct Target {
  std::vector<std::string> classes;
  std::vector<int> labels;

  int num_classes() const { return static_cast<int>(classes.size()); }
};

enum class SplitRole { kUnassigned, kTraining, kTesting, kAdversary };

std::string_view SplitRoleName(SplitRole role);

struct LabeledDataset {
  linalg::Matrix features;  // rows are samples
  std::vector<std::string> feature_names;
  std::map<std::string, Target> targets;
  SplitRole role = SplitRole::kUnassigned;
  // Stable identity of each row (source row index); keys per-row RNG streams.
  std::vector<std::uint64_t> row_ids;

  linalg::Index rows() const { return features.rows(); }
  linalg::Index cols() const { return features.cols(); }

  // Throws UnknownTarget.
  const Target& target(const std::string& name) const;

  LabeledDataset Subset(std::span<const std::size_t> indices) const;
  LabeledDataset WithFeatures(linalg::Matrix replacement) const;

  // Checks the structural invariants; throws FormatError on violation.
  void Validate() const;
};

// Categorical column with c categories becomes ceil(log2 c) {0,1} columns,
// codes assigned in lexicographic category order, most significant bit first.
// Throws SingleCategoryColumn, SchemaMismatch (unparseable numeric).
LabeledDataset BinaryEncode(const RawTable& table);

// Number of binary columns used for c categories.
int BinaryWidth(std::size_t categories);

struct SplitSpec {
  std::size_t per_combination = 0;
  std::size_t training = 0;  // per combination
  std::size_t testing = 0;
  std::size_t adversary = 0;
  std::uint64_t seed = 42;
};

struct DataSplits {
  LabeledDataset training;
  LabeledDataset testing;
  LabeledDataset adversary;
};

// Every (utility, privacy) class combination contributes exactly the same
// number of rows to each split. Each combination's pool is shuffled once
// under the seed and sliced training | testing | adversary.
// Throws InsufficientSamples naming the short combination.
DataSplits BalancedSample(const LabeledDataset& data,
                          const std::string& utility,
                          const std::string& privacy, const SplitSpec& spec);

// Stratified fold assignment: each class is shuffled under the seed and dealt
// round-robin from a random starting fold. Returns the fold of each row.
std::vector<int> StratifiedFolds(const std::vector<int>& labels, int num_classes,
                                 int folds, std::uint64_t seed);

// Per-feature z-score fitted on one matrix and applied to others. Constant
// features are centred only.
struct Standardizer {
  linalg::Vector mean;
  linalg::Vector scale;

  static Standardizer Fit(const linalg::Matrix& x);
  linalg::Matrix Apply(const linalg::Matrix& x) const;
};

}  // namespace ppdr

#endif  // PPDR_DATASET_H_
