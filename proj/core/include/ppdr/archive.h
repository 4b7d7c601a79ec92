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

// Dataset archive, format version 1.
//
// An archive is a directory holding
//
//   meta.json       {"format": "ppdr-dataset-archive", "version": 1,
//                    "dataset", "utility_target", "privacy_target",
//                    "seed", "per_combination", "split_counts",
//                    "feature_names", "targets": {name: {"classes": [...]}},
//                    "standardization": {"mean": [...], "scale": [...]}
//                      (optional),
//                    "splits": {role: {"file", "rows"}}}
//   <role>.csv      one per split: header `row_id,<features>,<targets>`;
//                   features in shortest round-trip decimal, targets as
//                   1-based class indices.
//
// Both files are written byte-deterministically so archive digests can be
// compared across runs.

#ifndef PPDR_ARCHIVE_H_
#define PPDR_ARCHIVE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ppdr/dataset.h"

namespace ppdr {

inline constexpr int kArchiveVersion = 1;

struct DatasetArchive {
  std::string dataset;
  std::string utility_target;
  std::string privacy_target;
  SplitSpec split_spec;
  std::optional<Standardizer> standardizer;
  std::vector<LabeledDataset> splits;

  // Throws InvalidArgument when the role is absent.
  const LabeledDataset& split(SplitRole role) const;
};

void WriteArchive(const std::filesystem::path& dir,
                  const DatasetArchive& archive);

// Throws FileNotFound, FormatError (wrong format tag or version, malformed
// split file).
DatasetArchive ReadArchive(const std::filesystem::path& dir);

// FNV-1a over every file of the archive in name order; a cheap identity for
// determinism checks.
std::string ArchiveDigest(const std::filesystem::path& dir);

// Shortest decimal that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace ppdr

#endif  // PPDR_ARCHIVE_H_
