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


// Report output.
//
// JSON document, format "ppdr-report" version 1:
//
//   {"format", "version", "dataset", "utility", "privacy",
//    "utility_classes", "privacy_classes", "baseline", "k", "folds",
//    "seeds": [...], "rows_per_split": {"training", "testing", "adversary"},
//    "methods": [{"method", "utility": {"coarse": {"mean", "std"},
//                                       "fine": {...}},
//                 "privacy": {...}, "advantage_fine": {...},
//                 "not_converged", "failed_seeds",
//                 "seeds": [{"seed", "utility_coarse", "utility_fine",
//                            "privacy_coarse", "privacy_fine",
//                            "advantage_coarse", "advantage_fine",
//                            "utility_c", "utility_sigma", "attack_c",
//                            "attack_sigma", "label_sigma", "sanitized",
//                            "not_converged", "retried",
//                            "failure" (only when failed)}]}]}
//
// Accuracies are percentages. Means over failed seeds are null. No wall-clock
// values are written, so identical runs give identical bytes.

#ifndef PPDR_REPORT_H_
#define PPDR_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "ppdr/evaluate.h"

namespace ppdr {

std::string ReportToJson(const ExperimentReport& report);

// Aligned text table laid out like the published tables.
std::string ReportToTable(const ExperimentReport& report);

// One published row: utility coarse/fine, privacy coarse/fine.
struct ReferenceRow {
  std::string method;  // MethodSpec::Label() form
  double utility_coarse;
  double utility_fine;
  double privacy_coarse;
  double privacy_fine;
};

struct ReferenceTable {
  int number = 0;
  std::string dataset;  // preset name
  std::string utility;
  std::string privacy;
  int k = 1;
  std::vector<ReferenceRow> rows;
};

// Published values of tables 1-4. Throws InvalidArgument for other numbers.
const ReferenceTable& PublishedTable(int number);

// Measured vs published with per-cell deltas.
std::string ComparisonTable(const ExperimentReport& report,
                            const ReferenceTable& reference);
std::string ComparisonJson(const ExperimentReport& report,
                           const ReferenceTable& reference);

}  // namespace ppdr

#endif  // PPDR_REPORT_H_
