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


#include "ppdr/report.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace ppdr {
namespace {

using nlohmann::ordered_json;

ordered_json Num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json StatJson(const Stat& s) { return {{"mean", Num(s.mean)}, {"std", Num(s.std)}}; }

std::string Cell(double v) {
  if (!std::isfinite(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Pad(const std::string& s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

// Renders rows of cells; the first column is left aligned.
std::string Render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << "  ";
      out << Pad(r[i], width[i], i == 0);
    }
    out << '\n';
  }
  return out.str();
}

const MethodRow* FindRow(const ExperimentReport& report, const std::string& label) {
  for (const auto& r : report.rows) {
    if (r.method.Label() == label) return &r;
  }
  return nullptr;
}

}  // namespace

std::string ReportToJson(const ExperimentReport& report) {
  ordered_json doc;
  doc["format"] = "ppdr-report";
  doc["version"] = 1;
  doc["dataset"] = report.dataset;
  doc["utility"] = report.utility;
  doc["privacy"] = report.privacy;
  doc["utility_classes"] = report.utility_classes;
  doc["privacy_classes"] = report.privacy_classes;
  doc["baseline"] = report.baseline;
  doc["k"] = report.k;
  doc["folds"] = report.folds;
  doc["seeds"] = report.seeds;
  doc["rows_per_split"] = {{"training", report.training_rows},
                           {"testing", report.testing_rows},
                           {"adversary", report.adversary_rows}};
  ordered_json methods = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json m;
    m["method"] = row.method.Label();
    m["utility"] = {{"coarse", StatJson(row.utility_coarse)},
                    {"fine", StatJson(row.utility_fine)}};
    m["privacy"] = {{"coarse", StatJson(row.privacy_coarse)},
                    {"fine", StatJson(row.privacy_fine)}};
    m["advantage_fine"] = StatJson(row.advantage_fine);
    m["not_converged"] = row.not_converged;
    m["failed_seeds"] = row.failed_seeds;
    ordered_json seeds = ordered_json::array();
    for (const auto& s : row.seeds) {
      ordered_json j;
      j["seed"] = s.seed;
      if (!s.failure.empty()) {
        j["failure"] = {{"code", s.failure_code}, {"message", s.failure}};
        seeds.push_back(std::move(j));
        continue;
      }
      j["utility_coarse"] = s.utility_coarse;
      j["utility_fine"] = s.utility_fine;
      j["privacy_coarse"] = s.privacy_coarse;
      j["privacy_fine"] = s.privacy_fine;
      j["advantage_coarse"] = s.advantage_coarse;
      j["advantage_fine"] = s.advantage_fine;
      j["utility_c"] = s.utility_c;
      j["utility_sigma"] = s.utility_sigma;
      j["attack_c"] = s.attack_c;
      j["attack_sigma"] = s.attack_sigma;
      j["label_sigma"] = s.label_sigma;
      j["sanitized"] = s.sanitized;
      j["not_converged"] = s.not_converged;
      j["retried"] = s.retried;
      seeds.push_back(std::move(j));
    }
    m["seeds"] = std::move(seeds);
    methods.push_back(std::move(m));
  }
  doc["methods"] = std::move(methods);
  return doc.dump(2) + "\n";
}

std::string ReportToTable(const ExperimentReport& report) {
  std::ostringstream out;
  out << report.dataset << ": utility " << report.utility << ", privacy "
      << report.privacy << ", K=" << report.k << ", " << report.seeds.size()
      << " seeds, " << report.folds << "-fold CV, random guess "
      << Cell(report.baseline) << "\n\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"method", report.utility + " coarse", report.utility + " fine",
                  report.privacy + " coarse", report.privacy + " fine",
                  "adv fine", "unconverged"});
  for (const auto& r : report.rows) {
    std::string label = r.method.Label();
    if (r.failed_seeds > 0) label += " [" + std::to_string(r.failed_seeds) + " failed]";
    rows.push_back({label, Cell(r.utility_coarse.mean), Cell(r.utility_fine.mean),
                    Cell(r.privacy_coarse.mean), Cell(r.privacy_fine.mean),
                    Cell(r.advantage_fine.mean), std::to_string(r.not_converged)});
  }
  out << Render(rows);
  for (const auto& r : report.rows) {
    for (const auto& s : r.seeds) {
      if (!s.failure.empty()) {
        out << "\n" << r.method.Label() << " seed " << s.seed << ": "
            << s.failure_code << ": " << s.failure;
      }
    }
  }
  return out.str();
}

std::string ComparisonTable(const ExperimentReport& report,
                            const ReferenceTable& reference) {
  std::ostringstream out;
  out << "table " << reference.number << " (" << reference.dataset
      << "): measured / published / delta\n\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"method", "u coarse", "u fine", "p coarse", "p fine"});
  auto triple = [](double m, double p) {
    return Cell(m) + " / " + Cell(p) + " / " + Cell(m - p);
  };
  for (const auto& ref : reference.rows) {
    const MethodRow* r = FindRow(report, ref.method);
    if (!r) {
      rows.push_back({ref.method, "not run", "", "", ""});
      continue;
    }
    rows.push_back({ref.method, triple(r->utility_coarse.mean, ref.utility_coarse),
                    triple(r->utility_fine.mean, ref.utility_fine),
                    triple(r->privacy_coarse.mean, ref.privacy_coarse),
                    triple(r->privacy_fine.mean, ref.privacy_fine)});
  }
  out << Render(rows);
  return out.str();
}

std::string ComparisonJson(const ExperimentReport& report,
                           const ReferenceTable& reference) {
  ordered_json doc;
  doc["format"] = "ppdr-comparison";
  doc["version"] = 1;
  doc["table"] = reference.number;
  doc["dataset"] = reference.dataset;
  ordered_json rows = ordered_json::array();
  for (const auto& ref : reference.rows) {
    const MethodRow* r = FindRow(report, ref.method);
    ordered_json j;
    j["method"] = ref.method;
    auto cell = [&](double measured, double published) {
      return ordered_json{{"measured", Num(measured)},
                          {"published", published},
                          {"delta", Num(measured - published)}};
    };
    if (r) {
      j["utility_coarse"] = cell(r->utility_coarse.mean, ref.utility_coarse);
      j["utility_fine"] = cell(r->utility_fine.mean, ref.utility_fine);
      j["privacy_coarse"] = cell(r->privacy_coarse.mean, ref.privacy_coarse);
      j["privacy_fine"] = cell(r->privacy_fine.mean, ref.privacy_fine);
    }
    rows.push_back(std::move(j));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace ppdr
