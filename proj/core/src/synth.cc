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


#include "ppdr/synth.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "ppdr/error.h"
#include "ppdr/linalg.h"
#include "ppdr/rng.h"

namespace ppdr {
namespace {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Vector Gaussian(Rng& rng, Index n, double sd) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = sd * rng.StandardNormal();
  return v;
}

// Index drawn from unnormalized weights.
std::size_t Pick(Rng& rng, const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  double u = rng.UniformReal() * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (u < w[i]) return i;
    u -= w[i];
  }
  return w.size() - 1;
}

const char* const kActivities[] = {"WALKING", "WALKING_UPSTAIRS",
                                   "WALKING_DOWNSTAIRS", "SITTING", "STANDING",
                                   "LAYING"};

}  // namespace

void WriteHarSurrogate(std::ostream& out, std::uint64_t seed,
                       int rows_per_combination) {
  constexpr Index kLatent = 12;
  constexpr Index kFeatures = 40;
  constexpr int kSubjects = 30;
  Rng rng(seed);
  std::vector<Vector> activity;
  for (int a = 0; a < 6; ++a) activity.push_back(Gaussian(rng, kLatent, 3.0));
  std::vector<Vector> subject;
  for (int s = 0; s < kSubjects; ++s) subject.push_back(Gaussian(rng, kLatent, 1.0));
  Matrix embed(kFeatures, kLatent);
  for (Index i = 0; i < kFeatures; ++i) {
    for (Index j = 0; j < kLatent; ++j) {
      embed(i, j) = rng.StandardNormal() / std::sqrt(static_cast<double>(kLatent));
    }
  }

  for (Index i = 1; i <= kFeatures; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "feature_%02d,", static_cast<int>(i));
    out << buf;
  }
  out << "activity,subject\n";
  for (int s = 0; s < kSubjects; ++s) {
    for (int a = 0; a < 6; ++a) {
      for (int r = 0; r < rows_per_combination; ++r) {
        const Vector z = activity[static_cast<std::size_t>(a)] +
                         subject[static_cast<std::size_t>(s)] +
                         Gaussian(rng, kLatent, 1.0);
        const Vector x = embed * z + Gaussian(rng, kFeatures, 0.3);
        for (Index i = 0; i < kFeatures; ++i) out << Fmt(x(i)) << ',';
        out << kActivities[a] << ',' << (s + 1) << '\n';
      }
    }
  }
}

void WriteBankSurrogate(std::ostream& out, std::uint64_t seed,
                        int rows_per_combination) {
  static const char* const kMarital[] = {"divorced", "married", "single"};
  static const char* const kJobs[] = {
      "admin.",     "blue-collar", "entrepreneur", "housemaid",
      "management", "retired",     "self-employed", "services",
      "student",    "technician",  "unemployed",   "unknown"};
  static const char* const kEducation[] = {"primary", "secondary", "tertiary",
                                           "unknown"};
  Rng rng(seed);
  out << "age,job,marital,education,balance,housing,duration,campaign,y\n";
  for (int y = 0; y < 2; ++y) {
    for (int m = 0; m < 3; ++m) {
      for (int r = 0; r < rows_per_combination; ++r) {
        const double age = std::max(
            18.0, std::round(42.0 + 6.0 * (m == 0) - 9.0 * (m == 2) +
                             4.0 * y + 9.0 * rng.StandardNormal()));
        std::vector<double> jw(12, 1.0);
        jw[8] += m == 2 ? 3.0 : 0.0;   // student
        jw[5] += m == 0 ? 2.0 : 0.0;   // retired
        jw[4] += y == 1 ? 2.0 : 0.0;   // management
        jw[1] += y == 0 ? 2.0 : 0.0;   // blue-collar
        const std::size_t job = Pick(rng, jw);
        const std::size_t edu =
            Pick(rng, y == 1 ? std::vector<double>{1, 3, 4, 0.5}
                             : std::vector<double>{2, 4, 2, 0.5});
        const double balance =
            std::round(1200.0 + 500.0 * y + 300.0 * (m == 1) +
                       1500.0 * rng.StandardNormal());
        const bool housing = rng.UniformReal() < (y == 1 ? 0.35 : 0.6);
        const double duration = std::max(
            5.0, std::round((y == 1 ? 520.0 : 230.0) + 160.0 * rng.StandardNormal()));
        const double campaign = 1.0 + std::floor(-std::log(1.0 - rng.UniformReal()) *
                                                 (y == 1 ? 1.5 : 2.5));
        out << age << ',' << kJobs[job] << ',' << kMarital[m] << ','
            << kEducation[edu] << ',' << balance << ',' << (housing ? "yes" : "no")
            << ',' << duration << ',' << campaign << ',' << (y ? "yes" : "no")
            << '\n';
      }
    }
  }
}

void WriteSurrogate(const std::filesystem::path& path, std::string_view preset,
                    std::uint64_t seed) {
  if (preset != "har-surrogate" && preset != "bank-surrogate") {
    throw Error(ErrorCode::kInvalidArgument,
                "no surrogate for '" + std::string(preset) + "'");
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  if (preset == "har-surrogate") {
    WriteHarSurrogate(out, seed);
  } else {
    WriteBankSurrogate(out, seed);
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace ppdr
