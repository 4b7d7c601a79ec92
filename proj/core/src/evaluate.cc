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


#include "ppdr/evaluate.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "parallel.h"
#include "ppdr/error.h"
#include "ppdr/archive.h"
#include "ppdr/rng.h"
#include "ppdr/scatter.h"

namespace ppdr {
namespace {

using linalg::Index;
using linalg::Matrix;

enum SeedPurpose : std::uint64_t {
  kRandomProjection = 1,
  kUtilityFolds,
  kAttackFolds,
  kLabelFolds,
  kBankSplit,
  kSanitize,
};

std::uint64_t DeriveSeed(std::uint64_t seed, SeedPurpose purpose) {
  return MixSeed(seed ^ MixSeed(static_cast<std::uint64_t>(purpose)));
}

struct Prepared {
  const ScenarioConfig& config;
  const DataSplits& splits;
  Standardizer standardizer;
  Matrix training;
  Matrix testing;
  Matrix adversary;
  std::map<std::string, ScatterSet> scatter;
};

Prepared Prepare(const ScenarioConfig& config, const DataSplits& splits) {
  config.Validate();
  for (const LabeledDataset* d : {&splits.training, &splits.testing, &splits.adversary}) {
    d->Validate();
    (void)d->target(config.utility);
    (void)d->target(config.privacy);
    if (d->rows() == 0) throw Error(ErrorCode::kInvalidArgument, "empty split");
  }
  if (config.k >= splits.training.cols()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(config.k) + " with " +
                    std::to_string(splits.training.cols()) + " features");
  }
  Prepared p{config, splits, {}, splits.training.features, splits.testing.features,
             splits.adversary.features, {}};
  if (config.standardize) {
    p.standardizer = Standardizer::Fit(p.training);
    p.training = p.standardizer.Apply(p.training);
    p.testing = p.standardizer.Apply(p.testing);
    p.adversary = p.standardizer.Apply(p.adversary);
  } else {
    p.standardizer.mean = linalg::Vector::Zero(p.training.cols());
    p.standardizer.scale = linalg::Vector::Ones(p.training.cols());
  }
  std::vector<std::string> names{config.utility, config.privacy};
  names.insert(names.end(), config.extra_utility.begin(), config.extra_utility.end());
  names.insert(names.end(), config.extra_privacy.begin(), config.extra_privacy.end());
  for (const auto& n : names) {
    if (p.scatter.count(n)) continue;
    const Target& t = splits.training.target(n);
    p.scatter.emplace(n, ComputeScatter(p.training, t.labels, t.num_classes(), n));
  }
  return p;
}

std::vector<double> Broadcast(const std::vector<double>& v, std::size_t n) {
  if (v.size() == 1 && n > 1) return std::vector<double>(n, v.front());
  return v;
}

ProjectionModel FitMethod(const Prepared& p, const MethodSpec& m,
                          std::uint64_t seed) {
  const ScenarioConfig& c = p.config;
  const ScatterSet& su = p.scatter.at(c.utility);
  const ScatterSet& sp = p.scatter.at(c.privacy);
  ProjectionModel model;
  switch (m.method) {
    case ProjectionMethod::kPca:
      model = FitPca(p.training, c.k);
      break;
    case ProjectionMethod::kRandom:
      model = FitRandom(p.training, c.k, DeriveSeed(seed, kRandomProjection));
      break;
    case ProjectionMethod::kDca:
      model = FitDca(su, c.k, c.rho0);
      break;
    case ProjectionMethod::kMdr:
      model = FitMdr(su, sp, c.k, c.rho0);
      break;
    case ProjectionMethod::kJupa:
      model = FitJupa(su, sp, c.k, c.rho0, m.rho.at(0), m.rho_prime.at(0));
      break;
    case ProjectionMethod::kJupaMulti: {
      std::vector<ScatterSet> us{su};
      std::vector<ScatterSet> ps{sp};
      for (const auto& t : c.extra_utility) us.push_back(p.scatter.at(t));
      for (const auto& t : c.extra_privacy) ps.push_back(p.scatter.at(t));
      const auto rho = Broadcast(m.rho, ps.size());
      const auto rho_prime = Broadcast(m.rho_prime, ps.size());
      model = FitJupaMulti(us, ps, c.k, c.rho0, rho, rho_prime);
      break;
    }
  }
  model.params.centered = c.centered;
  return model;
}

double Percent(const std::vector<int>& predicted, const std::vector<int>& truth) {
  return 100.0 * Accuracy(predicted, truth);
}

struct Sanitized {
  double label_sigma = 0.0;
  SanitizerModel model;
  SanitizeBatchResult batch;
};

// tr and te are the (projected) training and testing features.
Sanitized SanitizeTesting(const Prepared& p, const Matrix& tr, const Matrix& te,
                          std::uint64_t seed) {
  const ScenarioConfig& c = p.config;
  const Target& p_tr = p.splits.training.target(c.privacy);
  const BandwidthSelection bw =
      SelectBandwidth(tr, p_tr.labels, p_tr.num_classes(), c.label_folds,
                      DeriveSeed(seed, kLabelFolds), c.label_multipliers);
  SanitizerModel sanitizer(
      SplitGroundVerify(tr, p_tr.labels, p_tr.num_classes(),
                        KernelSpec::Rbf(bw.sigma), DeriveSeed(seed, kBankSplit)),
      c.sanitizer, DeriveSeed(seed, kSanitize));
  SanitizeBatchResult batch = SanitizeBatch(sanitizer, te, p.splits.testing.row_ids, 1);
  return {bw.sigma, std::move(sanitizer), std::move(batch)};
}

SeedResult RunOne(const Prepared& p, const MethodSpec& m, std::uint64_t seed) {
  const ScenarioConfig& c = p.config;
  SeedResult r;
  r.seed = seed;
  try {
    Matrix tr = p.training;
    Matrix te = p.testing;
    Matrix ad = p.adversary;
    if (!m.full_dimensional) {
      const ProjectionModel model = FitMethod(p, m, seed);
      tr = Project(model, p.training);
      te = Project(model, p.testing);
      ad = Project(model, p.adversary);
    }
    const Target& u_tr = p.splits.training.target(c.utility);
    const Target& u_te = p.splits.testing.target(c.utility);
    const Target& p_te = p.splits.testing.target(c.privacy);
    const Target& p_ad = p.splits.adversary.target(c.privacy);

    const GridSearchReport ug = GridSearch(tr, u_tr.labels, u_tr.num_classes(),
                                           c.folds, c.grid,
                                           DeriveSeed(seed, kUtilityFolds));
    SmoOptions uo;
    uo.c = ug.best().c;
    uo.tol = c.grid.tol;
    const MulticlassSvm utility = MulticlassSvm::Train(
        tr, u_tr.labels, u_tr.num_classes(), KernelSpec::Rbf(ug.best().sigma), uo);

    const GridSearchReport ag = GridSearch(ad, p_ad.labels, p_ad.num_classes(),
                                           c.folds, c.grid,
                                           DeriveSeed(seed, kAttackFolds));
    SmoOptions ao;
    ao.c = ag.best().c;
    ao.tol = c.grid.tol;
    const MulticlassSvm attack = MulticlassSvm::Train(
        ad, p_ad.labels, p_ad.num_classes(), KernelSpec::Rbf(ag.best().sigma), ao);

    const Sanitized fine = SanitizeTesting(p, tr, te, seed);
    const SanitizeBatchResult& batch = fine.batch;
    r.utility_coarse = Percent(utility.Predict(te), u_te.labels);
    r.utility_fine = Percent(utility.Predict(batch.z), u_te.labels);
    const std::vector<int> coarse_guesses = attack.Predict(te);
    r.fine_guesses = attack.Predict(batch.z);
    r.privacy_coarse = Percent(coarse_guesses, p_te.labels);
    r.privacy_fine = Percent(r.fine_guesses, p_te.labels);
    r.advantage_coarse = Advantage(coarse_guesses, p_te.num_classes());
    r.advantage_fine = Advantage(r.fine_guesses, p_te.num_classes());
    r.utility_c = ug.best().c;
    r.utility_sigma = ug.best().sigma;
    r.attack_c = ag.best().c;
    r.attack_sigma = ag.best().sigma;
    r.label_sigma = fine.label_sigma;
    r.sanitized = batch.traces.size();
    r.not_converged = batch.not_converged.size();
    r.retried = batch.retried;
  } catch (const Error& e) {
    r.failure = e.what();
    r.failure_code = std::string(ErrorCodeName(e.code()));
  }
  return r;
}

Stat Summarize(const std::vector<SeedResult>& seeds, double SeedResult::*field) {
  std::vector<double> v;
  for (const auto& s : seeds) {
    if (s.failure.empty()) v.push_back(s.*field);
  }
  Stat st;
  if (v.empty()) {
    st.mean = std::nan("");
    st.std = std::nan("");
    return st;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  st.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - st.mean) * (x - st.mean);
    st.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return st;
}

std::string FormatRho(double v) { return FormatDouble(v); }

}  // namespace

MethodSpec MethodSpec::Full() {
  MethodSpec m;
  m.full_dimensional = true;
  return m;
}

MethodSpec MethodSpec::Of(ProjectionMethod method) {
  MethodSpec m;
  m.method = method;
  return m;
}

MethodSpec MethodSpec::Jupa(double rho1, double rho1_prime) {
  MethodSpec m;
  m.method = ProjectionMethod::kJupa;
  m.rho = {rho1};
  m.rho_prime = {rho1_prime};
  return m;
}

std::string MethodSpec::Label() const {
  if (full_dimensional) return "full";
  std::string out(ProjectionMethodName(method));
  if (method == ProjectionMethod::kJupa || method == ProjectionMethod::kJupaMulti) {
    auto list = [](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ";";
        s += FormatRho(v[i]);
      }
      return s;
    };
    out += "(rho1=" + list(rho) + ",rho1'=" + list(rho_prime) + ")";
  }
  return out;
}

std::vector<MethodSpec> TableMethods() {
  std::vector<MethodSpec> out = {
      MethodSpec::Full(), MethodSpec::Of(ProjectionMethod::kRandom),
      MethodSpec::Of(ProjectionMethod::kPca), MethodSpec::Of(ProjectionMethod::kDca),
      MethodSpec::Of(ProjectionMethod::kMdr)};
  for (double r : {1.0, 1e2, 1e4}) {
    for (double rp : {1.0, 1e2, 1e4}) out.push_back(MethodSpec::Jupa(r, rp));
  }
  return out;
}

void ScenarioConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidConfig, msg);
  };
  if (utility.empty() || privacy.empty()) fail("utility and privacy targets are required");
  if (utility == privacy) fail("utility and privacy targets must differ");
  if (methods.empty()) fail("no methods");
  if (k < 1) fail("k must be >= 1");
  if (!(rho0 > 0.0)) fail("rho0 must be positive");
  if (folds < 2 || label_folds < 2) fail("folds must be >= 2");
  if (seeds.empty()) fail("no seeds");
  if (jobs < 1) fail("jobs must be >= 1");
  if (grid.c.empty() || grid.sigma_multipliers.empty()) fail("empty classifier grid");
  for (double v : grid.c) {
    if (!(v > 0.0)) fail("grid C values must be positive");
  }
  for (double v : grid.sigma_multipliers) {
    if (!(v > 0.0)) fail("grid sigma multipliers must be positive");
  }
  if (label_multipliers.empty()) fail("empty label bandwidth grid");
  for (const auto& m : methods) {
    if (m.full_dimensional) continue;
    const bool jupa = m.method == ProjectionMethod::kJupa ||
                      m.method == ProjectionMethod::kJupaMulti;
    if (jupa && (m.rho.empty() || m.rho_prime.empty())) {
      fail(m.Label() + ": rho1 and rho1' are required");
    }
    for (double v : m.rho) {
      if (!(v >= 0.0) || !std::isfinite(v)) fail(m.Label() + ": rho1 must be >= 0");
    }
    for (double v : m.rho_prime) {
      if (!(v >= 0.0) || !std::isfinite(v)) fail(m.Label() + ": rho1' must be >= 0");
    }
  }
  try {
    sanitizer.Validate();
  } catch (const Error& e) {
    fail(std::string("sanitizer: ") + e.what());
  }
}

bool ExperimentReport::has_failures() const {
  for (const auto& r : rows) {
    if (r.failed_seeds > 0) return true;
  }
  return false;
}

bool ExperimentReport::has_unconverged() const {
  for (const auto& r : rows) {
    if (r.not_converged > 0) return true;
  }
  return false;
}

ReleaseResult ReleaseTesting(const ScenarioConfig& config, const MethodSpec& method,
                             const DataSplits& splits, std::uint64_t seed) {
  const Prepared p = Prepare(config, splits);
  ReleaseResult out;
  out.standardizer = p.standardizer;
  Matrix tr = p.training;
  Matrix te = p.testing;
  if (!method.full_dimensional) {
    out.projection = FitMethod(p, method, seed);
    tr = Project(*out.projection, p.training);
    te = Project(*out.projection, p.testing);
  }
  Sanitized fine = SanitizeTesting(p, tr, te, seed);
  out.label_sigma = fine.label_sigma;
  out.sanitizer = std::move(fine.model);
  out.batch = std::move(fine.batch);
  return out;
}

double Advantage(std::span<const int> guesses, int num_classes) {
  if (guesses.empty()) throw Error(ErrorCode::kEmptyReport, "no guesses");
  if (num_classes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "advantage needs >= 2 classes");
  }
  std::vector<double> rate(static_cast<std::size_t>(num_classes), 0.0);
  for (int g : guesses) {
    if (g < 0 || g >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "guess out of range");
    }
    rate[static_cast<std::size_t>(g)] += 1.0;
  }
  const auto [lo, hi] = std::minmax_element(rate.begin(), rate.end());
  return (*hi - *lo) / static_cast<double>(guesses.size());
}

ExperimentReport RunScenario(const ScenarioConfig& config, const DataSplits& splits) {
  const Prepared p = Prepare(config, splits);

  const std::size_t nm = config.methods.size();
  const std::size_t ns = config.seeds.size();
  std::vector<SeedResult> results(nm * ns);
  internal::ParallelFor(results.size(), config.jobs, [&](std::size_t job) {
    results[job] = RunOne(p, config.methods[job / ns], config.seeds[job % ns]);
  });

  ExperimentReport report;
  report.dataset = config.dataset;
  report.utility = config.utility;
  report.privacy = config.privacy;
  report.utility_classes = splits.training.target(config.utility).num_classes();
  report.privacy_classes = splits.training.target(config.privacy).num_classes();
  report.baseline = 100.0 / report.privacy_classes;
  report.k = config.k;
  report.folds = config.folds;
  report.seeds = config.seeds;
  report.training_rows = static_cast<std::size_t>(splits.training.rows());
  report.testing_rows = static_cast<std::size_t>(splits.testing.rows());
  report.adversary_rows = static_cast<std::size_t>(splits.adversary.rows());
  for (std::size_t mi = 0; mi < nm; ++mi) {
    MethodRow row;
    row.method = config.methods[mi];
    row.seeds.assign(results.begin() + static_cast<std::ptrdiff_t>(mi * ns),
                     results.begin() + static_cast<std::ptrdiff_t>((mi + 1) * ns));
    row.utility_coarse = Summarize(row.seeds, &SeedResult::utility_coarse);
    row.utility_fine = Summarize(row.seeds, &SeedResult::utility_fine);
    row.privacy_coarse = Summarize(row.seeds, &SeedResult::privacy_coarse);
    row.privacy_fine = Summarize(row.seeds, &SeedResult::privacy_fine);
    row.advantage_fine = Summarize(row.seeds, &SeedResult::advantage_fine);
    for (const auto& s : row.seeds) {
      row.not_converged += s.not_converged;
      row.failed_seeds += s.failure.empty() ? 0 : 1;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace ppdr
