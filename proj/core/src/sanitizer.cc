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


#include "ppdr/sanitizer.h"

#include <algorithm>
#include <optional>
#include <cmath>
#include <string>
#include <utility>

#include "parallel.h"
#include "ppdr/error.h"
#include "ppdr/rng.h"

namespace ppdr {
namespace {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

void CheckPair(const SanitizerModel& model, const Vector& anchor,
               const Vector& theta, int s, int t) {
  if (s == t) {
    throw Error(ErrorCode::kSameClass,
                "source and target class are both " + std::to_string(s));
  }
  const int l = model.num_classes();
  if (s < 0 || s >= l || t < 0 || t >= l) {
    throw Error(ErrorCode::kInvalidArgument, "class index out of range");
  }
  if (anchor.size() != model.dim() || theta.size() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sample width does not match the banks");
  }
}

// (1/n) sum_i k(x_i, z) (x_i - z) / sigma^2 over one rbf class.
Vector RbfMeanShift(const ClassBank& bank, int l, const Vector& z) {
  const Matrix& c = bank.samples(l);
  const double sigma2 = bank.spec().sigma * bank.spec().sigma;
  Vector g = Vector::Zero(z.size());
  for (Index i = 0; i < c.rows(); ++i) {
    const Vector d = c.row(i).transpose() - z;
    g += std::exp(-d.squaredNorm() / (2.0 * sigma2)) * d;
  }
  return g / (sigma2 * static_cast<double>(c.rows()));
}

double LossUnchecked(const SanitizerModel& model, const Vector& z,
                     const Vector& theta, int s, int t) {
  const ClassBank& g = model.ground();
  return g.self_mean(t) - g.self_mean(s) + 2.0 * g.CrossMean(s, z) -
         2.0 * g.CrossMean(t, z) +
         0.5 * model.params().lambda * theta.squaredNorm();
}

// Cross mean (1/n) sum_i k(x_i, z) and the mean shift of RbfMeanShift from
// one pass over a class.
double RbfCrossAndShift(const ClassBank& bank, int l, const Vector& z,
                        Vector& shift) {
  const Matrix& c = bank.samples(l);
  const double sigma2 = bank.spec().sigma * bank.spec().sigma;
  shift.setZero(z.size());
  double sum = 0.0;
  for (Index i = 0; i < c.rows(); ++i) {
    const Vector d = c.row(i).transpose() - z;
    const double k = std::exp(-d.squaredNorm() / (2.0 * sigma2));
    sum += k;
    shift += k * d;
  }
  const double n = static_cast<double>(c.rows());
  shift /= sigma2 * n;
  return sum / n;
}

SanitizeTrace Descend(const SanitizerModel& model, const Vector& x, int s,
                      int t, double level, Vector theta, double alpha) {
  const SanitizerParams& p = model.params();
  const ClassBank& g = model.ground();
  SanitizeTrace trace;
  trace.source = s;
  trace.target = t;
  trace.stop_level = level;
  trace.losses.reserve(static_cast<std::size_t>(p.max_iters));
  const double sigma = model.spec().sigma;
  const double step = p.bandwidth_step ? alpha * sigma * sigma : alpha;
  const bool analytic =
      !p.finite_difference && model.spec().family == KernelFamily::kRbf;
  const double constant = g.self_mean(t) - g.self_mean(s);
  Vector shift_s;
  Vector shift_t;
  Vector grad;
  if (analytic) {
    const Vector z = x + theta;
    RbfCrossAndShift(g, s, z, shift_s);
    RbfCrossAndShift(g, t, z, shift_t);
  }
  for (int i = 1; i <= p.max_iters; ++i) {
    if (analytic) {
      grad = 2.0 * shift_s - 2.0 * shift_t + p.lambda * theta;
    } else {
      grad = LossGradient(model, x, theta, s, t);
    }
    theta -= step * grad;
    const Vector z = x + theta;
    double loss = 0.0;
    if (analytic) {
      loss = constant + 2.0 * RbfCrossAndShift(g, s, z, shift_s) -
             2.0 * RbfCrossAndShift(g, t, z, shift_t) +
             0.5 * p.lambda * theta.squaredNorm();
    } else {
      loss = LossUnchecked(model, z, theta, s, t);
    }
    trace.losses.push_back(loss);
    trace.iterations = i;
    if (!z.allFinite()) break;
    if (loss <= level && Label(model.verify(), z) == t) {
      trace.converged = true;
      break;
    }
  }
  trace.z = x + theta;
  return trace;
}

// g - x for g drawn uniformly from the k target-class ground samples nearest
// to x that already meet the stopping rule. When none do, the depth anchor if
// there is one, else the plain k nearest.
Vector NeighborTheta(const SanitizerModel& model, const Vector& x, int s, int t,
                     double level, const std::optional<Vector>& anchor, Rng& rng) {
  const Matrix& bank = model.ground().samples(t);
  const auto k = static_cast<std::size_t>(model.params().retry_neighbors);
  std::vector<std::pair<double, Index>> d;
  d.reserve(static_cast<std::size_t>(bank.rows()));
  for (Index i = 0; i < bank.rows(); ++i) {
    d.emplace_back((bank.row(i).transpose() - x).squaredNorm(), i);
  }
  std::sort(d.begin(), d.end());
  std::vector<Index> pool;
  for (const auto& [dist, i] : d) {
    if (pool.size() == k) break;
    const Vector g = bank.row(i).transpose();
    const Vector theta = g - x;
    if (Label(model.verify(), g) == t &&
        LossUnchecked(model, g, theta, s, t) <= level) {
      pool.push_back(i);
    }
  }
  if (pool.empty() && anchor) return *anchor - x;
  for (std::size_t j = 0; pool.empty() && j < std::min(k, d.size()); ++j) {
    pool.push_back(d[j].second);
  }
  return bank.row(pool[rng.UniformIndex(pool.size())]).transpose() - x;
}

}  // namespace

void SanitizerParams::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be finite and >= 0");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be positive");
  }
  if (max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  }
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw Error(ErrorCode::kInvalidArgument, "margin must be finite and >= 0");
  }
  if (!(init_scale >= 0.0) || retry_neighbors < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad retry settings");
  }
}

GroundVerify SplitGroundVerify(const Matrix& x, const std::vector<int>& labels,
                               int num_classes, const KernelSpec& spec,
                               std::uint64_t seed) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "labels do not match rows");
  }
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[static_cast<std::size_t>(labels[i])].push_back(static_cast<Index>(i));
  }
  Rng rng(seed);
  std::vector<Matrix> ground;
  std::vector<Matrix> verify;
  for (int l = 0; l < num_classes; ++l) {
    auto& m = members[static_cast<std::size_t>(l)];
    if (m.size() < 2) {
      throw Error(ErrorCode::kClassTooSmall,
                  "class " + std::to_string(l) + " has " +
                      std::to_string(m.size()) + " samples, need 2");
    }
    rng.Shuffle(std::span<Index>(m));
    const std::size_t ng = (m.size() + 1) / 2;
    Matrix g(static_cast<Index>(ng), x.cols());
    Matrix v(static_cast<Index>(m.size() - ng), x.cols());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i < ng) {
        g.row(static_cast<Index>(i)) = x.row(m[i]);
      } else {
        v.row(static_cast<Index>(i - ng)) = x.row(m[i]);
      }
    }
    ground.push_back(std::move(g));
    verify.push_back(std::move(v));
  }
  return {ClassBank(spec, std::move(ground)), ClassBank(spec, std::move(verify))};
}

GroundVerify SplitGroundVerify(const LabeledDataset& projected,
                               const std::string& privacy_target,
                               const KernelSpec& spec, std::uint64_t seed) {
  const Target& target = projected.target(privacy_target);
  return SplitGroundVerify(projected.features, target.labels,
                           target.num_classes(), spec, seed);
}

SanitizerModel::SanitizerModel(GroundVerify banks, const SanitizerParams& params,
                               std::uint64_t seed)
    : banks_(std::move(banks)), params_(params), seed_(seed) {
  params_.Validate();
  if (banks_.ground.dim() != banks_.verify.dim() ||
      banks_.ground.num_classes() != banks_.verify.num_classes()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ground and verification banks disagree");
  }
}

double Loss(const SanitizerModel& model, const Vector& anchor,
            const Vector& theta, int s, int t) {
  CheckPair(model, anchor, theta, s, t);
  return LossUnchecked(model, anchor + theta, theta, s, t);
}

Vector LossGradient(const SanitizerModel& model, const Vector& anchor,
                    const Vector& theta, int s, int t) {
  CheckPair(model, anchor, theta, s, t);
  const double lambda = model.params().lambda;
  const Vector z = anchor + theta;
  if (model.params().finite_difference) {
    Vector g(theta.size());
    Vector tp = theta;
    for (Index j = 0; j < theta.size(); ++j) {
      const double h = 1e-5 * (1.0 + std::abs(theta(j)));
      tp(j) = theta(j) + h;
      const double up = LossUnchecked(model, anchor + tp, tp, s, t);
      tp(j) = theta(j) - h;
      const double down = LossUnchecked(model, anchor + tp, tp, s, t);
      tp(j) = theta(j);
      g(j) = (up - down) / (2.0 * h);
    }
    return g;
  }
  if (model.spec().family != KernelFamily::kRbf) {
    throw Error(ErrorCode::kUnsupportedKernelGradient,
                std::string(KernelFamilyName(model.spec().family)) +
                    " kernel has no analytic gradient");
  }
  return 2.0 * RbfMeanShift(model.ground(), s, z) -
         2.0 * RbfMeanShift(model.ground(), t, z) + lambda * theta;
}

SanitizeTrace Sanitize(const SanitizerModel& model, const Vector& x,
                       std::optional<int> target, std::uint64_t stream) {
  if (x.size() != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sample width does not match the banks");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite sample");
  }
  Rng rng = Rng::Substream(model.seed(), stream);
  const int s = Label(model.verify(), x);
  int t = 0;
  if (target) {
    t = *target;
    if (t < 0 || t >= model.num_classes()) {
      throw Error(ErrorCode::kInvalidArgument, "target class out of range");
    }
  } else {
    t = static_cast<int>(rng.UniformIndex(static_cast<std::size_t>(model.num_classes())));
  }
  if (s == t) {
    SanitizeTrace trace;
    trace.source = s;
    trace.target = t;
    trace.z = x;
    trace.converged = true;
    return trace;
  }

  const SanitizerParams& p = model.params();
  double level = -p.margin;
  std::optional<Vector> anchor;
  if (p.match_depth) {
    const Matrix& v = model.verify().samples(t);
    anchor = v.row(static_cast<Index>(
                       rng.UniformIndex(static_cast<std::size_t>(v.rows()))))
                 .transpose();
    // The loss x would have if moved onto the anchor, which z = anchor attains.
    level = std::min(level, LossUnchecked(model, *anchor, *anchor - x, s, t));
  }
  const double init_sd = p.init_scale * model.spec().sigma;
  auto random_theta = [&] {
    Vector theta(x.size());
    for (Index j = 0; j < theta.size(); ++j) theta(j) = init_sd * rng.StandardNormal();
    return theta;
  };

  Vector theta0 = p.random_init ? random_theta() : Vector::Zero(x.size());
  SanitizeTrace trace = Descend(model, x, s, t, level, std::move(theta0), p.alpha);
  if (!trace.converged && p.retry) {
    SanitizeTrace again = Descend(model, x, s, t, level,
                                  NeighborTheta(model, x, s, t, level, anchor, rng),
                                  p.alpha);
    again.retried = true;
    again.iterations += trace.iterations;
    trace = std::move(again);
  }
  return trace;
}

void RequireConverged(const SanitizeTrace& trace) {
  if (!trace.converged) {
    throw Error(ErrorCode::kNotConverged,
                "no label flip to class " + std::to_string(trace.target) +
                    " after " + std::to_string(trace.iterations) + " iterations");
  }
}

double SanitizeBatchResult::convergence_rate() const {
  if (traces.empty()) return 1.0;
  return 1.0 - static_cast<double>(not_converged.size()) /
                   static_cast<double>(traces.size());
}

SanitizeBatchResult SanitizeBatch(const SanitizerModel& model, const Matrix& x,
                                  std::span<const std::uint64_t> row_ids,
                                  int jobs) {
  if (static_cast<std::size_t>(x.rows()) != row_ids.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "row ids do not match rows");
  }
  SanitizeBatchResult out;
  out.z.resize(x.rows(), x.cols());
  out.traces.resize(row_ids.size());
  internal::ParallelFor(row_ids.size(), jobs, [&](std::size_t r) {
    out.traces[r] = Sanitize(model, x.row(static_cast<Index>(r)).transpose(),
                             std::nullopt, row_ids[r]);
  });
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    out.z.row(static_cast<Index>(r)) = out.traces[r].z.transpose();
    if (!out.traces[r].converged) out.not_converged.push_back(row_ids[r]);
    if (out.traces[r].retried) ++out.retried;
  }
  return out;
}

}  // namespace ppdr
