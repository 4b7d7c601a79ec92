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


#include "ppdr/classifier.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"
#include "parallel.h"
#include "ppdr/dataset.h"
#include "ppdr/error.h"

namespace ppdr {
namespace {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;
using nlohmann::ordered_json;

constexpr double kTau = 1e-12;
constexpr const char* kSvmFormat = "ppdr-svm";
constexpr int kSvmVersion = 1;

// Binary model expressed over the rows of its training set.
struct GramModel {
  Vector coef;  // alpha_i y_i
  double bias = 0.0;
  bool converged = true;
};

// Binary labels of one-vs-rest model m; with two classes the only model
// separates class 0 (+1) from class 1.
std::vector<int> BinaryLabels(const std::vector<int>& labels, int m) {
  std::vector<int> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == m ? 1 : -1;
  return y;
}

int NumModels(int num_classes) { return num_classes == 2 ? 1 : num_classes; }

std::vector<GramModel> TrainOvr(const Matrix& gram, const std::vector<int>& labels,
                                int num_classes, const SmoOptions& options) {
  std::vector<bool> seen(static_cast<std::size_t>(num_classes), false);
  for (int l : labels) {
    if (l < 0 || l >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "label out of range");
    }
    seen[static_cast<std::size_t>(l)] = true;
  }
  if (std::count(seen.begin(), seen.end(), true) < 2) {
    throw Error(ErrorCode::kSingleClassInput, "need at least two classes");
  }
  std::vector<GramModel> models;
  for (int m = 0; m < NumModels(num_classes); ++m) {
    const std::vector<int> y = BinaryLabels(labels, m);
    GramModel gm;
    gm.coef = Vector::Zero(gram.rows());
    if (!seen[static_cast<std::size_t>(m)]) {
      // Class absent from this training set: never predicted.
      gm.bias = -1.0;
      models.push_back(std::move(gm));
      continue;
    }
    const SmoSolution sol = SolveSmo(gram, y, options);
    for (Index i = 0; i < gram.rows(); ++i) {
      gm.coef(i) = sol.alpha(i) * y[static_cast<std::size_t>(i)];
    }
    gm.bias = sol.bias;
    gm.converged = sol.converged;
    models.push_back(std::move(gm));
  }
  return models;
}

int ArgmaxRow(const Matrix& d, Index r) {
  if (d.cols() == 1) return d(r, 0) >= 0.0 ? 0 : 1;
  int best = 0;
  for (Index m = 1; m < d.cols(); ++m) {
    if (d(r, m) > d(r, best)) best = static_cast<int>(m);
  }
  return best;
}

}  // namespace

SmoSolution SolveSmo(const Matrix& gram, std::span<const int> y,
                     const SmoOptions& options) {
  const Index n = gram.rows();
  if (gram.cols() != n || static_cast<std::size_t>(n) != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "Gram matrix and labels");
  }
  if (!(options.c > 0.0) || !(options.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "C and tol must be positive");
  }
  bool pos = false;
  bool neg = false;
  for (int v : y) {
    if (v == 1) {
      pos = true;
    } else if (v == -1) {
      neg = true;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "binary labels must be +1 or -1");
    }
  }
  if (!pos || !neg) {
    throw Error(ErrorCode::kSingleClassInput, "binary problem has one class");
  }

  const double c = options.c;
  const long max_iter =
      options.max_iter > 0 ? options.max_iter : std::max<long>(100000, 100 * n);
  auto yi = [&](Index i) { return static_cast<double>(y[static_cast<std::size_t>(i)]); };
  // Columns rather than rows: gram is symmetric and column-major.
  auto q = [&](Index i, Index j) { return yi(i) * yi(j) * gram(j, i); };
  Vector yv(n);
  for (Index t = 0; t < n; ++t) yv(t) = yi(t);
  const Vector diag = gram.diagonal();

  SmoSolution sol;
  sol.alpha = Vector::Zero(n);
  Vector& a = sol.alpha;
  Vector g = Vector::Constant(n, -1.0);  // gradient of the dual objective

  long iter = 0;
  for (; iter < max_iter; ++iter) {
    // Maximal violating i, then j by second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    Index i = -1;
    for (Index t = 0; t < n; ++t) {
      if (yi(t) > 0) {
        if (a(t) < c && -g(t) >= gmax) {
          gmax = -g(t);
          i = t;
        }
      } else if (a(t) > 0 && g(t) >= gmax) {
        gmax = g(t);
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    Index j = -1;
    for (Index t = 0; t < n && i >= 0; ++t) {
      double diff = 0.0;
      double quad = 0.0;
      if (yi(t) > 0) {
        if (a(t) <= 0) continue;
        diff = gmax + g(t);
        gmax2 = std::max(gmax2, g(t));
        quad = diag(i) + diag(t) - 2.0 * gram(t, i);
      } else {
        if (a(t) >= c) continue;
        diff = gmax - g(t);
        gmax2 = std::max(gmax2, -g(t));
        quad = diag(i) + diag(t) - 2.0 * gram(t, i);
      }
      if (diff > 0) {
        const double obj = -(diff * diff) / (quad > 0 ? quad : kTau);
        if (obj <= best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < options.tol) {
      sol.converged = true;
      break;
    }

    const double ai = a(i);
    const double aj = a(j);
    const double qij = q(i, j);
    if (yi(i) != yi(j)) {
      double quad = gram(i, i) + gram(j, j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-g(i) - g(j)) / quad;
      const double diff = a(i) - a(j);
      a(i) += delta;
      a(j) += delta;
      if (diff > 0) {
        if (a(j) < 0) {
          a(j) = 0;
          a(i) = diff;
        }
      } else if (a(i) < 0) {
        a(i) = 0;
        a(j) = -diff;
      }
      if (diff > 0) {
        if (a(i) > c) {
          a(i) = c;
          a(j) = c - diff;
        }
      } else if (a(j) > c) {
        a(j) = c;
        a(i) = c + diff;
      }
    } else {
      double quad = gram(i, i) + gram(j, j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (g(i) - g(j)) / quad;
      const double sum = a(i) + a(j);
      a(i) -= delta;
      a(j) += delta;
      if (sum > c) {
        if (a(i) > c) {
          a(i) = c;
          a(j) = sum - c;
        }
      } else if (a(j) < 0) {
        a(j) = 0;
        a(i) = sum;
      }
      if (sum > c) {
        if (a(j) > c) {
          a(j) = c;
          a(i) = sum - c;
        }
      } else if (a(i) < 0) {
        a(i) = 0;
        a(j) = sum;
      }
    }
    const double dai = a(i) - ai;
    const double daj = a(j) - aj;
    g.array() += yv.array() * (yi(i) * dai * gram.col(i).array() +
                               yi(j) * daj * gram.col(j).array());
  }
  sol.iterations = iter;
  if (!sol.converged && options.strict) {
    throw Error(ErrorCode::kNoConvergence,
                "SMO hit " + std::to_string(max_iter) + " iterations");
  }

  // Bias from free vectors, else the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int free = 0;
  for (Index t = 0; t < n; ++t) {
    const double yg = yi(t) * g(t);
    if (a(t) >= c) {
      if (yi(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (a(t) <= 0) {
      if (yi(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  const double rho = free > 0 ? sum_free / free : 0.5 * (ub + lb);
  sol.bias = -rho;
  return sol;
}

double SvmModel::Decision(const Vector& x) const {
  if (x.size() != support.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "query width");
  }
  double f = bias;
  for (Index i = 0; i < support.rows(); ++i) {
    f += alpha(i) * y[static_cast<std::size_t>(i)] *
         KernelEval(spec, support.row(i).transpose(), x);
  }
  return f;
}

int SvmModel::Predict(const Vector& x) const { return Decision(x) >= 0.0 ? 1 : -1; }

SvmModel TrainSvm(const Matrix& x, std::span<const int> y, const KernelSpec& spec,
                  const SmoOptions& options) {
  spec.Validate();
  const Matrix gram = KernelMatrix(spec, x);
  const SmoSolution sol = SolveSmo(gram, y, options);
  SvmModel model;
  model.spec = spec;
  model.c = options.c;
  model.bias = sol.bias;
  model.converged = sol.converged;
  std::vector<Index> sv;
  for (Index i = 0; i < x.rows(); ++i) {
    if (sol.alpha(i) > 0) sv.push_back(i);
  }
  model.support.resize(static_cast<Index>(sv.size()), x.cols());
  model.alpha.resize(static_cast<Index>(sv.size()));
  for (std::size_t k = 0; k < sv.size(); ++k) {
    model.support.row(static_cast<Index>(k)) = x.row(sv[k]);
    model.alpha(static_cast<Index>(k)) = sol.alpha(sv[k]);
    model.y.push_back(y[static_cast<std::size_t>(sv[k])]);
  }
  return model;
}

MulticlassSvm MulticlassSvm::Train(const Matrix& x, const std::vector<int>& labels,
                                   int num_classes, const KernelSpec& spec,
                                   const SmoOptions& options) {
  spec.Validate();
  return TrainFromGram(x, KernelMatrix(spec, x), labels, num_classes, spec,
                       options);
}

MulticlassSvm MulticlassSvm::TrainFromGram(const Matrix& x, const Matrix& gram,
                                           const std::vector<int>& labels,
                                           int num_classes, const KernelSpec& spec,
                                           const SmoOptions& options) {
  if (static_cast<std::size_t>(x.rows()) != labels.size() ||
      gram.rows() != x.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "training rows and labels");
  }
  const auto models = TrainOvr(gram, labels, num_classes, options);
  MulticlassSvm out;
  out.spec_ = spec;
  out.c_ = options.c;
  out.num_classes_ = num_classes;
  std::vector<Index> rows;
  for (Index i = 0; i < x.rows(); ++i) {
    for (const auto& m : models) {
      if (m.coef(i) != 0.0) {
        rows.push_back(i);
        break;
      }
    }
  }
  const Index nm = static_cast<Index>(models.size());
  out.support_.resize(static_cast<Index>(rows.size()), x.cols());
  out.coef_.resize(static_cast<Index>(rows.size()), nm);
  out.bias_.resize(nm);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.support_.row(static_cast<Index>(k)) = x.row(rows[k]);
    for (Index m = 0; m < nm; ++m) {
      out.coef_(static_cast<Index>(k), m) =
          models[static_cast<std::size_t>(m)].coef(rows[k]);
    }
  }
  for (Index m = 0; m < nm; ++m) {
    out.bias_(m) = models[static_cast<std::size_t>(m)].bias;
    out.converged_ = out.converged_ && models[static_cast<std::size_t>(m)].converged;
  }
  return out;
}

Matrix MulticlassSvm::Decisions(const Matrix& x) const {
  if (x.cols() != support_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(x.cols()) + " features, model " +
                    std::to_string(support_.cols()));
  }
  Matrix d = KernelMatrix(spec_, x, support_) * coef_;
  d.rowwise() += bias_.transpose();
  return d;
}

std::vector<int> MulticlassSvm::Predict(const Matrix& x) const {
  const Matrix d = Decisions(x);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] = ArgmaxRow(d, r);
  return out;
}

int MulticlassSvm::Predict(const Vector& x) const {
  return Predict(Matrix(x.transpose())).front();
}

std::string MulticlassSvm::Serialize() const {
  ordered_json doc;
  doc["format"] = kSvmFormat;
  doc["version"] = kSvmVersion;
  doc["kernel"] = {{"family", std::string(KernelFamilyName(spec_.family))},
                   {"sigma", spec_.sigma},
                   {"degree", spec_.degree},
                   {"coef", spec_.coef}};
  doc["c"] = c_;
  doc["num_classes"] = num_classes_;
  doc["converged"] = converged_;
  auto row_major = [](const Matrix& m) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(m.size()));
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    }
    return ordered_json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", v}};
  };
  doc["support"] = row_major(support_);
  doc["coef"] = row_major(coef_);
  doc["bias"] = std::vector<double>(bias_.begin(), bias_.end());
  return doc.dump(2) + "\n";
}

MulticlassSvm MulticlassSvm::Deserialize(std::string_view text) {
  try {
    const auto doc = ordered_json::parse(text);
    if (doc.value("format", "") != kSvmFormat || doc.value("version", 0) != kSvmVersion) {
      throw Error(ErrorCode::kFormatError, "not a ppdr svm document");
    }
    MulticlassSvm out;
    const auto& k = doc.at("kernel");
    out.spec_.family = ParseKernelFamily(k.at("family").get<std::string>());
    out.spec_.sigma = k.at("sigma").get<double>();
    out.spec_.degree = k.at("degree").get<int>();
    out.spec_.coef = k.at("coef").get<double>();
    out.c_ = doc.at("c").get<double>();
    out.num_classes_ = doc.at("num_classes").get<int>();
    out.converged_ = doc.at("converged").get<bool>();
    auto read = [](const ordered_json& j) {
      const Index rows = j.at("rows").get<Index>();
      const Index cols = j.at("cols").get<Index>();
      const auto v = j.at("data").get<std::vector<double>>();
      if (static_cast<Index>(v.size()) != rows * cols) {
        throw Error(ErrorCode::kFormatError, "matrix shape");
      }
      Matrix m(rows, cols);
      for (Index i = 0; i < rows; ++i) {
        for (Index jj = 0; jj < cols; ++jj) m(i, jj) = v[static_cast<std::size_t>(i * cols + jj)];
      }
      return m;
    };
    out.support_ = read(doc.at("support"));
    out.coef_ = read(doc.at("coef"));
    const auto b = doc.at("bias").get<std::vector<double>>();
    out.bias_ = Eigen::Map<const Vector>(b.data(), static_cast<Index>(b.size()));
    if (out.coef_.rows() != out.support_.rows() || out.coef_.cols() != out.bias_.size() ||
        out.bias_.size() != NumModels(out.num_classes_)) {
      throw Error(ErrorCode::kFormatError, "inconsistent svm document");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
}

double Accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction and truth lengths");
  }
  if (truth.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += predicted[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

GridSearchReport GridSearch(const Matrix& x, const std::vector<int>& labels,
                            int num_classes, int folds, const GridSpec& grid,
                            std::uint64_t seed, int jobs) {
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
  if (grid.c.empty() || grid.sigma_multipliers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty grid");
  }
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "rows and labels");
  }
  GridSearchReport report;
  report.folds = folds;
  report.median_distance = MedianPairwiseDistance(x);
  const std::vector<int> fold = StratifiedFolds(labels, num_classes, folds, seed);

  std::vector<std::vector<Index>> train_idx(static_cast<std::size_t>(folds));
  std::vector<std::vector<Index>> test_idx(static_cast<std::size_t>(folds));
  for (Index i = 0; i < x.rows(); ++i) {
    for (int f = 0; f < folds; ++f) {
      (fold[static_cast<std::size_t>(i)] == f ? test_idx : train_idx)[static_cast<std::size_t>(f)]
          .push_back(i);
    }
  }

  // Squared distances once; one Gram matrix per sigma.
  const Vector sq = x.rowwise().squaredNorm();
  Matrix d2 = -2.0 * x * x.transpose();
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  d2 = d2.cwiseMax(0.0);

  const std::size_t ns = grid.sigma_multipliers.size();
  const std::size_t nc = grid.c.size();
  for (std::size_t si = 0; si < ns; ++si) {
    for (std::size_t ci = 0; ci < nc; ++ci) {
      GridPoint p;
      p.c = grid.c[ci];
      p.sigma_multiplier = grid.sigma_multipliers[si];
      p.sigma = p.sigma_multiplier * report.median_distance;
      report.points.push_back(p);
    }
  }
  std::vector<Matrix> grams(ns);
  internal::ParallelFor(ns, jobs, [&](std::size_t si) {
    const double s = grid.sigma_multipliers[si] * report.median_distance;
    grams[si] = (-d2 / (2.0 * s * s)).array().exp().matrix();
  });

  const std::size_t tasks = ns * nc * static_cast<std::size_t>(folds);
  std::vector<std::size_t> hits(tasks, 0);
  internal::ParallelFor(tasks, jobs, [&](std::size_t task) {
    const std::size_t f = task % static_cast<std::size_t>(folds);
    const std::size_t point = task / static_cast<std::size_t>(folds);
    const std::size_t si = point / nc;
    const std::size_t ci = point % nc;
    const Matrix& gram = grams[si];
    const auto& tr = train_idx[f];
    const auto& te = test_idx[f];
    Matrix sub(static_cast<Index>(tr.size()), static_cast<Index>(tr.size()));
    std::vector<int> sub_labels(tr.size());
    for (std::size_t a = 0; a < tr.size(); ++a) {
      sub_labels[a] = labels[static_cast<std::size_t>(tr[a])];
      for (std::size_t b = 0; b < tr.size(); ++b) {
        sub(static_cast<Index>(a), static_cast<Index>(b)) = gram(tr[a], tr[b]);
      }
    }
    SmoOptions opt;
    opt.c = grid.c[ci];
    opt.tol = grid.tol;
    const auto models = TrainOvr(sub, sub_labels, num_classes, opt);
    Matrix d(static_cast<Index>(te.size()), static_cast<Index>(models.size()));
    for (std::size_t q = 0; q < te.size(); ++q) {
      for (std::size_t m = 0; m < models.size(); ++m) {
        double v = models[m].bias;
        for (std::size_t a = 0; a < tr.size(); ++a) {
          const double cf = models[m].coef(static_cast<Index>(a));
          if (cf != 0.0) v += cf * gram(tr[a], te[q]);
        }
        d(static_cast<Index>(q), static_cast<Index>(m)) = v;
      }
    }
    std::size_t h = 0;
    for (std::size_t q = 0; q < te.size(); ++q) {
      h += ArgmaxRow(d, static_cast<Index>(q)) == labels[static_cast<std::size_t>(te[q])];
    }
    hits[task] = h;
  });

  for (std::size_t point = 0; point < report.points.size(); ++point) {
    double acc = 0.0;
    for (int f = 0; f < folds; ++f) {
      acc += static_cast<double>(hits[point * static_cast<std::size_t>(folds) +
                                      static_cast<std::size_t>(f)]) /
             static_cast<double>(test_idx[static_cast<std::size_t>(f)].size());
    }
    report.points[point].accuracy = acc / folds;
  }
  // Smaller C first, then smaller sigma; strict improvement keeps the earlier.
  std::vector<std::size_t> order(report.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = report.points[a];
    const auto& pb = report.points[b];
    if (pa.c != pb.c) return pa.c < pb.c;
    return pa.sigma < pb.sigma;
  });
  report.selected = order.front();
  for (std::size_t idx : order) {
    if (report.points[idx].accuracy > report.points[report.selected].accuracy) {
      report.selected = idx;
    }
  }
  return report;
}

}  // namespace ppdr
