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

#include "ppdr/projection.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ppdr/error.h"
#include "ppdr/rng.h"

namespace ppdr {
namespace {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;
using nlohmann::ordered_json;

constexpr const char* kProjectionFormat = "ppdr-projection";
constexpr int kProjectionVersion = 1;

void CheckK(Index m, Index k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  if (k >= m) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " must be below M=" + std::to_string(m));
  }
}

void CheckRho0(double rho0) {
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho0 must be positive");
  }
}

void CheckWeight(double w, const char* name) {
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name) + " must be finite and non-negative");
  }
}

ProjectionModel SolvePencil(ProjectionMethod method, const Matrix& numerator,
                            const Matrix& denominator, const Vector& mean,
                            ProjectionParams params) {
  const double scale = 1.0 + denominator.norm();
  if (numerator.norm() <= 1e-14 * scale) {
    throw Error(ErrorCode::kEmptyPencil,
                "numerator scatter is zero; the utility target has a single class");
  }
  linalg::EigenResult eig =
      linalg::GeneralizedEig(numerator, denominator, params.k);
  ProjectionModel model;
  model.method = method;
  model.params = std::move(params);
  // Unit columns: B-normalized vectors blow up along directions the
  // denominator barely penalizes, and the sanitizer's ridge is not scale-free.
  model.w = std::move(eig.vectors);
  for (Index j = 0; j < model.w.cols(); ++j) model.w.col(j).normalize();
  model.eigenvalues = std::move(eig.values);
  model.mean = mean;
  return model;
}

void CheckSameSpace(const ScatterSet& a, const ScatterSet& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scatter sets of dimension " + std::to_string(a.dim()) +
                    " and " + std::to_string(b.dim()));
  }
}

}  // namespace

std::string_view ProjectionMethodName(ProjectionMethod method) {
  switch (method) {
    case ProjectionMethod::kPca: return "pca";
    case ProjectionMethod::kRandom: return "random";
    case ProjectionMethod::kDca: return "dca";
    case ProjectionMethod::kMdr: return "mdr";
    case ProjectionMethod::kJupa: return "jupa";
    case ProjectionMethod::kJupaMulti: return "jupa-multi";
  }
  return "pca";
}

ProjectionMethod ParseProjectionMethod(std::string_view name) {
  for (auto m : {ProjectionMethod::kPca, ProjectionMethod::kRandom,
                 ProjectionMethod::kDca, ProjectionMethod::kMdr,
                 ProjectionMethod::kJupa, ProjectionMethod::kJupaMulti}) {
    if (ProjectionMethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown projection method '" + std::string(name) + "'");
}

ProjectionModel FitPca(const Matrix& x, Index k) {
  CheckK(x.cols(), k);
  if (x.rows() < 1) throw Error(ErrorCode::kEmptySampleSet, "no rows");
  const Vector mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - mean.transpose();
  const Matrix cov =
      centered.transpose() * centered / static_cast<double>(x.rows());
  linalg::EigenResult eig = linalg::SymmetricEig(linalg::Symmetrize(cov));
  ProjectionModel model;
  model.method = ProjectionMethod::kPca;
  model.params.k = k;
  model.w = eig.vectors.leftCols(k);
  model.eigenvalues = eig.values.head(k);
  model.mean = mean;
  return model;
}

ProjectionModel FitPca(const LabeledDataset& train, Index k) {
  return FitPca(train.features, k);
}

ProjectionModel FitRandom(Index m, Index k, std::uint64_t seed) {
  CheckK(m, k);
  Rng rng(seed);
  Matrix g(m, k);
  // Row-major fill so the draw order does not depend on Eigen's storage.
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < k; ++j) g(i, j) = rng.StandardNormal();
  }
  ProjectionModel model;
  model.method = ProjectionMethod::kRandom;
  model.params.k = k;
  model.params.seed = seed;
  model.w = linalg::OrthonormalBasis(g);
  model.mean = Vector::Zero(m);
  return model;
}

ProjectionModel FitRandom(const Matrix& train, Index k, std::uint64_t seed) {
  ProjectionModel model = FitRandom(train.cols(), k, seed);
  model.mean = train.colwise().mean().transpose();
  return model;
}

ProjectionModel FitDca(const ScatterSet& utility, Index k, double rho0) {
  CheckK(utility.dim(), k);
  CheckRho0(rho0);
  const Index m = utility.dim();
  ProjectionParams params;
  params.k = k;
  params.rho0 = rho0;
  return SolvePencil(ProjectionMethod::kDca, utility.between,
                     utility.total + rho0 * Matrix::Identity(m, m),
                     utility.mean, std::move(params));
}

ProjectionModel FitMdr(const ScatterSet& utility, const ScatterSet& privacy,
                       Index k, double rho0) {
  CheckSameSpace(utility, privacy);
  CheckK(utility.dim(), k);
  CheckRho0(rho0);
  const Index m = utility.dim();
  ProjectionParams params;
  params.k = k;
  params.rho0 = rho0;
  return SolvePencil(ProjectionMethod::kMdr, utility.between,
                     privacy.between + rho0 * Matrix::Identity(m, m),
                     utility.mean, std::move(params));
}

ProjectionModel FitJupaMulti(std::span<const ScatterSet> utilities,
                             std::span<const ScatterSet> privacies, Index k,
                             double rho0, std::span<const double> rho,
                             std::span<const double> rho_prime) {
  if (utilities.empty() || privacies.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "utility and privacy scatter lists must be non-empty");
  }
  if (rho.size() != privacies.size() || rho_prime.size() != privacies.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "one rho and one rho' per privacy target required");
  }
  for (const auto& s : utilities) CheckSameSpace(utilities.front(), s);
  for (const auto& s : privacies) CheckSameSpace(utilities.front(), s);
  const Index m = utilities.front().dim();
  CheckK(m, k);
  CheckRho0(rho0);
  for (double r : rho) CheckWeight(r, "rho1");
  for (double r : rho_prime) CheckWeight(r, "rho1'");

  Matrix numerator = Matrix::Zero(m, m);
  Matrix denominator = rho0 * Matrix::Identity(m, m);
  for (const auto& u : utilities) {
    numerator += u.between;
    denominator += u.within;
  }
  for (std::size_t i = 0; i < privacies.size(); ++i) {
    numerator += rho_prime[i] * privacies[i].within;
    denominator += rho[i] * privacies[i].between;
  }
  ProjectionParams params;
  params.k = k;
  params.rho0 = rho0;
  params.rho.assign(rho.begin(), rho.end());
  params.rho_prime.assign(rho_prime.begin(), rho_prime.end());
  const ProjectionMethod method = utilities.size() == 1 && privacies.size() == 1
                                      ? ProjectionMethod::kJupa
                                      : ProjectionMethod::kJupaMulti;
  return SolvePencil(method, numerator, denominator, utilities.front().mean,
                     std::move(params));
}

ProjectionModel FitJupa(const ScatterSet& utility, const ScatterSet& privacy,
                        Index k, double rho0, double rho1, double rho1_prime) {
  const double rho[] = {rho1};
  const double rho_prime[] = {rho1_prime};
  return FitJupaMulti(std::span<const ScatterSet>(&utility, 1),
                      std::span<const ScatterSet>(&privacy, 1), k, rho0, rho,
                      rho_prime);
}

Vector Project(const ProjectionModel& model, const Vector& x) {
  if (x.size() != model.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(model.input_dim()));
  }
  if (!model.params.centered) return model.w.transpose() * x;
  return model.w.transpose() * (x - model.mean);
}

Matrix Project(const ProjectionModel& model, const Matrix& x) {
  if (x.cols() != model.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.cols()) + " features, model expects " +
                    std::to_string(model.input_dim()));
  }
  if (!model.params.centered) return x * model.w;
  return (x.rowwise() - model.mean.transpose()) * model.w;
}

std::string SerializeProjection(const ProjectionModel& model) {
  ordered_json doc;
  doc["format"] = kProjectionFormat;
  doc["version"] = kProjectionVersion;
  doc["method"] = std::string(ProjectionMethodName(model.method));
  doc["params"] = {{"k", model.params.k},
                   {"rho0", model.params.rho0},
                   {"rho", model.params.rho},
                   {"rho_prime", model.params.rho_prime},
                   {"seed", model.params.seed},
                   {"centered", model.params.centered}};
  doc["mean"] = std::vector<double>(model.mean.begin(), model.mean.end());
  doc["eigenvalues"] =
      std::vector<double>(model.eigenvalues.begin(), model.eigenvalues.end());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(model.w.size()));
  for (Index i = 0; i < model.w.rows(); ++i) {
    for (Index j = 0; j < model.w.cols(); ++j) data.push_back(model.w(i, j));
  }
  doc["w"] = {{"rows", model.w.rows()},
              {"cols", model.w.cols()},
              {"layout", "row-major"},
              {"data", data}};
  return doc.dump(2) + "\n";
}

ProjectionModel DeserializeProjection(std::string_view text) {
  try {
    const auto doc = ordered_json::parse(text);
    if (doc.value("format", "") != kProjectionFormat) {
      throw Error(ErrorCode::kFormatError, "not a ppdr projection document");
    }
    if (doc.value("version", 0) != kProjectionVersion) {
      throw Error(ErrorCode::kFormatError, "unsupported projection version");
    }
    ProjectionModel model;
    model.method = ParseProjectionMethod(doc.at("method").get<std::string>());
    const auto& p = doc.at("params");
    model.params.k = p.at("k").get<Index>();
    model.params.rho0 = p.at("rho0").get<double>();
    model.params.rho = p.at("rho").get<std::vector<double>>();
    model.params.rho_prime = p.at("rho_prime").get<std::vector<double>>();
    model.params.seed = p.at("seed").get<std::uint64_t>();
    model.params.centered = p.at("centered").get<bool>();
    const auto mean = doc.at("mean").get<std::vector<double>>();
    model.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Index>(mean.size()));
    const auto eig = doc.at("eigenvalues").get<std::vector<double>>();
    model.eigenvalues =
        Eigen::Map<const Vector>(eig.data(), static_cast<Index>(eig.size()));
    const auto& w = doc.at("w");
    const Index rows = w.at("rows").get<Index>();
    const Index cols = w.at("cols").get<Index>();
    const auto data = w.at("data").get<std::vector<double>>();
    if (static_cast<Index>(data.size()) != rows * cols || rows != model.mean.size() ||
        cols != model.params.k) {
      throw Error(ErrorCode::kFormatError, "projection matrix shape");
    }
    model.w.resize(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) {
        model.w(i, j) = data[static_cast<std::size_t>(i * cols + j)];
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, e.what());
  }
}

void SaveProjection(const std::filesystem::path& path,
                    const ProjectionModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << SerializeProjection(model);
}

ProjectionModel LoadProjection(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return DeserializeProjection(ss.str());
}

}  // namespace ppdr
