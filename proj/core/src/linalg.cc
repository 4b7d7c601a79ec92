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

#include "ppdr/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ppdr/error.h"

namespace ppdr::linalg {
namespace {

constexpr double kSymmetryTolerance = 1e-10;

void RequireSquare(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kNotSquare,
                std::string(what) + " is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()));
  }
}

void RequireFinite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " has non-finite entries");
  }
}

void RequireSymmetric(const Matrix& a, const char* what) {
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::kNotSymmetric,
                std::string(what) + " asymmetry " + std::to_string(asym));
  }
}

void FixSign(Eigen::Ref<Vector> v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0) v = -v;
}

// Sorts eigenpairs by descending value; stable so that the decomposition's
// order survives among exact ties.
EigenResult SortDescending(const Vector& values, const Matrix& vectors,
                           Index keep) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return values(i) > values(j); });
  EigenResult out;
  out.values.resize(keep);
  out.vectors.resize(vectors.rows(), keep);
  for (Index j = 0; j < keep; ++j) {
    out.values(j) = values(order[static_cast<std::size_t>(j)]);
    out.vectors.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
    FixSign(out.vectors.col(j));
  }
  return out;
}

}  // namespace

Matrix Symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

EigenResult SymmetricEig(const Matrix& a) {
  RequireSquare(a, "matrix");
  RequireFinite(a, "matrix");
  RequireSymmetric(a, "matrix");
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(Symmetrize(a));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence,
                "symmetric eigensolver did not converge");
  }
  return SortDescending(solver.eigenvalues(), solver.eigenvectors(), a.rows());
}

Matrix Cholesky(const Matrix& b) {
  RequireSquare(b, "matrix");
  RequireFinite(b, "matrix");
  RequireSymmetric(b, "matrix");
  const Index n = b.rows();
  const Matrix s = Symmetrize(b);
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double pivot = s(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "pivot " + std::to_string(j) + " is " +
                      std::to_string(pivot) + "; increase rho0");
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (s(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
  }
  return l;
}

EigenResult GeneralizedEig(const Matrix& a, const Matrix& b, Index k) {
  RequireSquare(a, "numerator");
  RequireSquare(b, "denominator");
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pencil sizes " + std::to_string(a.rows()) + " and " +
                    std::to_string(b.rows()));
  }
  if (k < 1 || k > a.rows()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " for size " +
                    std::to_string(a.rows()));
  }
  RequireFinite(a, "numerator");
  RequireSymmetric(a, "numerator");
  const Matrix l = Cholesky(b);
  const auto lower = l.triangularView<Eigen::Lower>();
  // C = L^-1 A L^-T
  Matrix tmp = lower.solve(Symmetrize(a));
  Matrix c = lower.solve(tmp.transpose());
  EigenResult reduced = SymmetricEig(Symmetrize(c));
  EigenResult out;
  out.values = reduced.values.head(k);
  out.vectors = l.transpose().triangularView<Eigen::Upper>().solve(
      reduced.vectors.leftCols(k));
  for (Index j = 0; j < k; ++j) FixSign(out.vectors.col(j));
  return out;
}

Matrix OrthonormalBasis(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix r = qr.matrixQR().topRows(a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

double MaxPrincipalAngle(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "subspace ambient dimensions");
  }
  const Matrix qa = OrthonormalBasis(a);
  const Matrix qb = OrthonormalBasis(b);
  // sin of the largest angle is the spectral norm of the part of the smaller
  // basis lying outside the other span.
  const Matrix& small = qa.cols() <= qb.cols() ? qa : qb;
  const Matrix& large = qa.cols() <= qb.cols() ? qb : qa;
  const Matrix residual = small - large * (large.transpose() * small);
  Eigen::JacobiSVD<Matrix> svd(residual);
  const double s = svd.singularValues().size() > 0
                       ? std::min(1.0, svd.singularValues()(0))
                       : 0.0;
  return std::asin(s);
}

}  // namespace ppdr::linalg
