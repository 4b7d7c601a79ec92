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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ppdr/error.h"
#include "test_util.h"

namespace ppdr {
namespace {

using linalg::Matrix;
using linalg::Vector;
using testing::RandomSpd;
using testing::RandomSymmetric;

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ppdr::Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(SymmetricEig, Identity) {
  const auto r = linalg::SymmetricEig(Matrix::Identity(3, 3));
  EXPECT_TRUE(r.values.isApprox(Vector::Ones(3)));
}

TEST(SymmetricEig, DiagonalIsAxisAligned) {
  Matrix a = Vector(Eigen::Vector3d(2, 5, -1)).asDiagonal();
  const auto r = linalg::SymmetricEig(a);
  EXPECT_NEAR(r.values(0), 5, 1e-12);
  EXPECT_NEAR(r.values(1), 2, 1e-12);
  EXPECT_NEAR(r.values(2), -1, 1e-12);
  EXPECT_NEAR(std::abs(r.vectors(1, 0)), 1, 1e-12);
  EXPECT_NEAR(std::abs(r.vectors(0, 1)), 1, 1e-12);
  EXPECT_NEAR(std::abs(r.vectors(2, 2)), 1, 1e-12);
}

TEST(SymmetricEig, TwoByTwoHandSolution) {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const auto r = linalg::SymmetricEig(a);
  EXPECT_NEAR(r.values(0), 3, 1e-12);
  EXPECT_NEAR(r.values(1), 1, 1e-12);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(r.vectors(0, 0)), h, 1e-12);
  EXPECT_NEAR(r.vectors(0, 0), r.vectors(1, 0), 1e-12);
  EXPECT_NEAR(r.vectors(0, 1), -r.vectors(1, 1), 1e-12);
}

TEST(SymmetricEig, LargestEntryOfEachVectorIsPositive) {
  const auto r = linalg::SymmetricEig(RandomSymmetric(6, 3));
  for (Eigen::Index j = 0; j < 6; ++j) {
    Eigen::Index i = 0;
    r.vectors.col(j).cwiseAbs().maxCoeff(&i);
    EXPECT_GT(r.vectors(i, j), 0.0);
  }
}

TEST(SymmetricEig, AgreesWithJacobiOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Matrix a = RandomSymmetric(7, seed);
    const Vector expected = testing::JacobiEigenvalues(a);
    const auto r = linalg::SymmetricEig(a);
    EXPECT_LT((r.values - expected).cwiseAbs().maxCoeff(), 1e-10) << seed;
  }
}

TEST(SymmetricEig, Errors) {
  EXPECT_EQ(CodeOf([] { linalg::SymmetricEig(Matrix::Zero(2, 3)); }),
            ErrorCode::kNotSquare);
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_EQ(CodeOf([&] { linalg::SymmetricEig(a); }), ErrorCode::kNotSymmetric);
}

TEST(Cholesky, Examples) {
  EXPECT_TRUE(linalg::Cholesky(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  Matrix d = Vector(Eigen::Vector2d(4, 9)).asDiagonal();
  Matrix l = linalg::Cholesky(d);
  EXPECT_NEAR(l(0, 0), 2, 1e-14);
  EXPECT_NEAR(l(1, 1), 3, 1e-14);
  Matrix b(2, 2);
  b << 4, 2, 2, 5;
  l = linalg::Cholesky(b);
  EXPECT_NEAR(l(0, 0), 2, 1e-14);
  EXPECT_NEAR(l(0, 1), 0, 1e-14);
  EXPECT_NEAR(l(1, 0), 1, 1e-14);
  EXPECT_NEAR(l(1, 1), 2, 1e-14);
}

TEST(Cholesky, RejectsIndefinite) {
  Matrix b(2, 2);
  b << 1, 2, 2, 1;
  EXPECT_EQ(CodeOf([&] { linalg::Cholesky(b); }), ErrorCode::kNotPositiveDefinite);
}

TEST(GeneralizedEig, IdentityDenominatorReducesToSymmetric) {
  Matrix a = Vector(Eigen::Vector2d(3, 1)).asDiagonal();
  const auto r = linalg::GeneralizedEig(a, Matrix::Identity(2, 2), 1);
  ASSERT_EQ(r.values.size(), 1);
  EXPECT_NEAR(r.values(0), 3, 1e-12);
  EXPECT_NEAR(r.vectors(0, 0), 1, 1e-12);
  EXPECT_NEAR(r.vectors(1, 0), 0, 1e-12);
}

TEST(GeneralizedEig, DiagonalPencilHandSolution) {
  Matrix b = Vector(Eigen::Vector2d(4, 1)).asDiagonal();
  const auto r = linalg::GeneralizedEig(Matrix::Identity(2, 2), b, 2);
  EXPECT_NEAR(r.values(0), 1, 1e-12);
  EXPECT_NEAR(r.values(1), 0.25, 1e-12);
  const Matrix gram = r.vectors.transpose() * b * r.vectors;
  EXPECT_LT((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

// 200 random pencils: residuals, B-orthonormality and agreement with the
// eigenvalues of B^-1/2 A B^-1/2 computed by Jacobi.
TEST(GeneralizedEig, RandomPencilsProperty) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 9);
    const Matrix a = RandomSymmetric(n, 1000 + seed);
    const Matrix b = RandomSpd(n, 5000 + seed);
    const auto r = linalg::GeneralizedEig(a, b, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vector w = r.vectors.col(j);
      const double residual = (a * w - r.values(j) * b * w).norm() /
                              (a.norm() + std::abs(r.values(j)) * b.norm());
      EXPECT_LE(residual, 1e-7) << "seed " << seed << " pair " << j;
    }
    const Matrix gram = r.vectors.transpose() * b * r.vectors;
    EXPECT_LT((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
    Eigen::SelfAdjointEigenSolver<Matrix> sb(b);
    const Matrix bih = sb.operatorInverseSqrt();
    const Vector expected = testing::JacobiEigenvalues(bih * a * bih);
    EXPECT_LT((r.values - expected).cwiseAbs().maxCoeff(),
              1e-8 * (1.0 + expected.cwiseAbs().maxCoeff()));
  }
}

TEST(GeneralizedEig, ValuesAreNonIncreasing) {
  const auto r = linalg::GeneralizedEig(RandomSymmetric(8, 1), RandomSpd(8, 2), 8);
  for (Eigen::Index j = 1; j < 8; ++j) EXPECT_GE(r.values(j - 1), r.values(j));
}

TEST(PrincipalAngle, SameAndOrthogonalSubspaces) {
  const Matrix a = testing::RandomMatrix(5, 2, 9);
  const Matrix mixed = a * (Matrix(2, 2) << 2, 1, -1, 3).finished();
  EXPECT_LT(linalg::MaxPrincipalAngle(a, mixed), 1e-7);
  Matrix e1 = Matrix::Zero(3, 1);
  e1(0, 0) = 1;
  Matrix e2 = Matrix::Zero(3, 1);
  e2(1, 0) = 1;
  EXPECT_NEAR(linalg::MaxPrincipalAngle(e1, e2), std::numbers::pi / 2, 1e-12);
}

TEST(OrthonormalBasis, SpansInputWithOrthonormalColumns) {
  const Matrix a = testing::RandomMatrix(6, 3, 4);
  const Matrix q = linalg::OrthonormalBasis(a);
  EXPECT_LT((q.transpose() * q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(linalg::MaxPrincipalAngle(a, q), 1e-7);
}

}  // namespace
}  // namespace ppdr
