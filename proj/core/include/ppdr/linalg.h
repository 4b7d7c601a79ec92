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

// Dense symmetric eigenproblems.
//
// All matrices are Eigen::MatrixXd. Symmetric inputs are symmetrized as
// (A + A^T) / 2 before decomposition so that round-off from accumulating
// scatter matrices does not leak into the spectrum. Eigenpairs come back
// sorted by descending eigenvalue, and each eigenvector is signed so that its
// largest-magnitude entry is positive.

#ifndef PPDR_LINALG_H_
#define PPDR_LINALG_H_

#include <Eigen/Dense>

namespace ppdr::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct EigenResult {
  Vector values;   // non-increasing
  Matrix vectors;  // column j pairs with values(j)
};

// Full spectrum of a symmetric matrix.
// Throws NotSquare, NotSymmetric (relative asymmetry above 1e-10) or
// NoConvergence.
EigenResult SymmetricEig(const Matrix& a);

// Lower-triangular L with L * L^T = b. Throws NotPositiveDefinite naming the
// first non-positive pivot; for scatter pencils that usually means the ridge
// term rho0 is too small.
Matrix Cholesky(const Matrix& b);

// Top-k solutions of A w = lambda B w for symmetric A and symmetric positive
// definite B. B is reduced as L L^T, the standard problem
// L^-1 A L^-T y = lambda y is solved, and w = L^-T y. The returned vectors
// are B-orthonormal.
EigenResult GeneralizedEig(const Matrix& a, const Matrix& b, Index k);

// (a + a^T) / 2.
Matrix Symmetrize(const Matrix& a);

// Largest principal angle (radians) between the column spaces of a and b.
// Both must have the same number of rows and full column rank.
double MaxPrincipalAngle(const Matrix& a, const Matrix& b);

// Orthonormal basis of the column space (thin Householder QR, columns signed
// so that R has a non-negative diagonal).
Matrix OrthonormalBasis(const Matrix& a);

}  // namespace ppdr::linalg

#endif  // PPDR_LINALG_H_
