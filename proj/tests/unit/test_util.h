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


// Shared fixtures and independent reference implementations for the tests.

#ifndef PPDR_TESTS_TEST_UTIL_H_
#define PPDR_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ppdr/linalg.h"

namespace ppdr::testing {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

inline Matrix RandomMatrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = n(gen);
  }
  return m;
}

inline Matrix RandomSymmetric(Index n, std::uint64_t seed) {
  const Matrix a = RandomMatrix(n, n, seed);
  return 0.5 * (a + a.transpose());
}

inline Matrix RandomSpd(Index n, std::uint64_t seed) {
  const Matrix a = RandomMatrix(n, n, seed);
  return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
}

// Cyclic Jacobi rotations; eigenvalues in non-increasing order.
inline Vector JacobiEigenvalues(Matrix a) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(v.begin(), v.end(), std::greater<>());
  return Eigen::Map<Vector>(v.data(), n);
}

struct RawScatter {
  Matrix within;
  Matrix between;
  Matrix total;
};

// Scatter from raw second moments: sum x x^T - n mu mu^T and friends.
inline RawScatter RawMomentScatter(const Matrix& x, const std::vector<int>& labels,
                                   int num_classes) {
  const Index m = x.cols();
  Matrix sxx = Matrix::Zero(m, m);
  Vector sum = Vector::Zero(m);
  std::vector<Vector> class_sum(static_cast<std::size_t>(num_classes),
                                Vector::Zero(m));
  std::vector<double> count(static_cast<std::size_t>(num_classes), 0.0);
  for (Index i = 0; i < x.rows(); ++i) {
    const Vector xi = x.row(i).transpose();
    sxx += xi * xi.transpose();
    sum += xi;
    class_sum[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] += xi;
    count[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] += 1.0;
  }
  const double n = static_cast<double>(x.rows());
  RawScatter r;
  r.total = sxx - sum * sum.transpose() / n;
  Matrix class_part = Matrix::Zero(m, m);
  for (int l = 0; l < num_classes; ++l) {
    const auto& s = class_sum[static_cast<std::size_t>(l)];
    class_part += s * s.transpose() / count[static_cast<std::size_t>(l)];
  }
  r.between = class_part - sum * sum.transpose() / n;
  r.within = sxx - class_part;
  return r;
}

// Gaussian clusters around the given centres, `per` rows each, labelled by
// centre index.
inline Matrix Clusters(const Matrix& centres, int per, double sd,
                       std::uint64_t seed, std::vector<int>& labels) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, sd);
  Matrix x(centres.rows() * per, centres.cols());
  labels.clear();
  for (Index c = 0; c < centres.rows(); ++c) {
    for (int i = 0; i < per; ++i) {
      const Index r = c * per + i;
      for (Index j = 0; j < centres.cols(); ++j) x(r, j) = centres(c, j) + n(gen);
      labels.push_back(static_cast<int>(c));
    }
  }
  return x;
}

}  // namespace ppdr::testing

#endif  // PPDR_TESTS_TEST_UTIL_H_
