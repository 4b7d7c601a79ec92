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

#include "ppdr/scatter.h"

#include <cmath>

#include "ppdr/error.h"

namespace ppdr {

ScatterSet ComputeScatter(const linalg::Matrix& x, const std::vector<int>& labels,
                          int num_classes, const std::string& target) {
  using linalg::Index;
  using linalg::Matrix;
  if (labels.size() != static_cast<std::size_t>(x.rows())) {
    throw Error(ErrorCode::kDimensionMismatch, "labels vs rows");
  }
  if (num_classes < 1) {
    throw Error(ErrorCode::kEmptyClass, "target '" + target + "' has no classes");
  }
  const Index m = x.cols();
  ScatterSet s;
  s.target = target;
  s.class_counts.assign(static_cast<std::size_t>(num_classes), 0);
  s.class_means = Matrix::Zero(num_classes, m);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0 || l >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "class index out of range");
    }
    ++s.class_counts[static_cast<std::size_t>(l)];
    s.class_means.row(l) += x.row(static_cast<Index>(i));
  }
  for (int l = 0; l < num_classes; ++l) {
    const auto count = s.class_counts[static_cast<std::size_t>(l)];
    if (count == 0) {
      throw Error(ErrorCode::kEmptyClass, "target '" + target + "' class " +
                                              std::to_string(l) + " is empty");
    }
    s.class_means.row(l) /= static_cast<double>(count);
  }
  s.mean = x.colwise().mean().transpose();

  // Centre once per class; accumulate within-class scatter from the centred
  // rows instead of raw second moments.
  Matrix centered_within(x.rows(), m);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Index r = static_cast<Index>(i);
    centered_within.row(r) = x.row(r) - s.class_means.row(labels[i]);
  }
  s.within = centered_within.transpose() * centered_within;

  const Matrix centered_total = x.rowwise() - s.mean.transpose();
  s.total = centered_total.transpose() * centered_total;

  Matrix weighted_means(num_classes, m);
  for (int l = 0; l < num_classes; ++l) {
    weighted_means.row(l) =
        std::sqrt(static_cast<double>(s.class_counts[static_cast<std::size_t>(l)])) *
        (s.class_means.row(l) - s.mean.transpose());
  }
  s.between = weighted_means.transpose() * weighted_means;

  s.within = linalg::Symmetrize(s.within);
  s.between = linalg::Symmetrize(s.between);
  s.total = linalg::Symmetrize(s.total);
  return s;
}

ScatterSet ComputeScatter(const LabeledDataset& data, const std::string& target) {
  const Target& t = data.target(target);
  return ComputeScatter(data.features, t.labels, t.num_classes(), target);
}

}  // namespace ppdr
