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

#ifndef PPDR_SCATTER_H_
#define PPDR_SCATTER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "ppdr/dataset.h"
#include "ppdr/linalg.h"

namespace ppdr {

// Scatter decomposition of one classification target:
//   within  = sum_l sum_{i in l} (x_i - mu_l)(x_i - mu_l)^T
//   between = sum_l N_l (mu_l - mu)(mu_l - mu)^T
//   total   = sum_i (x_i - mu)(x_i - mu)^T = within + between
struct ScatterSet {
  std::string target;
  linalg::Matrix within;
  linalg::Matrix between;
  linalg::Matrix total;
  linalg::Vector mean;
  linalg::Matrix class_means;  // one row per class
  std::vector<std::size_t> class_counts;

  linalg::Index dim() const { return mean.size(); }
};

// Throws UnknownTarget, EmptyClass.
ScatterSet ComputeScatter(const LabeledDataset& data, const std::string& target);

// Same quantities from raw feature rows and 0-based labels.
ScatterSet ComputeScatter(const linalg::Matrix& x, const std::vector<int>& labels,
                          int num_classes, const std::string& target = {});

}  // namespace ppdr

#endif  // PPDR_SCATTER_H_
