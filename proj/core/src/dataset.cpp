// Copyright 2026 The Subag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subag/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subag/errors.hpp"

namespace subag {

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> features, std::vector<double> targets,
                 std::vector<std::string> column_names)
    : cols_(cols), features_(std::move(features)), targets_(std::move(targets)), column_names_(std::move(column_names)) {
  if (targets_.size() != rows || features_.size() != rows * cols) {
    throw SchemaError("Dataset: shape mismatch");
  }
  if (!column_names_.empty() && column_names_.size() != cols) {
    throw SchemaError("Dataset: column name count differs from feature count");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> f;
  std::vector<double> t;
  f.reserve(indices.size() * cols_);
  t.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto r = row(i);
    f.insert(f.end(), r.begin(), r.end());
    t.push_back(targets_[i]);
  }
  return Dataset(indices.size(), cols_, std::move(f), std::move(t), column_names_);
}

Dataset Dataset::with_targets(std::vector<double> targets) const {
  return Dataset(rows(), cols_, features_, std::move(targets), column_names_);
}

std::vector<std::size_t> Dataset::canonical_order() const {
  std::vector<std::size_t> order(rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const auto ra = row(a);
    const auto rb = row(b);
    for (std::size_t j = 0; j < cols_; ++j) {
      if (ra[j] < rb[j]) return true;
      if (rb[j] < ra[j]) return false;
    }
    return targets_[a] < targets_[b];
  });
  return order;
}

Dataset Dataset::canonicalized() const {
  const auto order = canonical_order();
  return subset(order);
}

void Dataset::validate() const {
  if (rows() == 0) throw SchemaError("Dataset: no rows");
  if (cols_ == 0) throw SchemaError("Dataset: no feature columns");
  for (std::size_t i = 0; i < rows(); ++i) {
    if (!std::isfinite(targets_[i])) throw SchemaError("Dataset: non-finite target in row " + std::to_string(i));
    for (double v : row(i)) {
      if (!std::isfinite(v)) throw SchemaError("Dataset: non-finite feature in row " + std::to_string(i));
    }
  }
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace subag
