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

#ifndef SUBAG_DATASET_HPP_
#define SUBAG_DATASET_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace subag {

// Dense regression dataset, features stored row-major.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> features, std::vector<double> targets,
          std::vector<std::string> column_names = {});

  std::size_t rows() const noexcept { return targets_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const { return {features_.data() + i * cols_, cols_}; }
  double feature(std::size_t i, std::size_t j) const { return features_[i * cols_ + j]; }
  double target(std::size_t i) const { return targets_[i]; }

  std::span<const double> features() const noexcept { return features_; }
  std::span<const double> targets() const noexcept { return targets_; }
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }

  Dataset subset(std::span<const std::size_t> indices) const;
  Dataset with_targets(std::vector<double> targets) const;

  // Rows sorted by (features lexicographically, then target).
  Dataset canonicalized() const;
  std::vector<std::size_t> canonical_order() const;

  // Throws SchemaError on NaN/Inf, empty data, or shape mismatches.
  void validate() const;

 private:
  std::size_t cols_ = 0;
  std::vector<double> features_;
  std::vector<double> targets_;
  std::vector<std::string> column_names_;
};

double mean(std::span<const double> v);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> v);

}  // namespace subag

#endif  // SUBAG_DATASET_HPP_
