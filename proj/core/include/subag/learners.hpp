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

#ifndef SUBAG_LEARNERS_HPP_
#define SUBAG_LEARNERS_HPP_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "subag/dataset.hpp"
#include "subag/kernel.hpp"

// Deterministic base learners whose fitted predictions depend only on the
// multiset of training rows. Rows are put in canonical order before fitting
// and every tie is broken against that order.
namespace subag {

struct TreeConfig {
  std::optional<int> max_depth;  // nullopt: grow until leaves are pure
  int min_leaf = 1;
};

struct KnnConfig {
  int neighbors = 1;
};

using LearnerConfig = std::variant<TreeConfig, KnnConfig>;

std::string describe(const LearnerConfig& config);

class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  double predict(std::span<const double> x) const;
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int depth() const;
  int leaf_count() const;

 private:
  friend RegressionTree fit_tree(const TreeConfig&, const Dataset&);
  std::vector<Node> nodes_;
};

// Axis-aligned variance-reduction tree. Thresholds are midpoints between
// consecutive distinct feature values; equal scores keep the lowest feature
// index, then the lowest threshold. A node is split whenever its targets
// are not all equal and some feature separates it, so an unbounded tree
// interpolates any training set with distinct feature vectors.
RegressionTree fit_tree(const TreeConfig& config, const Dataset& data);
double predict_tree(const RegressionTree& model, std::span<const double> x);

class KnnModel {
 public:
  double predict(std::span<const double> x) const;
  int neighbors() const noexcept { return neighbors_; }
  const Dataset& data() const noexcept { return data_; }

 private:
  friend KnnModel fit_knn(const KnnConfig&, const Dataset&);
  Dataset data_;  // canonical order
  int neighbors_ = 1;
};

// Mean target of the K nearest rows (Euclidean). Distance ties go to the
// row that comes first in canonical order. K is clamped to the training size.
KnnModel fit_knn(const KnnConfig& config, const Dataset& data);
double predict_knn(const KnnModel& model, std::span<const double> x);

using Model = std::variant<RegressionTree, KnnModel>;

Model fit(const LearnerConfig& config, const Dataset& data);
double predict(const Model& model, std::span<const double> x);

// Kernel that fits the learner on its k argument points (features + target)
// and predicts at `x`.
SymmetricKernel learner_as_kernel(const LearnerConfig& config, std::vector<double> x, int k);

}  // namespace subag

#endif  // SUBAG_LEARNERS_HPP_
