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

#include "subag/learners.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "subag/errors.hpp"

namespace subag {
namespace {

// Sum of values in ascending order, so the result depends only on the multiset.
double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

class TreeBuilder {
 public:
  TreeBuilder(const TreeConfig& config, const Dataset& data) : config_(config), data_(data) {
    const std::size_t n = data_.rows();
    const std::size_t d = data_.cols();
    orders_.assign(d, std::vector<std::uint32_t>(n));
    for (std::size_t f = 0; f < d; ++f) {
      auto& ord = orders_[f];
      std::iota(ord.begin(), ord.end(), 0u);
      // Rows are canonical, so stable sorting by value breaks ties by row order.
      std::stable_sort(ord.begin(), ord.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return data_.feature(a, f) < data_.feature(b, f); });
    }
    goes_left_.assign(n, 0);
    buffer_.resize(n);
  }

  std::vector<RegressionTree::Node> build() {
    grow(0, data_.rows(), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::size_t lo, std::size_t hi, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const std::size_t count = hi - lo;
    const auto& rows = orders_[0];

    std::vector<double> ys;
    ys.reserve(count);
    for (std::size_t i = lo; i < hi; ++i) ys.push_back(data_.target(rows[i]));
    const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
    const bool pure = *mn == *mx;
    nodes_[static_cast<std::size_t>(id)].value = sorted_sum(ys) / static_cast<double>(count);

    const auto min_leaf = static_cast<std::size_t>(std::max(config_.min_leaf, 1));
    if (pure || count < 2 * min_leaf || (config_.max_depth && depth >= *config_.max_depth)) return id;

    double total = 0.0;
    for (std::size_t i = lo; i < hi; ++i) total += data_.target(rows[i]);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < data_.cols(); ++f) {
      const auto& ord = orders_[f];
      double left_sum = 0.0;
      for (std::size_t i = lo; i + 1 < hi; ++i) {
        left_sum += data_.target(ord[i]);
        const std::size_t nl = i - lo + 1;
        const std::size_t nr = count - nl;
        if (nl < min_leaf) continue;
        if (nr < min_leaf) break;
        const double a = data_.feature(ord[i], f);
        const double b = data_.feature(ord[i + 1], f);
        if (!(a < b)) continue;
        const double right_sum = total - left_sum;
        // Maximizing this is equivalent to maximizing the SSE reduction.
        const double score = left_sum * left_sum / static_cast<double>(nl) + right_sum * right_sum / static_cast<double>(nr);
        if (score > best_score) {
          best_score = score;
          best_feature = static_cast<int>(f);
          double mid = a + 0.5 * (b - a);
          if (!(mid < b)) mid = a;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    const auto bf = static_cast<std::size_t>(best_feature);
    std::size_t n_left = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint32_t r = rows[i];
      goes_left_[r] = data_.feature(r, bf) <= best_threshold ? 1 : 0;
      n_left += goes_left_[r];
    }
    for (auto& ord : orders_) {
      std::size_t l = lo, r = lo + n_left;
      for (std::size_t i = lo; i < hi; ++i) {
        buffer_[goes_left_[ord[i]] ? l++ : r++] = ord[i];
      }
      std::copy(buffer_.begin() + static_cast<std::ptrdiff_t>(lo), buffer_.begin() + static_cast<std::ptrdiff_t>(hi),
                ord.begin() + static_cast<std::ptrdiff_t>(lo));
    }

    const int left = grow(lo, lo + n_left, depth + 1);
    const int right = grow(lo + n_left, hi, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  const TreeConfig& config_;
  const Dataset& data_;
  std::vector<std::vector<std::uint32_t>> orders_;
  std::vector<char> goes_left_;
  std::vector<std::uint32_t> buffer_;
  std::vector<RegressionTree::Node> nodes_;
};

int subtree_depth(const std::vector<RegressionTree::Node>& nodes, int id) {
  const auto& node = nodes[static_cast<std::size_t>(id)];
  if (node.feature < 0) return 0;
  return 1 + std::max(subtree_depth(nodes, node.left), subtree_depth(nodes, node.right));
}

}  // namespace

std::string describe(const LearnerConfig& config) {
  if (const auto* tree = std::get_if<TreeConfig>(&config)) {
    return "tree(max_depth=" + (tree->max_depth ? std::to_string(*tree->max_depth) : std::string("max")) +
           ", min_leaf=" + std::to_string(tree->min_leaf) + ")";
  }
  return "knn(K=" + std::to_string(std::get<KnnConfig>(config).neighbors) + ")";
}

double RegressionTree::predict(std::span<const double> x) const {
  if (nodes_.empty()) throw DomainError("RegressionTree: model is empty");
  std::size_t id = 0;
  while (nodes_[id].feature >= 0) {
    const auto& node = nodes_[id];
    id = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
  }
  return nodes_[id].value;
}

int RegressionTree::depth() const { return nodes_.empty() ? 0 : subtree_depth(nodes_, 0); }

int RegressionTree::leaf_count() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

RegressionTree fit_tree(const TreeConfig& config, const Dataset& data) {
  if (data.rows() == 0) throw DomainError("fit_tree: empty dataset");
  if (config.max_depth && *config.max_depth < 0) throw DomainError("fit_tree: max_depth must be >= 0");
  if (config.min_leaf < 1) throw DomainError("fit_tree: min_leaf must be >= 1");
  const Dataset canonical = data.canonicalized();
  RegressionTree tree;
  tree.nodes_ = TreeBuilder(config, canonical).build();
  return tree;
}

double predict_tree(const RegressionTree& model, std::span<const double> x) { return model.predict(x); }

double KnnModel::predict(std::span<const double> x) const {
  const std::size_t n = data_.rows();
  if (n == 0) throw DomainError("KnnModel: model is empty");
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = data_.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double diff = r[j] - x[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  const auto k = static_cast<std::size_t>(neighbors_);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<double> ys;
  ys.reserve(k);
  for (std::size_t i = 0; i < k; ++i) ys.push_back(data_.target(dist[i].second));
  return sorted_sum(ys) / static_cast<double>(k);
}

KnnModel fit_knn(const KnnConfig& config, const Dataset& data) {
  if (data.rows() == 0) throw DomainError("fit_knn: empty dataset");
  if (config.neighbors < 1) throw DomainError("fit_knn: K must be >= 1");
  KnnModel model;
  model.data_ = data.canonicalized();
  model.neighbors_ = config.neighbors;
  if (static_cast<std::size_t>(config.neighbors) > data.rows()) {
    spdlog::warn("fit_knn: K={} exceeds training size {}, clamped", config.neighbors, data.rows());
    model.neighbors_ = static_cast<int>(data.rows());
  }
  return model;
}

double predict_knn(const KnnModel& model, std::span<const double> x) { return model.predict(x); }

Model fit(const LearnerConfig& config, const Dataset& data) {
  return std::visit(
      [&data](const auto& c) -> Model {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, TreeConfig>) {
          return fit_tree(c, data);
        } else {
          return fit_knn(c, data);
        }
      },
      config);
}

double predict(const Model& model, std::span<const double> x) {
  return std::visit([x](const auto& m) { return m.predict(x); }, model);
}

SymmetricKernel learner_as_kernel(const LearnerConfig& config, std::vector<double> x, int k) {
  if (k < 1) throw DomainError("learner_as_kernel: k must be >= 1");
  if (x.empty()) throw DomainError("learner_as_kernel: test point has no features");
  const std::size_t d = x.size();
  return {k,
          [config, x = std::move(x), d](std::span<const Atom* const> points) {
            std::vector<double> f;
            std::vector<double> t;
            f.reserve(points.size() * d);
            for (const Atom* a : points) {
              if (a->features.size() != d) throw DomainError("learner_as_kernel: atom dimension differs from test point");
              f.insert(f.end(), a->features.begin(), a->features.end());
              t.push_back(a->target);
            }
            const Dataset data(points.size(), d, std::move(f), std::move(t));
            return predict(fit(config, data), x);
          },
          describe(config)};
}

}  // namespace subag
