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

#ifndef SUBAG_CGAS_HPP_
#define SUBAG_CGAS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subag/dataset.hpp"
#include "subag/learners.hpp"

namespace subag::cgas {

inline constexpr double kDefaultAlpha = 0.632;
inline constexpr int kDepthThreshold = 10;

enum class Sampling { kWithoutReplacement, kBootstrap };
enum class GridBranch { kHighComplexity, kLowComplexity };

std::string to_string(Sampling s);
std::string to_string(GridBranch b);

struct Grid {
  GridBranch branch;
  std::vector<double> alphas;
};

struct CgasConfig {
  LearnerConfig learner = TreeConfig{};
  int search_members = 30;
  int final_members = 100;
  int folds = 3;
  std::uint64_t seed = 0;
  Sampling sampling = Sampling::kWithoutReplacement;

  void validate() const;
};

// Unbounded depth or depth > 10 selects the small-ratio grid.
Grid restrict_grid(std::optional<int> max_depth);
// Trees use their depth; KNN with K = 1 counts as high complexity.
Grid restrict_grid(const LearnerConfig& learner);

// Seeded shuffle dealt round-robin into `k` disjoint folds covering 0..n-1.
// Indices within a fold are ascending.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k, std::uint64_t seed);

// Per-member sample size floor(alpha * n).
std::size_t subsample_size(double alpha, std::size_t n);

class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(std::vector<Model> members) : members_(std::move(members)) {}

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Dataset& data) const;
  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<Model>& members() const noexcept { return members_; }

 private:
  std::vector<Model> members_;
};

// Member b draws floor(alpha * n) rows from its own stream derive_seed(seed, {b}).
Ensemble train_ensemble(const LearnerConfig& learner, const Dataset& data, double alpha, int members,
                        Sampling sampling, std::uint64_t seed);

struct CgasResult {
  double alpha_star = kDefaultAlpha;
  Grid grid;
  std::vector<std::vector<double>> cv_table;  // [alpha][fold] held-out MSE
  std::vector<double> cv_means;
  std::optional<Ensemble> ensemble;
};

// Internal K-fold selection over the restricted grid. Equal CV means go to
// the larger alpha. Pilot ensembles for a fold share seeds across alphas.
CgasResult select_alpha(const CgasConfig& config, const Dataset& data);
Ensemble train_final(const CgasConfig& config, const Dataset& data, double alpha_star);
CgasResult run_cgas(const CgasConfig& config, const Dataset& data);

// Bootstrap members of size floor(alpha_star * n); alpha_star = 1 gives plain bagging.
Ensemble rf_star(const CgasConfig& config, const Dataset& data, double alpha_star);

double mse(std::span<const double> predictions, std::span<const double> targets);
double mae(std::span<const double> predictions, std::span<const double> targets);

}  // namespace subag::cgas

#endif  // SUBAG_CGAS_HPP_
