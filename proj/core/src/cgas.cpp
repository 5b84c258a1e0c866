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

#include "subag/cgas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <tbb/parallel_for.h>

#include "subag/errors.hpp"
#include "subag/random.hpp"

namespace subag::cgas {
namespace {

constexpr std::uint64_t kFoldStream = 1;
constexpr std::uint64_t kPilotStream = 2;
constexpr std::uint64_t kFinalStream = 3;

Dataset draw_member(const Dataset& data, std::size_t size, Sampling sampling, Rng& rng) {
  const std::size_t n = data.rows();
  std::vector<std::size_t> rows(size);
  if (sampling == Sampling::kBootstrap) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (auto& r : rows) r = pick(rng);
  } else {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(perm[i], perm[pick(rng)]);
    }
    std::copy_n(perm.begin(), size, rows.begin());
  }
  return data.subset(rows);
}

}  // namespace

std::string to_string(Sampling s) {
  return s == Sampling::kBootstrap ? "bootstrap" : "without_replacement";
}

std::string to_string(GridBranch b) { return b == GridBranch::kHighComplexity ? "high_complexity" : "low_complexity"; }

void CgasConfig::validate() const {
  if (search_members < 1) throw DomainError("CgasConfig: search_members must be >= 1");
  if (final_members < 1) throw DomainError("CgasConfig: final_members must be >= 1");
  if (folds < 2) throw DomainError("CgasConfig: folds must be >= 2");
}

Grid restrict_grid(std::optional<int> max_depth) {
  if (!max_depth || *max_depth > kDepthThreshold) return {GridBranch::kHighComplexity, {0.1, 0.2, 0.3, 0.4}};
  return {GridBranch::kLowComplexity, {0.6, 0.7, 0.8, 0.9, 0.95}};
}

Grid restrict_grid(const LearnerConfig& learner) {
  if (const auto* tree = std::get_if<TreeConfig>(&learner)) return restrict_grid(tree->max_depth);
  const auto& knn = std::get<KnnConfig>(learner);
  return restrict_grid(knn.neighbors == 1 ? std::nullopt : std::optional<int>(1));
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k, std::uint64_t seed) {
  if (k < 1) throw DomainError("make_folds: k must be >= 1");
  if (n < static_cast<std::size_t>(k)) throw DomainError("make_folds: fewer rows than folds");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) folds[i % folds.size()].push_back(perm[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::size_t subsample_size(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("subsample_size: alpha must lie in (0, 1]");
  // The slack keeps products like 0.7 * 10 from flooring to 6.
  return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 1e-9));
}

double Ensemble::predict(std::span<const double> x) const {
  if (members_.empty()) throw DomainError("Ensemble: no members");
  double s = 0.0;
  for (const auto& m : members_) s += subag::predict(m, x);
  return s / static_cast<double>(members_.size());
}

std::vector<double> Ensemble::predict(const Dataset& data) const {
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = predict(data.row(i));
  return out;
}

Ensemble train_ensemble(const LearnerConfig& learner, const Dataset& data, double alpha, int members,
                        Sampling sampling, std::uint64_t seed) {
  if (members < 1) throw DomainError("train_ensemble: members must be >= 1");
  const std::size_t size = subsample_size(alpha, data.rows());
  if (size == 0) throw DomainError("train_ensemble: subsample size floor(alpha * n) is 0");
  std::vector<Model> models(static_cast<std::size_t>(members));
  tbb::parallel_for(std::size_t{0}, models.size(), [&](std::size_t b) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(b)}));
    models[b] = fit(learner, draw_member(data, size, sampling, rng));
  });
  return Ensemble(std::move(models));
}

CgasResult select_alpha(const CgasConfig& config, const Dataset& data) {
  config.validate();
  const auto folds = make_folds(data.rows(), config.folds, derive_seed(config.seed, {kFoldStream}));
  for (const auto& f : folds) {
    if (f.empty()) throw DomainError("select_alpha: empty fold");
  }

  CgasResult result;
  result.grid = restrict_grid(config.learner);
  const std::size_t n_alpha = result.grid.alphas.size();
  const std::size_t n_folds = folds.size();

  std::vector<Dataset> train(n_folds);
  std::vector<Dataset> test(n_folds);
  std::vector<char> held(data.rows());
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::fill(held.begin(), held.end(), 0);
    for (std::size_t i : folds[f]) held[i] = 1;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      if (!held[i]) rest.push_back(i);
    }
    train[f] = data.subset(rest);
    test[f] = data.subset(folds[f]);
    for (double a : result.grid.alphas) {
      if (subsample_size(a, train[f].rows()) == 0) throw DomainError("select_alpha: grid ratio gives an empty subsample");
    }
  }

  result.cv_table.assign(n_alpha, std::vector<double>(n_folds, 0.0));
  tbb::parallel_for(std::size_t{0}, n_alpha * n_folds, [&](std::size_t task) {
    const std::size_t a = task / n_folds;
    const std::size_t f = task % n_folds;
    const Ensemble pilot =
        train_ensemble(config.learner, train[f], result.grid.alphas[a], config.search_members,
                       Sampling::kWithoutReplacement, derive_seed(config.seed, {kPilotStream, static_cast<std::uint64_t>(f)}));
    result.cv_table[a][f] = mse(pilot.predict(test[f]), test[f].targets());
  });

  result.alpha_star = kDefaultAlpha;
  double best = std::numeric_limits<double>::infinity();
  result.cv_means.resize(n_alpha);
  for (std::size_t a = 0; a < n_alpha; ++a) {
    double s = 0.0;
    for (double v : result.cv_table[a]) s += v;
    result.cv_means[a] = s / static_cast<double>(n_folds);
    // Grid is ascending, so <= hands ties to the larger ratio.
    if (result.cv_means[a] <= best) {
      best = result.cv_means[a];
      result.alpha_star = result.grid.alphas[a];
    }
  }
  return result;
}

Ensemble train_final(const CgasConfig& config, const Dataset& data, double alpha_star) {
  config.validate();
  return train_ensemble(config.learner, data, alpha_star, config.final_members, config.sampling,
                        derive_seed(config.seed, {kFinalStream}));
}

CgasResult run_cgas(const CgasConfig& config, const Dataset& data) {
  CgasResult result = select_alpha(config, data);
  result.ensemble = train_final(config, data, result.alpha_star);
  return result;
}

Ensemble rf_star(const CgasConfig& config, const Dataset& data, double alpha_star) {
  CgasConfig boot = config;
  boot.sampling = Sampling::kBootstrap;
  return train_final(boot, data, alpha_star);
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size() || predictions.empty()) throw DomainError("mse: size mismatch or empty");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    s += e * e;
  }
  return s / static_cast<double>(predictions.size());
}

double mae(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size() || predictions.empty()) throw DomainError("mae: size mismatch or empty");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) s += std::abs(predictions[i] - targets[i]);
  return s / static_cast<double>(predictions.size());
}

}  // namespace subag::cgas
