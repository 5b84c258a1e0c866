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

#include "subag/subag_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subag/anova.hpp"
#include "subag/combinatorics.hpp"
#include "subag/errors.hpp"
#include "subag/numeric.hpp"
#include "subag/random.hpp"

namespace subag {
namespace {

void check_kernel(const SymmetricKernel& kernel, int n, int k) {
  if (n < 1) throw DomainError("subag: n must be >= 1");
  if (k < 1 || k > n) throw DomainError("subag: k must lie in [1, n], got k=" + std::to_string(k));
  if (kernel.arity != k) {
    throw DomainError("subag: kernel arity " + std::to_string(kernel.arity) + " differs from k=" + std::to_string(k));
  }
}

std::vector<std::vector<int>> colex_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(comb::binomial(n, k)));
  for_each_subset_colex(n, k, [&out](const std::vector<int>& s) { out.push_back(s); });
  return out;
}

double mean_over_subsets(const SymmetricKernel& kernel, std::span<const Atom* const> rows,
                         const std::vector<std::vector<int>>& subsets, std::vector<double>& scratch) {
  scratch.resize(subsets.size());
  std::vector<const Atom*> args(static_cast<std::size_t>(kernel.arity));
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (std::size_t i = 0; i < args.size(); ++i) args[i] = rows[static_cast<std::size_t>(subsets[s][i])];
    scratch[s] = kernel(args);
  }
  return pairwise_sum(scratch) / static_cast<double>(subsets.size());
}

// Exact subagged prediction for every dataset in the support of P^n,
// together with its probability.
struct DatasetSweep {
  std::vector<double> weights;
  std::vector<double> predictions;
};

DatasetSweep sweep_datasets(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k) {
  check_kernel(kernel, n, k);
  const int m = static_cast<int>(dist.size());
  const double datasets = std::pow(static_cast<double>(m), n);
  const double evaluations = datasets * comb::binomial(n, k);
  if (evaluations > kBruteForceCap) {
    throw CapExceededError("ensemble brute force: m^n * C(n, k) kernel evaluations", evaluations, kBruteForceCap);
  }
  const auto subsets = colex_subsets(n, k);
  DatasetSweep out;
  out.weights.reserve(static_cast<std::size_t>(datasets));
  out.predictions.reserve(static_cast<std::size_t>(datasets));
  std::vector<const Atom*> rows(static_cast<std::size_t>(n));
  std::vector<double> scratch;
  anova::for_each_tuple(m, n, [&](const std::vector<int>& tuple) {
    double w = 1.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      const auto idx = static_cast<std::size_t>(tuple[i]);
      w *= dist.prob(idx);
      rows[i] = &dist.atom(idx);
    }
    out.weights.push_back(w);
    out.predictions.push_back(mean_over_subsets(kernel, rows, subsets, scratch));
  });
  return out;
}

double weighted_mean(const DatasetSweep& s) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < s.weights.size(); ++i) acc.add(s.weights[i] * s.predictions[i]);
  return acc.value();
}

double weighted_second_moment(const DatasetSweep& s, double center) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < s.weights.size(); ++i) {
    const double d = s.predictions[i] - center;
    acc.add(s.weights[i] * d * d);
  }
  return acc.value();
}

}  // namespace

void SubagPlan::validate() const {
  if (n < 1) throw DomainError("SubagPlan: n must be >= 1");
  if (k < 1 || k > n) throw DomainError("SubagPlan: k must lie in [1, n], got k=" + std::to_string(k));
  if (mode == SubagMode::kExact) {
    const double subsets = comb::binomial(n, k);
    if (subsets > kExactSubsetCap) throw CapExceededError("SubagPlan: C(n, k) subsets", subsets, kExactSubsetCap);
  } else if (ensemble_size < 1) {
    throw DomainError("SubagPlan: Monte Carlo mode needs ensemble_size >= 1");
  }
}

double subag_predict(const SubagPlan& plan, const SymmetricKernel& kernel, std::span<const Atom> data) {
  plan.validate();
  if (static_cast<int>(data.size()) != plan.n) {
    throw DomainError("subag_predict: dataset has " + std::to_string(data.size()) + " rows, plan expects " +
                      std::to_string(plan.n));
  }
  if (kernel.arity != plan.k) throw DomainError("subag_predict: kernel arity differs from k");

  std::vector<const Atom*> rows(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) rows[i] = &data[i];

  if (plan.mode == SubagMode::kExact) {
    std::stable_sort(rows.begin(), rows.end(), [](const Atom* a, const Atom* b) { return canonical_less(*a, *b); });
    std::vector<double> scratch;
    return mean_over_subsets(kernel, rows, colex_subsets(plan.n, plan.k), scratch);
  }

  std::vector<double> member_predictions(static_cast<std::size_t>(plan.ensemble_size));
  std::vector<int> perm(static_cast<std::size_t>(plan.n));
  std::vector<const Atom*> args(static_cast<std::size_t>(plan.k));
  for (int b = 0; b < plan.ensemble_size; ++b) {
    Rng rng(derive_seed(plan.seed, {static_cast<std::uint64_t>(b)}));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < plan.k; ++i) {
      std::uniform_int_distribution<int> pick(i, plan.n - 1);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
      args[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    member_predictions[static_cast<std::size_t>(b)] = kernel(args);
  }
  return pairwise_sum(member_predictions) / static_cast<double>(plan.ensemble_size);
}

double ensemble_variance_bruteforce(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k) {
  const auto sweep = sweep_datasets(kernel, dist, n, k);
  return weighted_second_moment(sweep, weighted_mean(sweep));
}

double ensemble_mse_bruteforce(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k,
                               double f_star) {
  return weighted_second_moment(sweep_datasets(kernel, dist, n, k), f_star);
}

double ensemble_mean_bruteforce(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k) {
  return weighted_mean(sweep_datasets(kernel, dist, n, k));
}

EnsembleVarianceReport verify_exact_identity(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                                             int n, int k) {
  check_kernel(kernel, n, k);
  EnsembleVarianceReport report;
  report.brute_force_variance = ensemble_variance_bruteforce(kernel, dist, n, k);
  const HoeffdingSpectrum spectrum = anova::hoeffding_spectrum(kernel, dist);
  report.per_order_terms = comb::variance_terms(spectrum.zetas, n, k);
  CompensatedSum acc;
  for (double t : report.per_order_terms) acc.add(t);
  report.closed_form_variance = acc.value();
  report.residual = std::abs(report.brute_force_variance - report.closed_form_variance);
  return report;
}

double bias_of_subag(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k,
                     double f_star) {
  check_kernel(kernel, n, k);
  return anova::Decomposition(kernel, dist).theta() - f_star;
}

}  // namespace subag
