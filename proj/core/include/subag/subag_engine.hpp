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

#ifndef SUBAG_SUBAG_ENGINE_HPP_
#define SUBAG_SUBAG_ENGINE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "subag/distribution.hpp"
#include "subag/kernel.hpp"

namespace subag {

enum class SubagMode { kExact, kMonteCarlo };

struct SubagPlan {
  int n = 0;
  int k = 0;
  SubagMode mode = SubagMode::kExact;
  int ensemble_size = 0;  // Monte Carlo only
  std::uint64_t seed = 0;

  // Throws DomainError / CapExceededError when the plan is unusable.
  void validate() const;
};

inline constexpr double kExactSubsetCap = 1e6;
inline constexpr double kBruteForceCap = 1e7;
inline constexpr double kIdentityTolerance = 1e-10;

struct EnsembleVarianceReport {
  double brute_force_variance = 0.0;
  double closed_form_variance = 0.0;
  std::vector<double> per_order_terms;  // gamma_c C(k, c) zeta_c, c = 1..k
  double residual = 0.0;
};

// Calls fn(indices) for every k-subset of {0..n-1} in colexicographic order.
template <class Fn>
void for_each_subset_colex(int n, int k, Fn&& fn) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  if (k > n) return;
  while (true) {
    fn(static_cast<const std::vector<int>&>(c));
    int j = 0;
    while (j < k && c[static_cast<std::size_t>(j)] + 1 == (j + 1 < k ? c[static_cast<std::size_t>(j + 1)] : n)) ++j;
    if (j == k) return;
    ++c[static_cast<std::size_t>(j)];
    for (int i = 0; i < j; ++i) c[static_cast<std::size_t>(i)] = i;
  }
}

// The subagged prediction over `data` (n rows). Exact mode averages all
// C(n, k) subsets, visiting rows in canonical order, so the result is
// bit-identical under any row permutation. Monte Carlo mode averages
// `ensemble_size` subsets, member b drawn by a partial Fisher-Yates shuffle
// on its own stream derive_seed(seed, {b}).
double subag_predict(const SubagPlan& plan, const SymmetricKernel& kernel, std::span<const Atom> data);

// Var over P^n of the exact subagged prediction, by enumerating all m^n
// datasets.
double ensemble_variance_bruteforce(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k);

// E over P^n of (F_{n,k} - f_star)^2 by the same enumeration.
double ensemble_mse_bruteforce(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k,
                               double f_star);

// E over P^n of F_{n,k}, by enumeration. Used to check that subagging leaves
// the mean of the base learner unchanged.
double ensemble_mean_bruteforce(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k);

EnsembleVarianceReport verify_exact_identity(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                                             int n, int k);

// theta_k - f_star, where theta_k is the mean of the k-sample base learner.
double bias_of_subag(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int n, int k,
                     double f_star);

}  // namespace subag

#endif  // SUBAG_SUBAG_ENGINE_HPP_
