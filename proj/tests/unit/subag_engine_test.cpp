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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subag/anova.hpp"
#include "subag/combinatorics.hpp"
#include "subag/errors.hpp"

namespace subag {
namespace {

std::vector<Atom> scalars(std::initializer_list<double> v) {
  std::vector<Atom> out;
  for (double x : v) out.push_back(Atom::scalar(x));
  return out;
}

SubagPlan exact_plan(int n, int k) { return SubagPlan{n, k, SubagMode::kExact, 0, 0}; }

// Mean of h over every k-subset of data, by bitmask.
double subset_average(const SymmetricKernel& h, const std::vector<Atom>& data) {
  const int n = static_cast<int>(data.size());
  double total = 0.0;
  int count = 0;
  for (auto mask : testing::subsets(n, h.arity)) {
    std::vector<const Atom*> pts;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1U) pts.push_back(&data[static_cast<std::size_t>(i)]);
    }
    total += h(pts);
    ++count;
  }
  return total / count;
}

// Variance over P^n of subset_average, by enumerating every dataset.
double oracle_variance(const SymmetricKernel& h, const DiscreteDistribution& d, int n) {
  const int m = static_cast<int>(d.size());
  double s1 = 0.0, s2 = 0.0;
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<Atom> data;
    double w = 1.0;
    for (int i : t) {
      data.push_back(d.atom(static_cast<std::size_t>(i)));
      w *= d.prob(static_cast<std::size_t>(i));
    }
    const double f = subset_average(h, data);
    s1 += w * f;
    s2 += w * f * f;
    int pos = 0;
    while (pos < n && ++t[pos] == m) t[pos++] = 0;
    if (pos == n) break;
  }
  return s2 - s1 * s1;
}

DiscreteDistribution skewed3() {
  return DiscreteDistribution({Atom::scalar(-1.0), Atom::scalar(0.5), Atom::scalar(2.0)}, {0.2, 0.5, 0.3});
}

TEST(SubagPredict, Examples) {
  const auto data = scalars({1, 1, -1, -1});
  EXPECT_NEAR(subag_predict(exact_plan(4, 2), kernels::product(2), data), -1.0 / 3.0, 1e-15);

  const auto k_eq_n = kernels::random_symmetric(4, 11);
  std::vector<const Atom*> all;
  for (const auto& a : data) all.push_back(&a);
  EXPECT_EQ(subag_predict(exact_plan(4, 4), k_eq_n, data), k_eq_n(all));

  const auto flat = kernels::constant(3, 0.42);
  const auto six = scalars({1, 2, 3, 4, 5, 6});
  EXPECT_DOUBLE_EQ(subag_predict(exact_plan(6, 3), flat, six), 0.42);
  EXPECT_DOUBLE_EQ(subag_predict(SubagPlan{6, 3, SubagMode::kMonteCarlo, 50, 9}, flat, six), 0.42);
}

TEST(SubagPredict, ExactMatchesBitmaskAverage) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> data;
    for (int i = 0; i < 9; ++i) data.push_back(Atom::scalar(g(rng)));
    for (int k = 1; k <= 4; ++k) {
      const auto h = kernels::pairwise_max(k);
      EXPECT_NEAR(subag_predict(exact_plan(9, k), h, data), subset_average(h, data), 1e-13);
    }
  }
}

TEST(SubagPredict, PermutationInvariantBitForBit) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<Atom> data;
  for (int i = 0; i < 12; ++i) data.push_back(Atom::scalar(g(rng)));
  for (const auto& h : {kernels::mean(4), kernels::random_symmetric(4, 2), kernels::product(4)}) {
    const double ref = subag_predict(exact_plan(12, 4), h, data);
    for (int p = 0; p < 25; ++p) {
      auto shuffled = data;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      EXPECT_EQ(subag_predict(exact_plan(12, 4), h, shuffled), ref);
    }
  }
}

TEST(SubagPredict, MonteCarloIsDeterministicPerSeed) {
  const auto data = scalars({0.3, -1.2, 2.2, 0.0, 1.1, -0.4, 0.9, 1.7});
  const auto h = kernels::random_symmetric(3, 4);
  const SubagPlan p{8, 3, SubagMode::kMonteCarlo, 200, 77};
  EXPECT_EQ(subag_predict(p, h, data), subag_predict(p, h, data));
  SubagPlan q = p;
  q.seed = 78;
  EXPECT_NE(subag_predict(p, h, data), subag_predict(q, h, data));
}

TEST(SubagPredict, MonteCarloErrorShrinksAtRootBRate) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  std::vector<Atom> data;
  for (int i = 0; i < 16; ++i) data.push_back(Atom::scalar(g(rng)));
  const auto h = kernels::pairwise_max(4);
  const double exact = subag_predict(exact_plan(16, 4), h, data);
  const std::vector<int> sizes = {100, 1000, 10000};
  std::vector<double> lx, ly;
  for (int b : sizes) {
    double sq = 0.0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
      const double e = subag_predict(SubagPlan{16, 4, SubagMode::kMonteCarlo, b, static_cast<std::uint64_t>(s)}, h, data) - exact;
      sq += e * e;
    }
    lx.push_back(std::log(b));
    ly.push_back(0.5 * std::log(sq / seeds));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / 3;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / 3;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, -0.5, 0.15);
}

TEST(SubagPlan, Validation) {
  EXPECT_THROW(exact_plan(4, 5).validate(), DomainError);
  EXPECT_THROW(exact_plan(4, 0).validate(), DomainError);
  EXPECT_THROW(exact_plan(40, 20).validate(), CapExceededError);
  EXPECT_THROW((SubagPlan{8, 3, SubagMode::kMonteCarlo, 0, 1}.validate()), DomainError);
  EXPECT_NO_THROW((SubagPlan{40, 20, SubagMode::kMonteCarlo, 10, 1}.validate()));
  const auto data = scalars({1, 2, 3});
  EXPECT_THROW(subag_predict(exact_plan(4, 2), kernels::mean(2), data), DomainError);
  EXPECT_THROW(subag_predict(exact_plan(3, 2), kernels::mean(3), data), DomainError);
}

TEST(EnsembleVariance, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  EXPECT_NEAR(ensemble_variance_bruteforce(kernels::product(2), rad, 4, 2), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(ensemble_variance_bruteforce(kernels::constant(2, 5.0), rad, 4, 2), 0.0, 1e-15);
  const auto h = kernels::random_symmetric(3, 21);
  const auto d = skewed3();
  EXPECT_NEAR(ensemble_variance_bruteforce(h, d, 3, 3), anova::base_variance(h, d).total, 1e-13);
}

TEST(EnsembleVariance, MatchesIndependentOracle) {
  const auto d = skewed3();
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k <= std::min(3, n); ++k) {
      const auto h = kernels::random_symmetric(k, static_cast<std::uint64_t>(10 * n + k));
      EXPECT_NEAR(ensemble_variance_bruteforce(h, d, n, k), oracle_variance(h, d, n), 1e-12);
    }
  }
}

TEST(VerifyExactIdentity, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  const auto r = verify_exact_identity(kernels::product(2), rad, 4, 2);
  EXPECT_NEAR(r.brute_force_variance, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.closed_form_variance, 1.0 / 6.0, 1e-15);
  EXPECT_LE(r.residual, 1e-12);

  const auto d = skewed3();
  const double var_g = anova::hoeffding_spectrum(kernels::additive(1), d).zeta(1);
  for (auto [n, k] : {std::pair{5, 2}, std::pair{7, 3}, std::pair{6, 1}}) {
    const auto a = verify_exact_identity(kernels::additive(k), d, n, k);
    EXPECT_NEAR(a.closed_form_variance, static_cast<double>(k) / n * k * var_g, 1e-12);
    EXPECT_NEAR(a.brute_force_variance, a.closed_form_variance, 1e-10);
  }

  const DiscreteDistribution point({Atom::scalar(2.0)}, {1.0});
  const auto z = verify_exact_identity(kernels::random_symmetric(3, 1), point, 5, 3);
  EXPECT_EQ(z.brute_force_variance, 0.0);
  EXPECT_EQ(z.closed_form_variance, 0.0);
}

TEST(VerifyExactIdentity, HoldsOnFullGrid) {
  const auto d = skewed3();
  for (int n = 3; n <= 8; ++n) {
    for (int k = 1; k <= std::min(4, n); ++k) {
      for (const auto& h : {kernels::constant(k, 1.5), kernels::additive(k), kernels::product(k),
                            kernels::pairwise_max(k), kernels::random_symmetric(k, 99)}) {
        const auto r = verify_exact_identity(h, d, n, k);
        EXPECT_LE(r.residual, 1e-10) << h.label << " n=" << n << " k=" << k;
        double s = 0.0;
        for (double t : r.per_order_terms) s += t;
        EXPECT_NEAR(s, r.closed_form_variance, 1e-14);
      }
    }
  }
}

TEST(EnsembleMean, SubaggingLeavesMeanUnchanged) {
  const auto d = skewed3();
  for (int n = 3; n <= 6; ++n) {
    const auto h = kernels::random_symmetric(3, 8);
    const double theta = anova::hoeffding_spectrum(h, d).theta;
    EXPECT_NEAR(ensemble_mean_bruteforce(h, d, n, 3), theta, 1e-13);
    const double mse = ensemble_mse_bruteforce(h, d, n, 3, 0.25);
    EXPECT_NEAR(mse, ensemble_variance_bruteforce(h, d, n, 3) + (theta - 0.25) * (theta - 0.25), 1e-12);
  }
}

TEST(BiasOfSubag, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  const auto d = skewed3();
  const auto h = kernels::random_symmetric(2, 4);
  const double theta = anova::hoeffding_spectrum(h, d).theta;
  EXPECT_NEAR(bias_of_subag(h, d, 5, 2, theta), 0.0, 1e-15);
  EXPECT_EQ(bias_of_subag(kernels::constant(2, 0.7), rad, 4, 2, 0.0), 0.7);
  EXPECT_EQ(bias_of_subag(kernels::product(2), rad, 4, 2, 0.0), 0.0);
}

TEST(BiasOfSubag, IndependentOfN) {
  const auto d = skewed3();
  for (int k = 1; k <= 3; ++k) {
    const auto h = kernels::pairwise_max(k);
    const double ref = bias_of_subag(h, d, k, k, 0.1);
    for (int n : {k + 1, k + 5}) EXPECT_EQ(bias_of_subag(h, d, n, k, 0.1), ref);
  }
}

TEST(ForEachSubsetColex, VisitsEverySubsetOnce) {
  for (int n = 1; n <= 8; ++n) {
    for (int k = 1; k <= n; ++k) {
      std::vector<std::vector<int>> seen;
      for_each_subset_colex(n, k, [&](const std::vector<int>& c) { seen.push_back(c); });
      EXPECT_EQ(seen.size(), testing::pascal(n, k));
      auto sorted = seen;
      std::sort(sorted.begin(), sorted.end());
      EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
    }
  }
}

}  // namespace
}  // namespace subag
