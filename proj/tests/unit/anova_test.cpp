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

#include "subag/anova.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subag/combinatorics.hpp"
#include "subag/errors.hpp"

namespace subag::anova {
namespace {

using testing::conditional_mean;
using testing::direct_variance;
using testing::recursive_projection;

DiscreteDistribution skewed3() {
  return DiscreteDistribution({Atom::scalar(-1.0), Atom::scalar(0.5), Atom::scalar(2.0)}, {0.2, 0.5, 0.3});
}

DiscreteDistribution skewed4() {
  return DiscreteDistribution({Atom::scalar(-2.0), Atom::scalar(-0.25), Atom::scalar(1.0), Atom::scalar(3.0)},
                              {0.1, 0.4, 0.3, 0.2});
}

std::vector<SymmetricKernel> family(int k) {
  std::vector<SymmetricKernel> out = {kernels::constant(k, 3.0), kernels::additive(k), kernels::product(k),
                                      kernels::pairwise_max(k), kernels::mean(k)};
  for (std::uint64_t s = 1; s <= 4; ++s) out.push_back(kernels::random_symmetric(k, s));
  return out;
}

// Every length-c index tuple over m atoms.
std::vector<std::vector<int>> tuples(int m, int c) {
  std::vector<std::vector<int>> out;
  for_each_tuple(m, c, [&](const std::vector<int>& t) { out.push_back(t); });
  return out;
}

TEST(MarginalExpectation, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  const int plus = rad.atom(0).target > 0 ? 0 : 1;
  const std::vector<int> fix = {plus};
  EXPECT_EQ(marginal_expectation(kernels::constant(2, 3.0), rad, fix), 3.0);
  EXPECT_EQ(marginal_expectation(kernels::additive(2), rad, fix), 1.0);
  EXPECT_EQ(marginal_expectation(kernels::product(2), rad, fix), 0.0);
  EXPECT_EQ(marginal_expectation(kernels::product(2), rad, {}), 0.0);
}

TEST(CanonicalProjection, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  const int plus = rad.atom(0).target > 0 ? 0 : 1;
  const auto prod = kernels::product(2);
  EXPECT_EQ(canonical_projection(prod, rad, std::vector<int>{plus}), 0.0);
  EXPECT_EQ(canonical_projection(prod, rad, std::vector<int>{plus, plus}), 1.0);
  const auto flat = kernels::constant(3, 2.5);
  for (int c = 1; c <= 3; ++c) {
    for (const auto& t : tuples(2, c)) EXPECT_EQ(canonical_projection(flat, rad, t), 0.0);
  }
}

TEST(CanonicalProjection, MatchesRecursiveDefinition) {
  for (const auto& dist : {DiscreteDistribution::rademacher(), skewed3(), skewed4()}) {
    const int m = static_cast<int>(dist.size());
    for (int k = 1; k <= 4; ++k) {
      for (const auto& h : family(k)) {
        Decomposition dec(h, dist);
        for (int c = 1; c <= k; ++c) {
          for (const auto& t : tuples(m, c)) {
            EXPECT_NEAR(dec.canonical_projection(t), recursive_projection(h, dist, t), 1e-12)
                << h.label << " k=" << k << " c=" << c;
          }
        }
      }
    }
  }
}

TEST(MarginalExpectation, MatchesDirectSum) {
  const auto dist = skewed3();
  for (const auto& h : family(3)) {
    for (int j = 0; j <= 3; ++j) {
      for (const auto& t : tuples(3, j)) {
        EXPECT_NEAR(marginal_expectation(h, dist, t), conditional_mean(h, dist, t), 1e-13);
      }
    }
  }
}

TEST(HoeffdingSpectrum, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  const auto prod = hoeffding_spectrum(kernels::product(2), rad);
  EXPECT_EQ(prod.theta, 0.0);
  ASSERT_EQ(prod.order(), 2);
  EXPECT_NEAR(prod.zeta(1), 0.0, 1e-15);
  EXPECT_NEAR(prod.zeta(2), 1.0, 1e-15);

  const auto add = hoeffding_spectrum(kernels::additive(3), skewed3());
  const double mu = -0.2 + 0.25 + 0.6;
  const double var_g = 0.2 * 1.0 + 0.5 * 0.25 + 0.3 * 4.0 - mu * mu;
  EXPECT_NEAR(add.zeta(1), var_g, 1e-14);
  EXPECT_NEAR(add.zeta(2), 0.0, 1e-14);
  EXPECT_NEAR(add.zeta(3), 0.0, 1e-14);

  for (double z : hoeffding_spectrum(kernels::constant(4, -1.0), skewed4()).zetas) EXPECT_NEAR(z, 0.0, 1e-30);
}

TEST(HoeffdingSpectrum, ZetaIsSecondMomentOfProjection) {
  const auto dist = skewed4();
  for (const auto& h : family(3)) {
    const auto s = hoeffding_spectrum(h, dist);
    for (int c = 1; c <= 3; ++c) {
      double z = 0.0;
      for (const auto& t : tuples(4, c)) {
        double w = 1.0;
        for (int i : t) w *= dist.prob(static_cast<std::size_t>(i));
        const double v = recursive_projection(h, dist, t);
        z += w * v * v;
      }
      EXPECT_NEAR(s.zeta(c), z, 1e-12) << h.label;
      EXPECT_GE(s.zeta(c), 0.0);
    }
  }
}

TEST(Degeneracy, HoldsAcrossFamily) {
  for (const auto& dist : {DiscreteDistribution::rademacher(), skewed3(), skewed4()}) {
    for (int k = 1; k <= 4; ++k) {
      for (const auto& h : family(k)) {
        for (int c = 1; c <= k; ++c) EXPECT_LE(check_degeneracy(h, dist, c), 1e-10) << h.label;
      }
    }
  }
  EXPECT_EQ(check_degeneracy(kernels::product(2), DiscreteDistribution::rademacher(), 2), 0.0);
}

TEST(Orthogonality, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  const std::vector<int> a = {0}, b = {1}, ab = {0, 1}, ac = {0, 2};
  EXPECT_LE(check_orthogonality(kernels::random_symmetric(3, 7), skewed3(), a, b), 1e-10);
  EXPECT_LE(check_orthogonality(kernels::product(2), rad, a, ab), 1e-15);
  EXPECT_LE(check_orthogonality(kernels::random_symmetric(3, 9), skewed4(), ab, ac), 1e-10);
}

TEST(Orthogonality, AllSubsetPairs) {
  const auto dist = skewed3();
  for (int k = 1; k <= 4; ++k) {
    for (const auto& h : family(k)) {
      Decomposition dec(h, dist);
      EXPECT_LE(dec.max_orthogonality_residual(), 1e-10) << h.label << " k=" << k;
    }
  }
}

TEST(BaseVariance, Examples) {
  const auto rad = DiscreteDistribution::rademacher();
  const auto prod = base_variance(kernels::product(2), rad);
  EXPECT_NEAR(prod.total, 1.0, 1e-15);
  EXPECT_NEAR(prod.contributions[0], 0.0, 1e-15);
  EXPECT_NEAR(prod.contributions[1], 1.0, 1e-15);
  const auto add = base_variance(kernels::additive(2), rad);
  EXPECT_NEAR(add.total, 2.0, 1e-15);
  EXPECT_NEAR(add.contributions[0], 2.0, 1e-15);
  EXPECT_NEAR(add.contributions[1], 0.0, 1e-15);
  EXPECT_EQ(base_variance(kernels::constant(3, 1.0), skewed3()).total, 0.0);
}

TEST(BaseVariance, IdentityAgainstDirectVariance) {
  for (const auto& dist : {skewed3(), skewed4()}) {
    for (int k = 1; k <= 4; ++k) {
      for (const auto& h : family(k)) {
        const auto r = base_variance(h, dist);
        EXPECT_NEAR(r.total, direct_variance(h, dist), 1e-12);
        EXPECT_LE(r.residual, 1e-10);
        const auto s = hoeffding_spectrum(h, dist);
        for (int c = 1; c <= k; ++c) {
          EXPECT_NEAR(r.contributions[static_cast<std::size_t>(c - 1)], comb::binomial(k, c) * s.zeta(c), 1e-15);
        }
      }
    }
  }
}

TEST(Residuals, SummaryIsSmall) {
  const auto h = kernels::pairwise_max(4);
  const auto dist = skewed4();
  Decomposition dec(h, dist);
  const auto r = dec.residuals();
  EXPECT_LE(r.degeneracy, 1e-10);
  EXPECT_LE(r.orthogonality, 1e-10);
  EXPECT_LE(r.base_variance, 1e-10);
}

TEST(Decomposition, CapIsEnforcedWithRequiredCount) {
  const auto h = kernels::random_symmetric(6, 3);
  const auto dist = skewed4();
  Decomposition dec(h, dist, 100.0);
  EXPECT_GT(dec.spectrum_evaluation_count(), 100.0);
  try {
    dec.spectrum();
    FAIL() << "expected CapExceededError";
  } catch (const CapExceededError& e) {
    EXPECT_EQ(e.cap(), 100.0);
    EXPECT_GE(e.required(), 4096.0);
  }
  Decomposition roomy(h, dist);
  EXPECT_NO_THROW(roomy.spectrum());
}

TEST(Decomposition, MemoReusesEvaluations) {
  const auto h = kernels::random_symmetric(3, 5);
  const auto dist = skewed3();
  Decomposition dec(h, dist);
  dec.spectrum();
  const auto first = dec.evaluations();
  dec.spectrum();
  EXPECT_EQ(dec.evaluations(), first);
}

TEST(HoeffdingSpectrum, SmallNegativeValuesAreClamped) {
  // Additive kernels leave zeta_{c >= 2} at pure cancellation noise.
  const DiscreteDistribution dist({Atom::scalar(0.1), Atom::scalar(0.7), Atom::scalar(1.3)}, {0.3, 0.3, 0.4});
  for (int k = 2; k <= 4; ++k) {
    for (double z : hoeffding_spectrum(kernels::additive(k), dist).zetas) EXPECT_GE(z, 0.0);
  }
}

}  // namespace
}  // namespace subag::anova
