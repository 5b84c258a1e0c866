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
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "subag/bench.hpp"
#include "subag/errors.hpp"
#include "subag/random.hpp"

namespace subag::cgas {
namespace {

const std::vector<double> kHigh = {0.1, 0.2, 0.3, 0.4};
const std::vector<double> kLow = {0.6, 0.7, 0.8, 0.9, 0.95};

Dataset sine_data(std::size_t n, double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, noise);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = u(rng);
    y[i] = std::sin(2 * 3.141592653589793 * x[i]) + g(rng);
  }
  return Dataset(n, 1, std::move(x), std::move(y));
}

CgasConfig small_config(LearnerConfig learner, std::uint64_t seed) {
  CgasConfig c;
  c.learner = learner;
  c.search_members = 10;
  c.final_members = 20;
  c.seed = seed;
  return c;
}

TEST(RestrictGrid, Examples) {
  EXPECT_EQ(restrict_grid(3).alphas, kLow);
  EXPECT_EQ(restrict_grid(3).branch, GridBranch::kLowComplexity);
  EXPECT_EQ(restrict_grid(std::nullopt).alphas, kHigh);
  EXPECT_EQ(restrict_grid(11).alphas, kHigh);
  EXPECT_EQ(restrict_grid(10).alphas, kLow);
  EXPECT_EQ(restrict_grid(LearnerConfig{KnnConfig{1}}).alphas, kHigh);
  EXPECT_EQ(restrict_grid(LearnerConfig{KnnConfig{5}}).alphas, kLow);
  EXPECT_EQ(restrict_grid(LearnerConfig{TreeConfig{}}).branch, GridBranch::kHighComplexity);
}

TEST(CgasConfig, DefaultsAndValidation) {
  const CgasConfig c;
  EXPECT_EQ(c.search_members, 30);
  EXPECT_EQ(c.final_members, 100);
  EXPECT_EQ(c.folds, 3);
  EXPECT_EQ(kDefaultAlpha, 0.632);
  CgasConfig bad = c;
  bad.folds = 1;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = c;
  bad.search_members = 0;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(MakeFolds, PartitionData) {
  for (std::size_t n : {3u, 10u, 101u}) {
    for (int k : {2, 3, 10}) {
      if (n < static_cast<std::size_t>(k)) continue;
      const auto folds = make_folds(n, k, 42);
      ASSERT_EQ(folds.size(), static_cast<std::size_t>(k));
      std::vector<int> seen(n, 0);
      for (const auto& f : folds) {
        EXPECT_FALSE(f.empty());
        EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
        EXPECT_LE(f.size(), n / k + 1);
        for (auto i : f) ++seen[i];
      }
      for (int s : seen) EXPECT_EQ(s, 1);
    }
  }
  EXPECT_EQ(make_folds(50, 5, 1), make_folds(50, 5, 1));
  EXPECT_NE(make_folds(50, 5, 1), make_folds(50, 5, 2));
  EXPECT_THROW(make_folds(2, 3, 0), DomainError);
}

TEST(SubsampleSize, FloorsTheProduct) {
  EXPECT_EQ(subsample_size(0.632, 1000), 632u);
  EXPECT_EQ(subsample_size(0.3, 10), 3u);  // 0.3 * 10 is 2.9999999999999996
  EXPECT_EQ(subsample_size(0.95, 19), 18u);
  EXPECT_EQ(subsample_size(1.0, 7), 7u);
}

TEST(SelectAlpha, ConstantTargetPicksLargestGridRatio) {
  const std::size_t n = 60;
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 0.0);
  const Dataset data(n, 1, std::move(x), std::vector<double>(n, 3.0));
  for (const LearnerConfig& l : {LearnerConfig{TreeConfig{3, 1}}, LearnerConfig{TreeConfig{}}}) {
    const auto r = select_alpha(small_config(l, 5), data);
    EXPECT_EQ(r.alpha_star, r.grid.alphas.back());
    for (double m : r.cv_means) EXPECT_EQ(m, 0.0);
  }
}

TEST(SelectAlpha, TableIsConsistent) {
  const auto data = sine_data(150, 0.3, 1);
  const auto r = select_alpha(small_config(TreeConfig{}, 3), data);
  ASSERT_EQ(r.cv_table.size(), 4u);
  ASSERT_EQ(r.cv_means.size(), 4u);
  EXPECT_FALSE(r.ensemble.has_value());
  for (std::size_t a = 0; a < 4; ++a) {
    ASSERT_EQ(r.cv_table[a].size(), 3u);
    double s = 0.0;
    for (double v : r.cv_table[a]) s += v;
    EXPECT_NEAR(r.cv_means[a], s / 3, 1e-14);
  }
  const auto best = std::min_element(r.cv_means.begin(), r.cv_means.end());
  EXPECT_EQ(r.cv_means[static_cast<std::size_t>(std::find(r.grid.alphas.begin(), r.grid.alphas.end(), r.alpha_star) -
                                                r.grid.alphas.begin())],
            *best);
}

TEST(RunCgas, Deterministic) {
  const auto data = sine_data(120, 0.5, 7);
  const auto cfg = small_config(TreeConfig{4, 1}, 11);
  const auto a = run_cgas(cfg, data);
  const auto b = run_cgas(cfg, data);
  EXPECT_EQ(a.alpha_star, b.alpha_star);
  EXPECT_EQ(a.cv_table, b.cv_table);
  ASSERT_TRUE(a.ensemble && b.ensemble);
  EXPECT_EQ(a.ensemble->size(), 20u);
  EXPECT_EQ(a.ensemble->predict(data), b.ensemble->predict(data));
}

TEST(RunCgas, AlphaStaysInRegimeGrid) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto data = sine_data(90, 0.4, 100 + s);
    EXPECT_TRUE(std::count(kHigh.begin(), kHigh.end(), select_alpha(small_config(TreeConfig{}, s), data).alpha_star));
    EXPECT_TRUE(std::count(kLow.begin(), kLow.end(), select_alpha(small_config(TreeConfig{2, 1}, s), data).alpha_star));
  }
}

TEST(RunCgas, NoisyFriedmanWithDeepTreesPicksSmallRatio) {
  auto data = bench::make_friedman1(400, 1.0, 3);
  data = bench::inject_label_noise(data, 1.5, 4);
  const auto r = select_alpha(small_config(TreeConfig{}, 2), data);
  EXPECT_LT(r.alpha_star, kDefaultAlpha);
  EXPECT_TRUE(std::count(kHigh.begin(), kHigh.end(), r.alpha_star));
}

TEST(RunCgas, LowNoiseSmoothDataWithShallowTreesPrefersLargeRatios) {
  int large = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    const auto data = sine_data(400, 0.01, 500 + static_cast<std::uint64_t>(s));
    const double a = select_alpha(small_config(TreeConfig{3, 1}, static_cast<std::uint64_t>(s)), data).alpha_star;
    large += a >= 0.9 ? 1 : 0;
  }
  EXPECT_GT(2 * large, seeds) << large << " of " << seeds << " seeds chose 0.9 or 0.95";
}

TEST(TrainFinal, FullRatioGivesIdenticalMembers) {
  const auto data = sine_data(50, 0.2, 9);
  const auto cfg = small_config(TreeConfig{}, 1);
  const auto e = train_final(cfg, data, 1.0);
  const auto single = fit(cfg.learner, data);
  for (double x = 0.0; x <= 1.0; x += 0.05) {
    const std::vector<double> p = {x};
    EXPECT_NEAR(e.predict(p), predict(single, p), 1e-15);
    for (const auto& m : e.members()) EXPECT_EQ(predict(m, p), predict(single, p));
  }
}

TEST(TrainFinal, SingleMemberIsOneSubsampledLearner) {
  const auto data = sine_data(80, 0.2, 10);
  const auto e = train_ensemble(TreeConfig{}, data, 0.25, 1, Sampling::kWithoutReplacement, 4);
  ASSERT_EQ(e.size(), 1u);
  // An interpolating tree on 20 distinct rows matches exactly 20 training targets.
  int hits = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) hits += e.predict(data.row(i)) == data.target(i) ? 1 : 0;
  EXPECT_EQ(hits, 20);
}

TEST(TrainFinal, RejectsEmptySubsample) {
  const auto data = sine_data(5, 0.2, 1);
  EXPECT_THROW(train_ensemble(TreeConfig{}, data, 0.1, 3, Sampling::kWithoutReplacement, 0), DomainError);
  EXPECT_THROW(train_ensemble(TreeConfig{}, data, 1.5, 3, Sampling::kWithoutReplacement, 0), DomainError);
}

TEST(RfStar, BootstrapMembersRepeatRows) {
  const auto data = sine_data(60, 0.2, 12);
  const auto cfg = small_config(TreeConfig{}, 6);
  const auto boot = rf_star(cfg, data, 1.0);
  const auto plain = train_final(cfg, data, 1.0);
  // A bootstrap draw of size n misses about a third of the rows.
  int differ = 0;
  for (const auto& m : boot.members()) {
    for (std::size_t i = 0; i < data.rows(); ++i) differ += predict(m, data.row(i)) != data.target(i) ? 1 : 0;
  }
  EXPECT_GT(differ, 0);
  EXPECT_NE(boot.predict(data), plain.predict(data));
}

TEST(RfStar, FullRatioMatchesPlainBootstrapInDistribution) {
  const auto data = sine_data(80, 0.3, 13);
  const std::vector<double> probe = {0.37};
  std::vector<double> a, b;
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto cfg = small_config(TreeConfig{}, s);
    cfg.final_members = 5;
    a.push_back(rf_star(cfg, data, 1.0).predict(probe));
    b.push_back(train_ensemble(TreeConfig{}, data, 1.0, 5, Sampling::kBootstrap, 1000 + s).predict(probe));
  }
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / 40;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / 40;
  double va = 0.0, vb = 0.0;
  for (double v : a) va += (v - ma) * (v - ma);
  for (double v : b) vb += (v - mb) * (v - mb);
  const double se = std::sqrt(va / 39 / 40 + vb / 39 / 40);
  EXPECT_LT(std::abs(ma - mb), 4 * se + 1e-12);
  EXPECT_NEAR(std::sqrt(va / vb), 1.0, 0.6);
}

TEST(Metrics, MseAndMae) {
  const std::vector<double> p = {1, 2, 3}, y = {1, 0, 6};
  EXPECT_DOUBLE_EQ(mse(p, y), 13.0 / 3);
  EXPECT_DOUBLE_EQ(mae(p, y), 5.0 / 3);
  EXPECT_THROW(mse(p, std::vector<double>{1}), DomainError);
}

}  // namespace
}  // namespace subag::cgas
