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

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "subag/combinatorics.hpp"
#include "subag/errors.hpp"
#include "subag/numeric.hpp"

namespace subag::anova {
namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

std::vector<int> validated_index_set(std::span<const int> set, int k, const char* name) {
  std::vector<int> s(set.begin(), set.end());
  std::sort(s.begin(), s.end());
  if (s.empty()) throw DomainError(std::string("check_orthogonality: ") + name + " is empty");
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw DomainError(std::string("check_orthogonality: ") + name + " has repeated indices");
  }
  if (s.front() < 0 || s.back() >= k) {
    throw DomainError(std::string("check_orthogonality: ") + name + " is not a subset of [0, k)");
  }
  return s;
}

}  // namespace

Decomposition::Decomposition(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                             double evaluation_cap)
    : kernel_(kernel), dist_(dist), cap_(evaluation_cap) {
  if (kernel_.arity < 1) throw DomainError("Decomposition: kernel arity must be >= 1");
  if (!kernel_.eval) throw DomainError("Decomposition: kernel has no evaluator");
}

void Decomposition::require_budget(double count, const char* what) const {
  if (count > cap_) throw CapExceededError(std::string("anova: ") + what, count, cap_);
}

double Decomposition::spectrum_evaluation_count() const {
  const int k = kernel_.arity;
  const double m = static_cast<double>(dist_.size());
  double total = 0.0;
  for (int j = 0; j <= k; ++j) {
    // Distinct multisets of j fixed atoms, each integrating out k - j slots.
    total += comb::binomial(static_cast<int>(dist_.size()) + j - 1, j) * ipow(m, k - j);
  }
  return total;
}

double Decomposition::expectation_uncached(const std::vector<int>& fixed) {
  const int k = kernel_.arity;
  const int free_slots = k - static_cast<int>(fixed.size());
  const int m = static_cast<int>(dist_.size());
  require_budget(ipow(m, free_slots), "marginal expectation");

  std::vector<const Atom*> args(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < fixed.size(); ++i) args[i] = &dist_.atom(static_cast<std::size_t>(fixed[i]));

  CompensatedSum acc;
  for_each_tuple(m, free_slots, [&](const std::vector<int>& rest) {
    double w = 1.0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const auto idx = static_cast<std::size_t>(rest[i]);
      w *= dist_.prob(idx);
      args[fixed.size() + i] = &dist_.atom(idx);
    }
    acc.add(w * kernel_(args));
  });
  evaluations_ += static_cast<std::uint64_t>(ipow(m, free_slots));
  return acc.value();
}

double Decomposition::marginal_expectation(std::span<const int> fixed) {
  const int m = static_cast<int>(dist_.size());
  if (static_cast<int>(fixed.size()) > kernel_.arity) {
    throw DomainError("marginal_expectation: more fixed points than the kernel arity");
  }
  std::vector<int> key(fixed.begin(), fixed.end());
  for (int idx : key) {
    if (idx < 0 || idx >= m) throw DomainError("marginal_expectation: support index out of range");
  }
  std::sort(key.begin(), key.end());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const double value = expectation_uncached(key);
  memo_.emplace(std::move(key), value);
  return value;
}

double Decomposition::canonical_projection(std::span<const int> points) {
  const int c = static_cast<int>(points.size());
  if (c > kMaxMobiusOrder) {
    throw CapExceededError("canonical_projection: Mobius order", std::ldexp(1.0, c), std::ldexp(1.0, kMaxMobiusOrder));
  }
  if (c > kernel_.arity) throw DomainError("canonical_projection: order exceeds kernel arity");
  // Mobius inversion over the subsets J of the c points.
  CompensatedSum acc;
  std::vector<int> subset;
  subset.reserve(static_cast<std::size_t>(c));
  for (unsigned mask = 0; mask < (1u << c); ++mask) {
    subset.clear();
    for (int i = 0; i < c; ++i) {
      if (mask & (1u << i)) subset.push_back(points[static_cast<std::size_t>(i)]);
    }
    const bool negative = ((c - static_cast<int>(subset.size())) % 2) != 0;
    const double e = marginal_expectation(subset);
    acc.add(negative ? -e : e);
  }
  return acc.value();
}

HoeffdingSpectrum Decomposition::spectrum() {
  require_budget(spectrum_evaluation_count(), "hoeffding spectrum");
  const int k = kernel_.arity;
  const int m = static_cast<int>(dist_.size());
  HoeffdingSpectrum out;
  out.theta = theta();
  out.zetas.resize(static_cast<std::size_t>(k));
  for (int c = 1; c <= k; ++c) {
    if (c > kMaxMobiusOrder) {
      throw CapExceededError("hoeffding spectrum: Mobius order", std::ldexp(1.0, c),
                             std::ldexp(1.0, kMaxMobiusOrder));
    }
    CompensatedSum acc;
    for_each_tuple(m, c, [&](const std::vector<int>& tuple) {
      double w = 1.0;
      for (int idx : tuple) w *= dist_.prob(static_cast<std::size_t>(idx));
      const double h = canonical_projection(tuple);
      acc.add(w * h * h);
    });
    double zeta = acc.value();
    if (zeta < 0.0) {
      if (zeta < -kClampTolerance) {
        throw DomainError("hoeffding spectrum: zeta_" + std::to_string(c) + " is negative beyond tolerance");
      }
      spdlog::warn("hoeffding spectrum: zeta_{} = {:.3e} clamped to 0", c, zeta);
      zeta = 0.0;
    }
    out.zetas[static_cast<std::size_t>(c - 1)] = zeta;
  }
  return out;
}

double Decomposition::check_degeneracy(int c) {
  const int k = kernel_.arity;
  if (c < 1 || c > k) throw DomainError("check_degeneracy: c must lie in [1, k]");
  const int m = static_cast<int>(dist_.size());
  double worst = 0.0;
  std::vector<int> point(static_cast<std::size_t>(c));
  for_each_tuple(m, c - 1, [&](const std::vector<int>& others) {
    for (int slot = 0; slot < c; ++slot) {
      CompensatedSum acc;
      for (int z = 0; z < m; ++z) {
        int o = 0;
        for (int i = 0; i < c; ++i) point[static_cast<std::size_t>(i)] = (i == slot) ? z : others[static_cast<std::size_t>(o++)];
        acc.add(dist_.prob(static_cast<std::size_t>(z)) * canonical_projection(point));
      }
      worst = std::max(worst, std::abs(acc.value()));
    }
  });
  return worst;
}

double Decomposition::check_orthogonality(std::span<const int> c1, std::span<const int> c2) {
  const int k = kernel_.arity;
  const auto s1 = validated_index_set(c1, k, "C1");
  const auto s2 = validated_index_set(c2, k, "C2");
  if (s1 == s2) throw DomainError("check_orthogonality: C1 and C2 must differ");

  std::vector<int> uni;
  std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(uni));
  const auto position = [&uni](int idx) {
    return static_cast<std::size_t>(std::lower_bound(uni.begin(), uni.end(), idx) - uni.begin());
  };
  const int m = static_cast<int>(dist_.size());
  require_budget(ipow(m, static_cast<int>(uni.size())), "orthogonality enumeration");

  std::vector<int> p1(s1.size()), p2(s2.size());
  CompensatedSum acc;
  for_each_tuple(m, static_cast<int>(uni.size()), [&](const std::vector<int>& assign) {
    double w = 1.0;
    for (int idx : assign) w *= dist_.prob(static_cast<std::size_t>(idx));
    for (std::size_t i = 0; i < s1.size(); ++i) p1[i] = assign[position(s1[i])];
    for (std::size_t i = 0; i < s2.size(); ++i) p2[i] = assign[position(s2[i])];
    acc.add(w * canonical_projection(p1) * canonical_projection(p2));
  });
  return std::abs(acc.value());
}

double Decomposition::max_orthogonality_residual() {
  const int k = kernel_.arity;
  double worst = 0.0;
  const auto to_set = [](unsigned mask) {
    std::vector<int> s;
    for (int i = 0; mask >> i; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    return s;
  };
  if (k <= 4) {
    const unsigned full = 1u << k;
    for (unsigned a = 1; a < full; ++a) {
      for (unsigned b = a + 1; b < full; ++b) {
        worst = std::max(worst, check_orthogonality(to_set(a), to_set(b)));
      }
    }
    return worst;
  }
  // For larger k, symmetry makes the residual depend only on
  // (|C1 \ C2|, |C2 \ C1|, |C1 ∩ C2|); test one representative per shape.
  for (int shared = 0; shared <= k; ++shared) {
    for (int only1 = 0; shared + only1 <= k; ++only1) {
      for (int only2 = 0; shared + only1 + only2 <= k; ++only2) {
        if (only1 + only2 == 0 || shared + only1 == 0 || shared + only2 == 0) continue;
        if (only1 > only2) continue;  // mirror image of (only2, only1)
        std::vector<int> s1, s2;
        for (int i = 0; i < shared; ++i) {
          s1.push_back(i);
          s2.push_back(i);
        }
        for (int i = 0; i < only1; ++i) s1.push_back(shared + i);
        for (int i = 0; i < only2; ++i) s2.push_back(shared + only1 + i);
        worst = std::max(worst, check_orthogonality(s1, s2));
      }
    }
  }
  return worst;
}

BaseVarianceReport Decomposition::base_variance() {
  const int k = kernel_.arity;
  const int m = static_cast<int>(dist_.size());
  const HoeffdingSpectrum spec = spectrum();
  require_budget(ipow(m, k), "base variance");

  std::vector<const Atom*> args(static_cast<std::size_t>(k));
  CompensatedSum acc;
  for_each_tuple(m, k, [&](const std::vector<int>& tuple) {
    double w = 1.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      const auto idx = static_cast<std::size_t>(tuple[i]);
      w *= dist_.prob(idx);
      args[i] = &dist_.atom(idx);
    }
    const double d = kernel_(args) - spec.theta;
    acc.add(w * d * d);
  });
  evaluations_ += static_cast<std::uint64_t>(ipow(m, k));

  BaseVarianceReport report;
  report.total = acc.value();
  report.contributions.resize(static_cast<std::size_t>(k));
  CompensatedSum sum;
  for (int c = 1; c <= k; ++c) {
    const double term = comb::binomial(k, c) * spec.zeta(c);
    report.contributions[static_cast<std::size_t>(c - 1)] = term;
    sum.add(term);
  }
  report.residual = std::abs(report.total - sum.value());
  return report;
}

ResidualSummary Decomposition::residuals() {
  ResidualSummary r;
  for (int c = 1; c <= kernel_.arity; ++c) r.degeneracy = std::max(r.degeneracy, check_degeneracy(c));
  r.orthogonality = max_orthogonality_residual();
  r.base_variance = base_variance().residual;
  return r;
}

double marginal_expectation(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                            std::span<const int> fixed) {
  return Decomposition(kernel, dist).marginal_expectation(fixed);
}

double canonical_projection(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                            std::span<const int> points) {
  return Decomposition(kernel, dist).canonical_projection(points);
}

HoeffdingSpectrum hoeffding_spectrum(const SymmetricKernel& kernel, const DiscreteDistribution& dist) {
  return Decomposition(kernel, dist).spectrum();
}

double check_degeneracy(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int c) {
  return Decomposition(kernel, dist).check_degeneracy(c);
}

double check_orthogonality(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                           std::span<const int> c1, std::span<const int> c2) {
  return Decomposition(kernel, dist).check_orthogonality(c1, c2);
}

BaseVarianceReport base_variance(const SymmetricKernel& kernel, const DiscreteDistribution& dist) {
  return Decomposition(kernel, dist).base_variance();
}

}  // namespace subag::anova
