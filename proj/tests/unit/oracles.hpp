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

#ifndef SUBAG_TESTS_ORACLES_HPP_
#define SUBAG_TESTS_ORACLES_HPP_

// Test-side reference computations. Nothing here calls into the library's
// combinatorics or decomposition code.

#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "subag/distribution.hpp"
#include "subag/kernel.hpp"

namespace subag::testing {

// C(n, k) by Pascal's triangle.
inline std::uint64_t pascal(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::vector<std::uint64_t>> t(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    t[i].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return t[n][k];
}

// Bitmasks of all k-subsets of [n], n <= 20.
inline std::vector<std::uint32_t> subsets(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1U << n); ++m) {
    if (std::popcount(m) == k) out.push_back(m);
  }
  return out;
}

// Fraction of k-subsets of [n] containing {0..c-1}.
inline double enumerated_inclusion(int n, int k, int c) {
  const auto all = subsets(n, k);
  const std::uint32_t fixed = (1U << c) - 1U;
  double hit = 0;
  for (auto m : all) hit += (m & fixed) == fixed ? 1 : 0;
  return hit / static_cast<double>(all.size());
}

// Fraction of ordered pairs of k-subsets sharing exactly rho indices.
inline double enumerated_overlap(int n, int k, int rho) {
  const auto all = subsets(n, k);
  double hit = 0;
  for (auto a : all) {
    for (auto b : all) hit += std::popcount(a & b) == rho ? 1 : 0;
  }
  return hit / static_cast<double>(all.size() * all.size());
}

inline double eval_kernel(const SymmetricKernel& h, const DiscreteDistribution& d, const std::vector<int>& idx) {
  std::vector<const Atom*> pts;
  for (int i : idx) pts.push_back(&d.atom(static_cast<std::size_t>(i)));
  return h(pts);
}

// E[h | first |fixed| arguments = fixed], by summing over the free slots.
inline double conditional_mean(const SymmetricKernel& h, const DiscreteDistribution& d, std::vector<int> fixed) {
  const int m = static_cast<int>(d.size());
  const int free = h.arity - static_cast<int>(fixed.size());
  double total = 0.0;
  std::vector<int> tail(static_cast<std::size_t>(free), 0);
  while (true) {
    std::vector<int> all = fixed;
    all.insert(all.end(), tail.begin(), tail.end());
    double w = 1.0;
    for (int t : tail) w *= d.prob(static_cast<std::size_t>(t));
    total += w * eval_kernel(h, d, all);
    int pos = 0;
    while (pos < free && ++tail[pos] == m) tail[pos++] = 0;
    if (pos == free) break;
  }
  return total;
}

// The recursive definition: h_C(z_C) = E[h | z_C] - sum over proper subsets
// D of C of h_D(z_D), with h_{} = theta.
inline double recursive_projection(const SymmetricKernel& h, const DiscreteDistribution& d,
                                   const std::vector<int>& pts) {
  std::map<std::uint32_t, double> memo;
  const auto c = static_cast<int>(pts.size());
  std::function<double(std::uint32_t)> proj = [&](std::uint32_t mask) -> double {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    std::vector<int> sub;
    for (int i = 0; i < c; ++i) {
      if (mask >> i & 1U) sub.push_back(pts[i]);
    }
    double v = conditional_mean(h, d, sub);
    for (std::uint32_t s = (mask - 1) & mask; mask != 0; s = (s - 1) & mask) {
      v -= proj(s);
      if (s == 0) break;
    }
    return memo[mask] = v;
  };
  return proj((1U << c) - 1U);
}

// Var h under P^k by direct enumeration.
inline double direct_variance(const SymmetricKernel& h, const DiscreteDistribution& d) {
  const double mu = conditional_mean(h, d, {});
  double second = 0.0;
  const int m = static_cast<int>(d.size());
  std::vector<int> t(static_cast<std::size_t>(h.arity), 0);
  while (true) {
    double w = 1.0;
    for (int i : t) w *= d.prob(static_cast<std::size_t>(i));
    const double v = eval_kernel(h, d, t);
    second += w * v * v;
    int pos = 0;
    while (pos < h.arity && ++t[pos] == m) t[pos++] = 0;
    if (pos == h.arity) break;
  }
  return second - mu * mu;
}

}  // namespace subag::testing

#endif  // SUBAG_TESTS_ORACLES_HPP_
