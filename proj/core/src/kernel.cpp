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

#include "subag/kernel.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <vector>

#include "subag/errors.hpp"
#include "subag/random.hpp"

namespace subag::kernels {
namespace {

void check_arity(int arity, const char* name) {
  if (arity < 1) throw DomainError(std::string(name) + ": arity must be >= 1");
}

}  // namespace

SymmetricKernel constant(int arity, double value) {
  check_arity(arity, "constant");
  return {arity, [value](std::span<const Atom* const>) { return value; }, "constant"};
}

SymmetricKernel additive(int arity) {
  check_arity(arity, "additive");
  return {arity,
          [](std::span<const Atom* const> z) {
            // Sum in sorted order so reorderings give bit-identical results.
            std::vector<double> v;
            v.reserve(z.size());
            for (const Atom* a : z) v.push_back(a->target);
            std::sort(v.begin(), v.end());
            double s = 0.0;
            for (double x : v) s += x;
            return s;
          },
          "additive"};
}

SymmetricKernel mean(int arity) {
  check_arity(arity, "mean");
  auto sum = additive(arity);
  return {arity,
          [sum = std::move(sum.eval), arity](std::span<const Atom* const> z) {
            return sum(z) / static_cast<double>(arity);
          },
          "mean"};
}

SymmetricKernel product(int arity) {
  check_arity(arity, "product");
  return {arity,
          [](std::span<const Atom* const> z) {
            std::vector<double> v;
            v.reserve(z.size());
            for (const Atom* a : z) v.push_back(a->target);
            std::sort(v.begin(), v.end());
            double p = 1.0;
            for (double x : v) p *= x;
            return p;
          },
          "product"};
}

SymmetricKernel pairwise_max(int arity) {
  check_arity(arity, "pairwise_max");
  return {arity,
          [](std::span<const Atom* const> z) {
            std::vector<double> v;
            v.reserve(z.size());
            for (const Atom* a : z) v.push_back(a->target);
            std::sort(v.begin(), v.end());
            if (v.size() == 1) return v.front();
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
              for (std::size_t j = i + 1; j < v.size(); ++j) s += std::max(v[i], v[j]);
            }
            const double pairs = static_cast<double>(v.size() * (v.size() - 1) / 2);
            return s / pairs;
          },
          "pairwise-max"};
}

SymmetricKernel random_symmetric(int arity, std::uint64_t seed) {
  check_arity(arity, "random_symmetric");
  return {arity,
          [seed](std::span<const Atom* const> z) {
            std::vector<const Atom*> sorted(z.begin(), z.end());
            std::sort(sorted.begin(), sorted.end(),
                      [](const Atom* a, const Atom* b) { return canonical_less(*a, *b); });
            std::uint64_t h = splitmix64(seed);
            const auto mix = [&h](double v) { h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v)); };
            for (const Atom* a : sorted) {
              for (double f : a->features) mix(f);
              mix(a->target);
              h = splitmix64(h + 0x5851F42D4C957F2DULL);
            }
            // 53 random mantissa bits mapped to [-1, 1).
            return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
          },
          "random(" + std::to_string(seed) + ")"};
}

}  // namespace subag::kernels
