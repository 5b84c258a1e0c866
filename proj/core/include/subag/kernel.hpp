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

#ifndef SUBAG_KERNEL_HPP_
#define SUBAG_KERNEL_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "subag/distribution.hpp"

namespace subag {

// A base learner evaluated at a fixed test point, viewed as a function of
// its k training points. Implementations must be pure, reentrant, and
// invariant under any reordering of their arguments.
struct SymmetricKernel {
  using Eval = std::function<double(std::span<const Atom* const>)>;

  int arity = 0;
  Eval eval;
  std::string label;

  double operator()(std::span<const Atom* const> points) const { return eval(points); }
};

namespace kernels {

// h = value.
SymmetricKernel constant(int arity, double value);
// h = sum_i z_i (scalar atoms use their target value).
SymmetricKernel additive(int arity);
// h = (1/k) sum_i z_i.
SymmetricKernel mean(int arity);
// h = prod_i z_i.
SymmetricKernel product(int arity);
// h = mean over unordered pairs of max(z_i, z_j); z_1 when k = 1.
SymmetricKernel pairwise_max(int arity);
// A random function of the multiset of inputs with values in [-1, 1).
// Symmetric by construction: inputs are sorted before hashing.
SymmetricKernel random_symmetric(int arity, std::uint64_t seed);

}  // namespace kernels
}  // namespace subag

#endif  // SUBAG_KERNEL_HPP_
