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

#ifndef SUBAG_DISTRIBUTION_HPP_
#define SUBAG_DISTRIBUTION_HPP_

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace subag {

// One sample point z = (x, y). Kernel-only tests use an empty feature vector
// and carry the scalar value in `target`.
struct Atom {
  std::vector<double> features;
  double target = 0.0;

  static Atom scalar(double value) { return Atom{{}, value}; }

  // Total order used everywhere a canonical row order is needed:
  // lexicographic on features, then target.
  friend std::partial_ordering operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

bool canonical_less(const Atom& a, const Atom& b);

// Finite-support probability measure. Support atoms are distinct and every
// probability is strictly positive; the probabilities sum to one within 1e-12.
class DiscreteDistribution {
 public:
  // Duplicate atoms are merged into one atom carrying the summed mass.
  DiscreteDistribution(std::vector<Atom> support, std::vector<double> probs);

  static DiscreteDistribution uniform(std::vector<Atom> support);
  // Uniform on {-1, +1}.
  static DiscreteDistribution rademacher();

  std::size_t size() const noexcept { return support_.size(); }
  const Atom& atom(std::size_t i) const { return support_.at(i); }
  double prob(std::size_t i) const { return probs_.at(i); }
  std::span<const Atom> support() const noexcept { return support_; }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  std::vector<Atom> support_;
  std::vector<double> probs_;
};

inline constexpr double kProbabilitySumTolerance = 1e-12;

}  // namespace subag

#endif  // SUBAG_DISTRIBUTION_HPP_
