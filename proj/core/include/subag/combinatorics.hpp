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

#ifndef SUBAG_COMBINATORICS_HPP_
#define SUBAG_COMBINATORICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "subag/spectrum.hpp"

// Exact combinatorics of uniform k-out-of-n subsampling without replacement.
namespace subag::comb {

// Nonnegative fraction kept in lowest terms. Only used for small n, where
// every numerator and denominator fits comfortably in 64 bits.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t num, std::uint64_t den);
  Rational operator*(const Rational& other) const;
  bool operator==(const Rational& other) const = default;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Binomial coefficient C(n, k). Exact (128-bit multiplicative formula) for
// n <= 60, log-space beyond. Returns 0 for k < 0 or k > n.
double binomial(int n, int k);

// Exact C(n, k) for n <= 62. Throws DomainError when the result cannot be
// represented.
std::uint64_t binomial_exact(int n, int k);

// gamma_c(n, k) = prod_{j<c} (k - j) / (n - j): the probability that a fixed
// c-subset of [n] lies inside a uniformly drawn k-subset.
double attenuation_factor(int n, int k, int c);

// Same quantity as an exact fraction; requires n <= 30.
Rational attenuation_factor_exact(int n, int k, int c);

// C(n - c, k - c) / C(n, k), computed from binomials. Equal to
// attenuation_factor for c >= 1; defined as 1 for c = 0.
double inclusion_probability(int n, int k, int c);
Rational inclusion_probability_exact(int n, int k, int c);

// Binomial continued to real x via Gamma(x + 1) / (Gamma(c + 1) Gamma(x - c + 1)).
// Requires x - c + 1 >= 1 (up to kPoleSlack), which keeps every Gamma argument
// away from the poles.
double extended_binomial(double x, int c);
double log_extended_binomial(double x, int c);

inline constexpr double kPoleSlack = 1e-9;

// P(|S1 ∩ S2| = rho) for two independent uniform k-subsets of [n].
double overlap_pmf(int n, int k, int rho);

// Ensemble variance assembled from the overlap distribution:
//   sum_rho P(rho) * sum_{c <= rho} C(rho, c) zeta_c.
// zetas[c - 1] = zeta_c, length >= k.
double variance_via_overlap(std::span<const double> zetas, int n, int k);
double variance_via_overlap(const HoeffdingSpectrum& spectrum, int n, int k);

// sum_{c=1}^{k} gamma_c(n, k) C(k, c) zeta_c.
double variance_closed_form(std::span<const double> zetas, int n, int k);
double variance_closed_form(const HoeffdingSpectrum& spectrum, int n, int k);

// Per-order terms gamma_c C(k, c) zeta_c, c = 1..k.
std::vector<double> variance_terms(std::span<const double> zetas, int n, int k);

struct AttenuationProfile {
  int n = 0;
  int k = 0;
  std::vector<double> gammas;  // gammas[c - 1] = gamma_c(n, k)

  double gamma(int c) const { return gammas.at(static_cast<std::size_t>(c - 1)); }
  double alpha() const { return static_cast<double>(k) / static_cast<double>(n); }
};

AttenuationProfile attenuation_profile(int n, int k);

}  // namespace subag::comb

#endif  // SUBAG_COMBINATORICS_HPP_
