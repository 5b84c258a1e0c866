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

#include "subag/combinatorics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "subag/errors.hpp"

namespace subag::comb {
namespace {

__extension__ typedef unsigned __int128 u128;

constexpr int kExactBinomialLimit = 60;
constexpr int kExactRationalLimit = 30;
constexpr int kProductFormLimit = 64;

void require(bool ok, const char* op, const std::string& detail) {
  if (!ok) throw DomainError(std::string(op) + ": " + detail);
}

void check_nkc(const char* op, int n, int k, int c, int c_min) {
  require(n >= 1, op, "n must be >= 1, got " + std::to_string(n));
  require(k >= 1 && k <= n, op, "k must lie in [1, n], got k=" + std::to_string(k));
  require(c >= c_min && c <= k, op,
          "c must lie in [" + std::to_string(c_min) + ", k], got c=" + std::to_string(c));
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

}  // namespace

Rational Rational::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw DomainError("Rational: zero denominator");
  if (num == 0) return {0, 1};
  const std::uint64_t g = gcd64(num, den);
  return {num / g, den / g};
}

Rational Rational::operator*(const Rational& other) const {
  // Cross-reduce first so the products stay small.
  const std::uint64_t g1 = num == 0 ? 1 : gcd64(num, other.den);
  const std::uint64_t g2 = other.num == 0 ? 1 : gcd64(other.num, den);
  const u128 n = static_cast<u128>(num / g1) * (other.num / g2);
  const u128 d = static_cast<u128>(den / g2) * (other.den / g1);
  if (n > UINT64_MAX || d > UINT64_MAX) throw DomainError("Rational: overflow");
  return make(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d));
}

std::uint64_t binomial_exact(int n, int k) {
  require(n >= 0 && n <= 62, "binomial_exact", "n must lie in [0, 62], got " + std::to_string(n));
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  u128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    acc = acc * static_cast<u128>(n - k + i) / static_cast<u128>(i);
  }
  if (acc > UINT64_MAX) throw DomainError("binomial_exact: overflow");
  return static_cast<std::uint64_t>(acc);
}

double binomial(int n, int k) {
  if (n < 0) throw DomainError("binomial: n must be >= 0");
  if (k < 0 || k > n) return 0.0;
  if (n <= kExactBinomialLimit) return static_cast<double>(binomial_exact(n, k));
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

double attenuation_factor(int n, int k, int c) {
  check_nkc("attenuation_factor", n, k, c, 1);
  double gamma = 1.0;
  for (int j = 0; j < c; ++j) {
    gamma *= static_cast<double>(k - j) / static_cast<double>(n - j);
  }
  return gamma;
}

Rational attenuation_factor_exact(int n, int k, int c) {
  check_nkc("attenuation_factor_exact", n, k, c, 1);
  require(n <= kExactRationalLimit, "attenuation_factor_exact", "n must be <= 30");
  Rational gamma{1, 1};
  for (int j = 0; j < c; ++j) {
    gamma = gamma * Rational::make(static_cast<std::uint64_t>(k - j), static_cast<std::uint64_t>(n - j));
  }
  return gamma;
}

double inclusion_probability(int n, int k, int c) {
  check_nkc("inclusion_probability", n, k, c, 0);
  if (c == 0) return 1.0;
  if (n <= kExactBinomialLimit) {
    return static_cast<double>(binomial_exact(n - c, k - c)) / static_cast<double>(binomial_exact(n, k));
  }
  return std::exp(std::lgamma(n - c + 1.0) - std::lgamma(k - c + 1.0) - std::lgamma(n - k + 1.0) -
                  (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

Rational inclusion_probability_exact(int n, int k, int c) {
  check_nkc("inclusion_probability_exact", n, k, c, 0);
  require(n <= kExactRationalLimit, "inclusion_probability_exact", "n must be <= 30");
  return Rational::make(binomial_exact(n - c, k - c), binomial_exact(n, k));
}

double log_extended_binomial(double x, int c) {
  require(c >= 0, "extended_binomial", "c must be >= 0");
  require(std::isfinite(x), "extended_binomial", "x must be finite");
  // Pole guard: x - c + 1 >= 1.
  require(x - c >= -kPoleSlack, "extended_binomial",
          "x - c + 1 must be >= 1 (x=" + std::to_string(x) + ", c=" + std::to_string(c) + ")");
  if (c == 0) return 0.0;
  if (c <= kProductFormLimit) {
    // Falling-factorial form of the same Gamma ratio; more accurate for small c.
    double acc = 0.0;
    for (int j = 0; j < c; ++j) acc += std::log((x - j) / (j + 1.0));
    return acc;
  }
  return std::lgamma(x + 1.0) - std::lgamma(c + 1.0) - std::lgamma(x - c + 1.0);
}

double extended_binomial(double x, int c) {
  require(c >= 0, "extended_binomial", "c must be >= 0");
  require(x - c >= -kPoleSlack, "extended_binomial",
          "x - c + 1 must be >= 1 (x=" + std::to_string(x) + ", c=" + std::to_string(c) + ")");
  if (c == 0) return 1.0;
  if (c <= kProductFormLimit) {
    double acc = 1.0;
    for (int j = 0; j < c; ++j) acc *= (x - j) / (j + 1.0);
    return acc;
  }
  return std::exp(log_extended_binomial(x, c));
}

double overlap_pmf(int n, int k, int rho) {
  require(n >= 1, "overlap_pmf", "n must be >= 1");
  require(k >= 0 && k <= n, "overlap_pmf", "k must lie in [0, n]");
  require(rho >= 0 && rho <= k, "overlap_pmf", "rho must lie in [0, k]");
  if (rho < std::max(0, 2 * k - n)) return 0.0;
  if (n <= kExactBinomialLimit) {
    const double num = static_cast<double>(binomial_exact(k, rho)) *
                       static_cast<double>(binomial_exact(n - k, k - rho));
    return num / static_cast<double>(binomial_exact(n, k));
  }
  const auto lb = [](int a, int b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
  };
  return std::exp(lb(k, rho) + lb(n - k, k - rho) - lb(n, k));
}

double variance_via_overlap(std::span<const double> zetas, int n, int k) {
  require(k >= 1 && k <= n, "variance_via_overlap", "k must lie in [1, n]");
  require(zetas.size() >= static_cast<std::size_t>(k), "variance_via_overlap",
          "spectrum must have length >= k");
  double total = 0.0;
  for (int rho = 1; rho <= k; ++rho) {
    const double p = overlap_pmf(n, k, rho);
    if (p == 0.0) continue;
    double cov = 0.0;
    for (int c = 1; c <= rho; ++c) cov += binomial(rho, c) * zetas[static_cast<std::size_t>(c - 1)];
    total += p * cov;
  }
  return total;
}

double variance_via_overlap(const HoeffdingSpectrum& spectrum, int n, int k) {
  return variance_via_overlap(spectrum.zetas, n, k);
}

std::vector<double> variance_terms(std::span<const double> zetas, int n, int k) {
  require(k >= 1 && k <= n, "variance_terms", "k must lie in [1, n]");
  require(zetas.size() >= static_cast<std::size_t>(k), "variance_terms", "spectrum must have length >= k");
  std::vector<double> terms(static_cast<std::size_t>(k));
  for (int c = 1; c <= k; ++c) {
    terms[static_cast<std::size_t>(c - 1)] =
        attenuation_factor(n, k, c) * binomial(k, c) * zetas[static_cast<std::size_t>(c - 1)];
  }
  return terms;
}

double variance_closed_form(std::span<const double> zetas, int n, int k) {
  const auto terms = variance_terms(zetas, n, k);
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

double variance_closed_form(const HoeffdingSpectrum& spectrum, int n, int k) {
  return variance_closed_form(spectrum.zetas, n, k);
}

AttenuationProfile attenuation_profile(int n, int k) {
  check_nkc("attenuation_profile", n, k, 1, 1);
  AttenuationProfile profile{n, k, {}};
  profile.gammas.reserve(static_cast<std::size_t>(k));
  double gamma = 1.0;
  for (int j = 0; j < k; ++j) {
    gamma *= static_cast<double>(k - j) / static_cast<double>(n - j);
    profile.gammas.push_back(gamma);
  }
  return profile;
}

}  // namespace subag::comb
