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

#ifndef SUBAG_ANOVA_HPP_
#define SUBAG_ANOVA_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "subag/distribution.hpp"
#include "subag/kernel.hpp"
#include "subag/spectrum.hpp"

// Exact Hoeffding-ANOVA decomposition of a symmetric kernel under the
// product measure P^k of a finite discrete distribution.
namespace subag::anova {

inline constexpr double kDefaultEvaluationCap = 1e7;
inline constexpr int kMaxMobiusOrder = 12;
// Negative spectrum values down to this bound come from cancellation and are
// clamped to zero.
inline constexpr double kClampTolerance = 1e-14;

struct BaseVarianceReport {
  double total = 0.0;                 // Var h under P^k, by direct enumeration
  std::vector<double> contributions;  // C(k, c) zeta_c, c = 1..k
  double residual = 0.0;              // |total - sum(contributions)|
};

struct ResidualSummary {
  double degeneracy = 0.0;     // max over c of check_degeneracy
  double orthogonality = 0.0;  // max over all distinct nonempty subset pairs
  double base_variance = 0.0;
};

// Points are passed as indices into the distribution's support. A memo of
// conditional expectations E[h | Z_J = z_J] (keyed by the multiset z_J) is
// shared by every query made on one instance.
class Decomposition {
 public:
  Decomposition(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                double evaluation_cap = kDefaultEvaluationCap);

  int arity() const noexcept { return kernel_.arity; }

  double marginal_expectation(std::span<const int> fixed);
  double theta() { return marginal_expectation({}); }
  double canonical_projection(std::span<const int> points);
  HoeffdingSpectrum spectrum();
  double check_degeneracy(int c);
  // Index sets are subsets of {0, .., k-1}.
  double check_orthogonality(std::span<const int> c1, std::span<const int> c2);
  double max_orthogonality_residual();
  BaseVarianceReport base_variance();
  ResidualSummary residuals();

  // Number of kernel evaluations a full spectrum run needs.
  double spectrum_evaluation_count() const;
  std::uint64_t evaluations() const noexcept { return evaluations_; }

 private:
  double expectation_uncached(const std::vector<int>& fixed);
  void require_budget(double count, const char* what) const;

  const SymmetricKernel& kernel_;
  const DiscreteDistribution& dist_;
  double cap_;
  std::map<std::vector<int>, double> memo_;
  std::uint64_t evaluations_ = 0;
};

// One-shot wrappers. Each builds its own Decomposition (and memo).
double marginal_expectation(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                            std::span<const int> fixed);
double canonical_projection(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                            std::span<const int> points);
HoeffdingSpectrum hoeffding_spectrum(const SymmetricKernel& kernel, const DiscreteDistribution& dist);
double check_degeneracy(const SymmetricKernel& kernel, const DiscreteDistribution& dist, int c);
double check_orthogonality(const SymmetricKernel& kernel, const DiscreteDistribution& dist,
                           std::span<const int> c1, std::span<const int> c2);
BaseVarianceReport base_variance(const SymmetricKernel& kernel, const DiscreteDistribution& dist);

// Odometer over {0..m-1}^len; calls fn(tuple) for each assignment, first
// coordinate varying fastest.
template <class Fn>
void for_each_tuple(int m, int len, Fn&& fn) {
  std::vector<int> tuple(static_cast<std::size_t>(len), 0);
  while (true) {
    fn(static_cast<const std::vector<int>&>(tuple));
    int pos = 0;
    while (pos < len && ++tuple[static_cast<std::size_t>(pos)] == m) {
      tuple[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == len) return;
  }
}

}  // namespace subag::anova

#endif  // SUBAG_ANOVA_HPP_
