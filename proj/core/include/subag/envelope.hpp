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

#ifndef SUBAG_ENVELOPE_HPP_
#define SUBAG_ENVELOPE_HPP_

#include <functional>
#include <span>
#include <vector>

// Continuous MSE envelope over the subsampling ratio alpha and the solvers
// that locate its minimizer.
namespace subag::envelope {

struct EnvelopeParams {
  double B0 = 0.0;    // bias constant: squared bias <= B0 k^(-2 beta)
  double beta = 0.5;  // bias decay exponent
  int n = 1;
  int M = 1;                     // maximum interaction order
  std::vector<double> spectrum;  // zeta_1..zeta_M

  double alpha_min() const { return static_cast<double>(M) / static_cast<double>(n); }
  void validate() const;
};

// B0 (alpha n)^(-2 beta) + sum_c alpha^c C(alpha n, c) zeta_c for alpha in
// [M/n, 1]; the binomial is the Gamma continuation.
double mse_envelope(double alpha, const EnvelopeParams& p);

// Analytic d/d alpha of mse_envelope via logarithmic differentiation of
// H_c(alpha) = alpha^c C(alpha n, c). Requires alpha in (M/n, 1).
double envelope_derivative(double alpha, const EnvelopeParams& p);

// H_c(alpha) = alpha^c C(alpha n, c).
double variance_multiplier(double alpha, int n, int c);

inline constexpr int kDefaultGridSize = 512;
inline constexpr double kGoldenTolerance = 1e-6;

struct Minimum {
  double x = 0.0;
  double value = 0.0;
  double grid_step = 0.0;
  bool at_lower = false;
  bool at_upper = false;

  bool interior() const { return !at_lower && !at_upper; }
};

// Grid scan of f on [lo, hi] (grid_size points including both ends, ties
// toward the larger x), then golden-section refinement inside the bracket
// around the best grid point. The refined point replaces the grid point only
// when it is strictly better.
Minimum minimize_on_interval(const std::function<double(double)>& f, double lo, double hi, int grid_size,
                             bool refine, double tolerance = kGoldenTolerance);

// Golden-section search for a minimum of a unimodal f on [a, b].
double golden_section(const std::function<double(double)>& f, double a, double b, double tolerance);

Minimum optimal_alpha_detail(const EnvelopeParams& p, int grid_size = kDefaultGridSize, bool refine = true);
double optimal_alpha(const EnvelopeParams& p, int grid_size = kDefaultGridSize, bool refine = true);

// --- Bi-modal spectrum case study -----------------------------------------

struct BimodalParams {
  double B0 = 1.0;
  double beta = 0.5;
  int n = 100;
  double sigma1_sq = 0.0;  // total variance of the first-order signal
  double sigmaM_sq = 0.0;  // total variance of the order-M interaction
  int M = 2;

  void validate() const;
  double bias_scale() const;  // B0 n^(-2 beta)
};

// How the order-M attenuation gamma_M(n, alpha n) is evaluated.
enum class BimodalForm {
  kExact,     // gamma_M(n, round(alpha n)); needs round(alpha n) >= M
  kSmooth,    // prod_j (alpha n - j) / (n - j), continuous in alpha
  kPowerLaw,  // alpha^M, the large-n approximation
};

double bimodal_envelope(double alpha, const BimodalParams& bp, BimodalForm form = BimodalForm::kExact);

// -2 beta B0 n^(-2 beta) alpha^(-2 beta - 1) + sigma1^2 + M sigmaM^2 alpha^(M - 1),
// the derivative of the power-law form.
double bimodal_derivative(double alpha, const BimodalParams& bp);

// Minimizer over [M/n, 1].
Minimum optimal_alpha_bimodal(const BimodalParams& bp, BimodalForm form, int grid_size = kDefaultGridSize,
                              bool refine = true);

// (2 beta b / (M sigmaM^2))^(1 / (M + 2 beta)), b = B0 n^(-2 beta): the root
// of bimodal_derivative when sigma1^2 = 0.
double bimodal_closed_form_root(const BimodalParams& bp);

// --- Comparative statics --------------------------------------------------

struct SpectrumOrder {
  int c_star = 1;
  std::vector<double> base;
  std::vector<double> dominated;

  // Throws DomainError unless dominated agrees with base below c_star and
  // is >= base from c_star on.
  void validate() const;
  // Dominated is strictly larger somewhere.
  bool strict() const;
};

struct StaticsResult {
  double alpha1 = 0.0;  // optimum for the base spectrum
  double alpha2 = 0.0;  // optimum for the dominated spectrum
  double grid_step = 0.0;
  bool both_interior = false;
  bool weak_ok = false;
  bool strict_ok = true;  // only meaningful when both_interior and the order is strict
  bool pass = false;
};

StaticsResult comparative_statics_check(const EnvelopeParams& base, const SpectrumOrder& order,
                                        int grid_size = kDefaultGridSize);

// --- Scaling law ----------------------------------------------------------

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> sigmas;
  std::vector<double> alphas;
  bool boundary_hit = false;
  double expected_slope = 0.0;  // -1 / (M + 2 beta)
};

// Least-squares slope of log alpha* against log sigmaM^2, with every other
// parameter taken from `templ`.
ScalingFit scaling_law_fit(const BimodalParams& templ, std::span<const double> sigmaM_grid,
                           BimodalForm form = BimodalForm::kPowerLaw, int grid_size = kDefaultGridSize);

std::vector<double> geometric_grid(double lo, double hi, int count);

}  // namespace subag::envelope

#endif  // SUBAG_ENVELOPE_HPP_
