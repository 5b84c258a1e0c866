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

#include "subag/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subag/combinatorics.hpp"
#include "subag/errors.hpp"

namespace subag::envelope {
namespace {

constexpr double kAlphaSlack = 1e-12;

double clamp_alpha(double alpha, double lo, const char* op) {
  if (!std::isfinite(alpha) || alpha < lo - kAlphaSlack || alpha > 1.0 + kAlphaSlack) {
    throw DomainError(std::string(op) + ": alpha=" + std::to_string(alpha) + " outside [" + std::to_string(lo) +
                      ", 1]");
  }
  return std::clamp(alpha, lo, 1.0);
}

}  // namespace

void EnvelopeParams::validate() const {
  if (!(B0 >= 0.0) || !std::isfinite(B0)) throw DomainError("EnvelopeParams: B0 must be finite and >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("EnvelopeParams: beta must be > 0");
  if (n < 1) throw DomainError("EnvelopeParams: n must be >= 1");
  if (M < 1 || M > n) throw DomainError("EnvelopeParams: M must lie in [1, n]");
  if (spectrum.size() != static_cast<std::size_t>(M)) {
    throw DomainError("EnvelopeParams: spectrum length " + std::to_string(spectrum.size()) + " differs from M=" +
                      std::to_string(M));
  }
  for (double z : spectrum) {
    if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("EnvelopeParams: spectrum entries must be finite and >= 0");
  }
}

double variance_multiplier(double alpha, int n, int c) {
  if (!(alpha > 0.0)) throw DomainError("variance_multiplier: alpha must be > 0");
  return std::exp(c * std::log(alpha) + comb::log_extended_binomial(alpha * n, c));
}

double mse_envelope(double alpha, const EnvelopeParams& p) {
  p.validate();
  alpha = clamp_alpha(alpha, p.alpha_min(), "mse_envelope");
  const double k = alpha * p.n;
  double value = p.B0 * std::pow(k, -2.0 * p.beta);
  for (int c = 1; c <= p.M; ++c) {
    const double zeta = p.spectrum[static_cast<std::size_t>(c - 1)];
    if (zeta == 0.0) continue;
    value += variance_multiplier(alpha, p.n, c) * zeta;
  }
  return value;
}

double envelope_derivative(double alpha, const EnvelopeParams& p) {
  p.validate();
  if (!(alpha > p.alpha_min()) || !(alpha < 1.0)) {
    throw DomainError("envelope_derivative: alpha=" + std::to_string(alpha) + " must lie strictly inside (M/n, 1)");
  }
  const double n = static_cast<double>(p.n);
  double value = -2.0 * p.beta * p.B0 * std::pow(n, -2.0 * p.beta) * std::pow(alpha, -2.0 * p.beta - 1.0);
  for (int c = 1; c <= p.M; ++c) {
    const double zeta = p.spectrum[static_cast<std::size_t>(c - 1)];
    if (zeta == 0.0) continue;
    double log_slope = c / alpha;
    for (int j = 0; j < c; ++j) log_slope += n / (alpha * n - j);
    value += variance_multiplier(alpha, p.n, c) * log_slope * zeta;
  }
  return value;
}

double golden_section(const std::function<double(double)>& f, double a, double b, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

Minimum minimize_on_interval(const std::function<double(double)>& f, double lo, double hi, int grid_size,
                             bool refine, double tolerance) {
  if (grid_size < 2) throw DomainError("minimize_on_interval: grid_size must be >= 2");
  if (!(lo < hi)) throw DomainError("minimize_on_interval: empty interval");
  const double step = (hi - lo) / (grid_size - 1);
  const auto grid_point = [&](int i) { return i == grid_size - 1 ? hi : lo + step * i; };

  int best = 0;
  double best_value = f(lo);
  for (int i = 1; i < grid_size; ++i) {
    const double v = f(grid_point(i));
    if (v <= best_value) {
      best = i;
      best_value = v;
    }
  }

  Minimum out{grid_point(best), best_value, step, false, false};
  if (refine) {
    const double a = grid_point(std::max(best - 1, 0));
    const double b = grid_point(std::min(best + 1, grid_size - 1));
    const double x = golden_section(f, a, b, tolerance);
    const double v = f(x);
    if (v < best_value) {
      out.x = x;
      out.value = v;
    }
  }
  out.at_lower = out.x == lo;
  out.at_upper = out.x == hi;
  return out;
}

Minimum optimal_alpha_detail(const EnvelopeParams& p, int grid_size, bool refine) {
  p.validate();
  if (grid_size < 16) throw DomainError("optimal_alpha: grid_size must be >= 16");
  const double lo = p.alpha_min();
  if (lo >= 1.0) return {1.0, mse_envelope(1.0, p), 0.0, true, true};
  return minimize_on_interval([&p](double a) { return mse_envelope(a, p); }, lo, 1.0, grid_size, refine);
}

double optimal_alpha(const EnvelopeParams& p, int grid_size, bool refine) {
  return optimal_alpha_detail(p, grid_size, refine).x;
}

void BimodalParams::validate() const {
  if (!(B0 >= 0.0) || !std::isfinite(B0)) throw DomainError("BimodalParams: B0 must be finite and >= 0");
  if (!(beta > 0.0)) throw DomainError("BimodalParams: beta must be > 0");
  if (n < 1) throw DomainError("BimodalParams: n must be >= 1");
  if (M < 2 || M > n) throw DomainError("BimodalParams: M must lie in [2, n]");
  if (!(sigma1_sq >= 0.0) || !(sigmaM_sq >= 0.0)) throw DomainError("BimodalParams: variances must be >= 0");
}

double BimodalParams::bias_scale() const { return B0 * std::pow(static_cast<double>(n), -2.0 * beta); }

double bimodal_envelope(double alpha, const BimodalParams& bp, BimodalForm form) {
  bp.validate();
  if (!(alpha > 0.0) || alpha > 1.0 + kAlphaSlack) {
    throw DomainError("bimodal_envelope: alpha must lie in (0, 1]");
  }
  alpha = std::min(alpha, 1.0);
  double gamma_m = 0.0;
  switch (form) {
    case BimodalForm::kExact: {
      const long k = std::lround(alpha * bp.n);
      if (k < bp.M) {
        throw DomainError("bimodal_envelope: round(alpha n) = " + std::to_string(k) + " < M in exact mode");
      }
      gamma_m = comb::attenuation_factor(bp.n, static_cast<int>(std::min<long>(k, bp.n)), bp.M);
      break;
    }
    case BimodalForm::kSmooth: {
      const double x = alpha * bp.n;
      if (x < bp.M - comb::kPoleSlack) throw DomainError("bimodal_envelope: alpha n < M in smooth mode");
      gamma_m = 1.0;
      for (int j = 0; j < bp.M; ++j) gamma_m *= (x - j) / (bp.n - j);
      break;
    }
    case BimodalForm::kPowerLaw:
      gamma_m = std::pow(alpha, bp.M);
      break;
  }
  return bp.bias_scale() * std::pow(alpha, -2.0 * bp.beta) + bp.sigma1_sq * alpha + bp.sigmaM_sq * gamma_m;
}

double bimodal_derivative(double alpha, const BimodalParams& bp) {
  bp.validate();
  if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("bimodal_derivative: alpha must lie in (0, 1]");
  return -2.0 * bp.beta * bp.bias_scale() * std::pow(alpha, -2.0 * bp.beta - 1.0) + bp.sigma1_sq +
         bp.M * bp.sigmaM_sq * std::pow(alpha, bp.M - 1);
}

Minimum optimal_alpha_bimodal(const BimodalParams& bp, BimodalForm form, int grid_size, bool refine) {
  bp.validate();
  if (grid_size < 16) throw DomainError("optimal_alpha_bimodal: grid_size must be >= 16");
  const double lo = static_cast<double>(bp.M) / bp.n;
  if (lo >= 1.0) return {1.0, bimodal_envelope(1.0, bp, form), 0.0, true, true};
  return minimize_on_interval([&](double a) { return bimodal_envelope(a, bp, form); }, lo, 1.0, grid_size,
                              refine);
}

double bimodal_closed_form_root(const BimodalParams& bp) {
  bp.validate();
  if (!(bp.sigmaM_sq > 0.0)) throw DomainError("bimodal_closed_form_root: sigmaM^2 must be > 0");
  return std::pow(2.0 * bp.beta * bp.bias_scale() / (bp.M * bp.sigmaM_sq), 1.0 / (bp.M + 2.0 * bp.beta));
}

void SpectrumOrder::validate() const {
  if (base.size() != dominated.size()) throw DomainError("SpectrumOrder: spectra differ in length");
  const int M = static_cast<int>(base.size());
  if (c_star < 1 || c_star > M) throw DomainError("SpectrumOrder: c_star must lie in [1, M]");
  for (int c = 1; c <= M; ++c) {
    const double b = base[static_cast<std::size_t>(c - 1)];
    const double d = dominated[static_cast<std::size_t>(c - 1)];
    if (c < c_star && d != b) {
      throw DomainError("SpectrumOrder: orders below c_star must agree (c=" + std::to_string(c) + ")");
    }
    if (c >= c_star && d < b) {
      throw DomainError("SpectrumOrder: dominated spectrum is smaller at c=" + std::to_string(c));
    }
  }
}

bool SpectrumOrder::strict() const {
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (dominated[i] > base[i]) return true;
  }
  return false;
}

StaticsResult comparative_statics_check(const EnvelopeParams& base, const SpectrumOrder& order, int grid_size) {
  order.validate();
  EnvelopeParams p1 = base;
  p1.spectrum = order.base;
  EnvelopeParams p2 = base;
  p2.spectrum = order.dominated;
  const Minimum m1 = optimal_alpha_detail(p1, grid_size);
  const Minimum m2 = optimal_alpha_detail(p2, grid_size);

  StaticsResult r;
  r.alpha1 = m1.x;
  r.alpha2 = m2.x;
  r.grid_step = m1.grid_step;
  r.both_interior = m1.interior() && m2.interior();
  r.weak_ok = r.alpha2 <= r.alpha1 + r.grid_step;
  r.strict_ok = !r.both_interior || !order.strict() || r.alpha2 < r.alpha1 - 0.5 * r.grid_step;
  r.pass = r.weak_ok && r.strict_ok;
  return r;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw DomainError("geometric_grid: need 0 < lo <= hi, count >= 1");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    g[static_cast<std::size_t>(i)] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  return g;
}

ScalingFit scaling_law_fit(const BimodalParams& templ, std::span<const double> sigmaM_grid, BimodalForm form,
                           int grid_size) {
  if (sigmaM_grid.size() < 2) throw DomainError("scaling_law_fit: need at least two grid values");
  ScalingFit fit;
  fit.expected_slope = -1.0 / (templ.M + 2.0 * templ.beta);
  for (double s : sigmaM_grid) {
    if (!(s > 0.0)) throw DomainError("scaling_law_fit: sigmaM^2 values must be > 0");
    BimodalParams bp = templ;
    bp.sigmaM_sq = s;
    const Minimum m = optimal_alpha_bimodal(bp, form, grid_size);
    fit.sigmas.push_back(s);
    fit.alphas.push_back(m.x);
    fit.boundary_hit = fit.boundary_hit || !m.interior();
  }
  const double count = static_cast<double>(fit.sigmas.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < fit.sigmas.size(); ++i) {
    mx += std::log(fit.sigmas[i]);
    my += std::log(fit.alphas[i]);
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < fit.sigmas.size(); ++i) {
    const double dx = std::log(fit.sigmas[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(fit.alphas[i]) - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace subag::envelope
