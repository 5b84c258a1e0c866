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

#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "subag/anova.hpp"
#include "subag/bench.hpp"
#include "subag/cgas.hpp"
#include "subag/errors.hpp"
#include "subag/io.hpp"
#include "subag/subag_engine.hpp"

namespace subag::cli {
namespace {

using nlohmann::json;

struct Sweep {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("cannot parse number '" + s + "'");
  return v;
}

Sweep parse_sweep(const std::string& text) {
  const std::string prefix = "sigmaM=";
  if (text.rfind(prefix, 0) != 0) throw ParseError("--sweep must look like sigmaM=lo:hi:count");
  const std::string body = text.substr(prefix.size());
  const auto a = body.find(':');
  const auto b = body.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) throw ParseError("--sweep must look like sigmaM=lo:hi:count");
  Sweep s{to_double(body.substr(0, a)), to_double(body.substr(a + 1, b - a - 1)),
          static_cast<int>(to_double(body.substr(b + 1)))};
  if (!(s.lo > 0.0 && s.hi > s.lo) || s.count < 2) throw ParseError("--sweep needs 0 < lo < hi and count >= 2");
  return s;
}

std::string num(double v) { return fmt::format("{:.12g}", v); }

json minimum_json(const envelope::Minimum& m) {
  return {{"alpha_star", m.x}, {"value", m.value}, {"interior", m.interior()}, {"grid_step", m.grid_step}};
}

json tree_json(const RegressionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes()) {
    if (n.feature < 0) {
      nodes.push_back({{"value", n.value}});
    } else {
      nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
    }
  }
  return nodes;
}

}  // namespace

int run_spectrum(const SpectrumOptions& o, std::ostream& out) {
  const auto dist = io::load_distribution(o.dist);
  const auto kernel = io::parse_kernel(o.kernel, o.k, o.x);
  anova::Decomposition dec(kernel, dist);
  const auto spectrum = dec.spectrum();
  const auto base = dec.base_variance();
  json j = io::to_json(spectrum);
  j["kernel"] = o.kernel;
  j["k"] = o.k;
  j["variance"] = base.total;
  j["contributions"] = base.contributions;
  j["residuals"] = io::to_json(dec.residuals());
  out << j.dump(2) << '\n';
  return 0;
}

int run_verify(const VerifyOptions& o, std::ostream& out) {
  const auto dist = io::load_distribution(o.dist);
  const auto kernel = io::parse_kernel(o.kernel, o.k, o.x);
  const auto report = verify_exact_identity(kernel, dist, o.n, o.k);
  const bool pass = report.residual <= o.tolerance;
  json j = io::to_json(report);
  j["kernel"] = o.kernel;
  j["n"] = o.n;
  j["k"] = o.k;
  j["tolerance"] = o.tolerance;
  j["pass"] = pass;
  out << j.dump(2) << '\n';
  return pass ? 0 : 1;
}

int run_envelope(const EnvelopeOptions& o, std::ostream& out) {
  if (o.emit != "json" && o.emit != "csv") throw ParseError("--emit must be json or csv");
  if (o.points < 2) throw ParseError("--points must be >= 2");
  const auto input = io::envelope_from_json(io::read_json_file(o.params));
  const bool csv = o.emit == "csv";

  if (!o.sweep.empty()) {
    const auto* bp = std::get_if<envelope::BimodalParams>(&input);
    if (!bp) throw ParseError("--sweep needs bimodal parameters");
    const auto s = parse_sweep(o.sweep);
    const auto grid = envelope::geometric_grid(s.lo, s.hi, s.count);
    const auto form = io::parse_bimodal_form(o.form);
    const auto fit = envelope::scaling_law_fit(*bp, grid, form, o.grid);
    if (csv) {
      out << "sigmaM_sq,alpha_star,closed_form_root\n";
      for (std::size_t i = 0; i < grid.size(); ++i) {
        auto p = *bp;
        p.sigmaM_sq = grid[i];
        out << num(grid[i]) << ',' << num(fit.alphas[i]) << ',' << num(envelope::bimodal_closed_form_root(p)) << '\n';
      }
      return 0;
    }
    out << json{{"form", o.form},
                {"sigmaM_sq", fit.sigmas},
                {"alpha_star", fit.alphas},
                {"slope", fit.slope},
                {"intercept", fit.intercept},
                {"expected_slope", fit.expected_slope},
                {"boundary_hit", fit.boundary_hit}}
               .dump(2)
        << '\n';
    return 0;
  }

  std::vector<double> alphas;
  std::vector<double> values;
  json summary;
  if (const auto* p = std::get_if<envelope::EnvelopeParams>(&input)) {
    const double lo = p->alpha_min();
    for (int i = 0; i < o.points; ++i) {
      const double a = lo + (1.0 - lo) * i / (o.points - 1);
      alphas.push_back(a);
      values.push_back(envelope::mse_envelope(a, *p));
    }
    summary = minimum_json(envelope::optimal_alpha_detail(*p, o.grid));
  } else {
    const auto& bp = std::get<envelope::BimodalParams>(input);
    const auto form = io::parse_bimodal_form(o.form);
    const double lo = static_cast<double>(bp.M) / bp.n;
    for (int i = 0; i < o.points; ++i) {
      const double a = lo + (1.0 - lo) * i / (o.points - 1);
      alphas.push_back(a);
      values.push_back(envelope::bimodal_envelope(a, bp, form));
    }
    summary = minimum_json(envelope::optimal_alpha_bimodal(bp, form, o.grid));
    summary["form"] = o.form;
    if (bp.sigma1_sq == 0.0 && bp.sigmaM_sq > 0.0) summary["closed_form_root"] = envelope::bimodal_closed_form_root(bp);
  }
  if (csv) {
    out << "alpha,envelope\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) out << num(alphas[i]) << ',' << num(values[i]) << '\n';
    return 0;
  }
  summary["curve"] = {{"alpha", alphas}, {"envelope", values}};
  out << summary.dump(2) << '\n';
  return 0;
}

int run_cgas(const CgasOptions& o, std::ostream& out) {
  Dataset data = bench::ingest_csv(o.data, o.target);
  if (o.standardize) data = bench::standardize(data).first;

  cgas::CgasConfig config;
  if (o.learner == "tree") {
    TreeConfig t;
    if (o.depth != "max") t.max_depth = static_cast<int>(to_double(o.depth));
    config.learner = t;
  } else if (o.learner == "knn") {
    config.learner = KnnConfig{o.neighbors};
  } else {
    throw ParseError("--learner must be tree or knn");
  }
  config.folds = o.folds;
  config.search_members = o.search_members;
  config.final_members = o.final_members;
  config.seed = o.seed;
  config.sampling = o.rf_star ? cgas::Sampling::kBootstrap : cgas::Sampling::kWithoutReplacement;

  // Selection always runs without replacement; --rf-star only changes the final draw.
  auto select = config;
  select.sampling = cgas::Sampling::kWithoutReplacement;
  auto result = cgas::select_alpha(select, data);
  const auto ensemble = cgas::train_final(config, data, result.alpha_star);

  json table = json::array();
  for (std::size_t a = 0; a < result.grid.alphas.size(); ++a) {
    table.push_back({{"alpha", result.grid.alphas[a]}, {"fold_mse", result.cv_table[a]}, {"mean_mse", result.cv_means[a]}});
  }
  const json j = {{"alpha_star", result.alpha_star},
                  {"grid_branch", cgas::to_string(result.grid.branch)},
                  {"grid", result.grid.alphas},
                  {"cv_table", table},
                  {"learner", describe(config.learner)},
                  {"sampling", cgas::to_string(config.sampling)},
                  {"folds", config.folds},
                  {"search_members", config.search_members},
                  {"final_members", config.final_members},
                  {"subsample_size", cgas::subsample_size(result.alpha_star, data.rows())},
                  {"seed", config.seed},
                  {"rows", data.rows()},
                  {"features", data.cols()}};
  out << j.dump(2) << '\n';

  if (!o.model_out.empty()) {
    json members = json::array();
    for (const auto& m : ensemble.members()) {
      if (const auto* t = std::get_if<RegressionTree>(&m)) {
        members.push_back({{"nodes", tree_json(*t)}});
      } else {
        const auto& k = std::get<KnnModel>(m);
        members.push_back({{"neighbors", k.neighbors()}, {"rows", k.data().rows()}});
      }
    }
    std::ofstream f(o.model_out);
    if (!f) throw ParseError("cannot write '" + o.model_out + "'");
    f << json{{"learner", describe(config.learner)},
              {"alpha", result.alpha_star},
              {"sampling", cgas::to_string(config.sampling)},
              {"members", members}}
             .dump(2)
      << '\n';
  }
  return 0;
}

int run_bench(const BenchOptions& o, std::ostream& out) {
  const auto config = bench::BenchConfig::load(o.config);
  const auto report = bench::run_benchmark(config);
  bench::write_outputs(report, o.out);
  int failures = 0;
  for (const auto& cell : report.cells) {
    for (const auto& m : cell.methods) {
      for (const auto& r : m.records) failures += r.ok ? 0 : 1;
      out << fmt::format("{:<16} {:<12} {:<12} mse={:.6f} mae={:.6f}", cell.dataset, cell.regime, m.method,
                         m.mean_mse, m.mean_mae);
      if (m.wilcoxon_mse) out << fmt::format(" p_mse={:.4g}", m.wilcoxon_mse->p);
      out << '\n';
    }
  }
  if (failures > 0) spdlog::error("bench: {} fold records failed, see report.json", failures);
  return failures > 0 ? 1 : 0;
}

}  // namespace subag::cli
