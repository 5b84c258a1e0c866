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

#include <exception>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("subag"));

  CLI::App app{"Exact subagging variance theory and adaptive subsampling"};
  app.require_subcommand(1);
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Errors only");

  subag::cli::SpectrumOptions spectrum;
  auto* sp = app.add_subcommand("spectrum", "Hoeffding spectrum of a kernel under a discrete distribution");
  sp->add_option("--kernel", spectrum.kernel, "constant[:v], additive, mean, product, pairwise_max, random:<seed>, "
                                              "tree:<depth|max>, knn:<K>")
      ->required();
  sp->add_option("--dist", spectrum.dist, "Distribution JSON file or 'rademacher'")->required();
  sp->add_option("--k", spectrum.k, "Kernel arity")->required()->check(CLI::PositiveNumber);
  sp->add_option("--x", spectrum.x, "Test point for learner kernels")->delimiter(',');

  subag::cli::VerifyOptions verify;
  auto* vp = app.add_subcommand("verify", "Brute-force check of the exact ensemble variance identity");
  vp->add_option("--kernel", verify.kernel, "Kernel name, as for spectrum")->required();
  vp->add_option("--dist", verify.dist, "Distribution JSON file or 'rademacher'")->required();
  vp->add_option("--n", verify.n, "Sample size")->required()->check(CLI::PositiveNumber);
  vp->add_option("--k", verify.k, "Subsample size")->required()->check(CLI::PositiveNumber);
  vp->add_option("--x", verify.x, "Test point for learner kernels")->delimiter(',');
  vp->add_option("--tolerance", verify.tolerance, "Maximum absolute residual")->capture_default_str();

  subag::cli::EnvelopeOptions env;
  auto* ep = app.add_subcommand("envelope", "MSE envelope and optimal subsampling ratio");
  ep->add_option("--params", env.params, "Envelope parameter JSON file")->required();
  ep->add_option("--sweep", env.sweep, "sigmaM=lo:hi:count (bimodal parameters only)");
  ep->add_option("--emit", env.emit, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  ep->add_option("--form", env.form, "Bimodal attenuation: exact, smooth, power_law")
      ->check(CLI::IsMember({"exact", "smooth", "power_law"}))
      ->capture_default_str();
  ep->add_option("--points", env.points, "Curve points")->capture_default_str();
  ep->add_option("--grid", env.grid, "Solver grid size")->capture_default_str();

  subag::cli::CgasOptions cg;
  auto* cp = app.add_subcommand("cgas", "Complexity-guided selection of the subsampling ratio");
  cp->add_option("--data", cg.data, "CSV file with a header row")->required();
  cp->add_option("--target", cg.target, "Target column name")->required();
  cp->add_option("--learner", cg.learner, "tree or knn")->check(CLI::IsMember({"tree", "knn"}))->capture_default_str();
  cp->add_option("--depth", cg.depth, "Tree depth or 'max'")->capture_default_str();
  cp->add_option("--neighbors", cg.neighbors, "KNN K")->capture_default_str();
  cp->add_option("--k-folds", cg.folds, "Internal folds")->capture_default_str();
  cp->add_option("--search-members", cg.search_members, "Pilot ensemble size")->capture_default_str();
  cp->add_option("--final-members", cg.final_members, "Final ensemble size")->capture_default_str();
  cp->add_option("--seed", cg.seed, "Master seed")->capture_default_str();
  cp->add_flag("--rf-star", cg.rf_star, "Train the final ensemble with bootstrap draws of size floor(alpha* n)");
  cp->add_flag("--standardize", cg.standardize, "z-score features and target first");
  cp->add_option("--model-out", cg.model_out, "Write the final ensemble description as JSON");

  subag::cli::BenchOptions bo;
  auto* bp = app.add_subcommand("bench", "Repeated K-fold comparison of CGAS and fixed-ratio baselines");
  bp->add_option("--config", bo.config, "Benchmark config JSON")->required()->check(CLI::ExistingFile);
  bp->add_option("--out", bo.out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::err : spdlog::level::info);

  try {
    if (*sp) return subag::cli::run_spectrum(spectrum, std::cout);
    if (*vp) return subag::cli::run_verify(verify, std::cout);
    if (*ep) return subag::cli::run_envelope(env, std::cout);
    if (*cp) return subag::cli::run_cgas(cg, std::cout);
    if (*bp) return subag::cli::run_bench(bo, std::cout);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
