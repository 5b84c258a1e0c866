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

#ifndef SUBAG_BENCH_HPP_
#define SUBAG_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "subag/cgas.hpp"
#include "subag/dataset.hpp"
#include "subag/learners.hpp"

namespace subag::bench {

// Header row required. Rows keep file order.
Dataset ingest_csv(const std::filesystem::path& path, const std::string& target_column);

struct StandardizeTransform {
  std::vector<std::size_t> kept_features;
  std::vector<double> feature_mean;
  std::vector<double> feature_sd;
  double target_mean = 0.0;
  double target_sd = 1.0;

  // Zero-variance features are dropped with a warning; a zero-variance target throws.
  static StandardizeTransform fit(const Dataset& data);
  Dataset apply(const Dataset& data) const;
  double invert_target(double z) const { return target_mean + target_sd * z; }
};

std::pair<Dataset, StandardizeTransform> standardize(const Dataset& data);

// y + N(0, (multiplier * sigma_y)^2), sigma_y the sample sd of `data`'s targets.
Dataset inject_label_noise(const Dataset& data, double multiplier, std::uint64_t seed);
Dataset inject_label_noise(const Dataset& data, double multiplier, std::uint64_t seed, double sigma_y);

// y = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5 + N(0, noise_sd^2), x ~ U[0,1]^10.
Dataset make_friedman1(std::size_t n, double noise_sd, std::uint64_t seed);

enum class ZeroHandling { kDrop, kPratt };

struct WilcoxonOptions {
  ZeroHandling zeros = ZeroHandling::kDrop;
  int exact_max = 12;  // exact enumeration when the number of signed pairs is at most this
};

struct WilcoxonResult {
  double statistic = 0.0;  // sum of ranks of positive differences
  double p = 1.0;
  std::size_t n_used = 0;
  bool exact = false;
};

// One-sided signed-rank test of H1: baseline errors exceed cgas errors.
// Differences are baseline - cgas; tied magnitudes get mid-ranks.
WilcoxonResult wilcoxon_one_sided(std::span<const double> baseline, std::span<const double> cgas,
                                  const WilcoxonOptions& options = {});

enum class RegimeLevel { kLow, kHigh };

struct RegimeSpec {
  std::string name;
  RegimeLevel level = RegimeLevel::kLow;
  LearnerConfig learner = TreeConfig{3, 1};
  double noise_multiplier = 0.0;
};

struct DatasetSpec {
  std::string name;
  std::string generator;  // "friedman1" or empty for a CSV path
  std::size_t n = 2000;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  std::filesystem::path path;
  std::string target;
};

struct BenchConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<RegimeSpec> regimes;
  std::vector<std::string> methods = {"fixed_0.632", "fixed_0.8", "cgas"};
  int repeats = 5;
  int folds = 10;
  std::uint64_t seed = 0;
  int members = 100;         // fixed-ratio, RF and RF* ensembles
  int search_members = 30;   // CGAS pilot
  int final_members = 100;   // CGAS final
  int cgas_folds = 3;
  bool noisy_test_targets = true;
  ZeroHandling zeros = ZeroHandling::kDrop;

  static BenchConfig from_json(const nlohmann::json& j);
  static BenchConfig load(const std::filesystem::path& path);
  void validate() const;
};

struct FoldRecord {
  int repeat = 0;
  int fold = 0;
  bool ok = true;
  std::string error;
  double mse = 0.0;
  double mae = 0.0;
  std::optional<double> alpha;  // ratio the method trained with
};

struct MethodReport {
  std::string method;
  std::vector<FoldRecord> records;
  double mean_mse = 0.0;
  double mean_mae = 0.0;
  std::optional<WilcoxonResult> wilcoxon_mse;  // vs CGAS
  std::optional<WilcoxonResult> wilcoxon_mae;
};

struct CellReport {
  std::string dataset;
  std::string regime;
  RegimeLevel level = RegimeLevel::kLow;
  std::string learner;
  double noise_multiplier = 0.0;
  std::vector<MethodReport> methods;

  const MethodReport* find(const std::string& method) const;
};

struct EvalReport {
  BenchConfig config;
  std::vector<CellReport> cells;  // dataset-major, then regime
  double wall_seconds = 0.0;

  const CellReport* find(const std::string& dataset, const std::string& regime) const;
};

EvalReport run_benchmark(const BenchConfig& config);

// report.json stays free of timings so reruns compare byte for byte;
// wall-clock data goes to timing.json.
nlohmann::json to_json(const EvalReport& report);
void write_outputs(const EvalReport& report, const std::filesystem::path& out_dir);

}  // namespace subag::bench

#endif  // SUBAG_BENCH_HPP_
