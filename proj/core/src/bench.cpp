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

#include "subag/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <tbb/parallel_for.h>

#include "subag/errors.hpp"
#include "subag/random.hpp"

namespace subag::bench {
namespace {

using nlohmann::json;

constexpr std::uint64_t kFoldStream = 11;
constexpr std::uint64_t kTrainNoiseStream = 12;
constexpr std::uint64_t kTestNoiseStream = 13;
constexpr std::uint64_t kMemberStream = 14;
constexpr std::uint64_t kCgasStream = 15;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&key](const char* a) { return key == a; }) == allowed.end()) {
      throw SchemaError(where + ": unknown key '" + key + "'");
    }
  }
}

LearnerConfig learner_from_json(const json& j) {
  reject_unknown_keys(j, {"type", "max_depth", "min_leaf", "neighbors"}, "learner");
  const std::string type = j.at("type").get<std::string>();
  if (type == "tree") {
    TreeConfig c;
    if (j.contains("max_depth")) {
      const auto& d = j.at("max_depth");
      if (d.is_number_integer()) {
        c.max_depth = d.get<int>();
      } else if (!(d.is_null() || (d.is_string() && d.get<std::string>() == "max"))) {
        throw SchemaError("learner.max_depth must be an integer, \"max\" or null");
      }
    }
    c.min_leaf = j.value("min_leaf", 1);
    return c;
  }
  if (type == "knn") return KnnConfig{j.at("neighbors").get<int>()};
  throw SchemaError("learner.type must be \"tree\" or \"knn\", got '" + type + "'");
}

json learner_to_json(const LearnerConfig& l) {
  if (const auto* t = std::get_if<TreeConfig>(&l)) {
    return {{"type", "tree"},
            {"max_depth", t->max_depth ? json(*t->max_depth) : json("max")},
            {"min_leaf", t->min_leaf}};
  }
  return {{"type", "knn"}, {"neighbors", std::get<KnnConfig>(l).neighbors}};
}

std::optional<double> fixed_ratio(const std::string& method) {
  constexpr std::string_view prefix = "fixed_";
  if (method.rfind(prefix, 0) != 0) return std::nullopt;
  double a = 0.0;
  if (!parse_double(method.substr(prefix.size()), a) || !(a > 0.0 && a <= 1.0)) {
    throw SchemaError("method '" + method + "': ratio must lie in (0, 1]");
  }
  return a;
}

std::string level_name(RegimeLevel l) { return l == RegimeLevel::kLow ? "low" : "high"; }

Dataset load_dataset(const DatasetSpec& spec) {
  Dataset d = spec.generator == "friedman1" ? make_friedman1(spec.n, spec.noise_sd, spec.seed)
                                            : ingest_csv(spec.path, spec.target);
  d.validate();
  return d;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

json wilcoxon_json(const std::optional<WilcoxonResult>& w) {
  if (!w) return nullptr;
  return {{"statistic", w->statistic}, {"p", w->p}, {"n_used", w->n_used}, {"exact", w->exact}};
}

std::string num(double v) { return std::isfinite(v) ? fmt::format("{:.10g}", v) : std::string(); }

}  // namespace

Dataset ingest_csv(const std::filesystem::path& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("ingest_csv: cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("ingest_csv: '" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  const auto it = std::find(header.begin(), header.end(), target_column);
  if (it == header.end()) throw SchemaError("ingest_csv: target column '" + target_column + "' not found");
  const auto target_idx = static_cast<std::size_t>(it - header.begin());

  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != target_idx) names.push_back(header[j]);
  }
  if (names.empty()) throw SchemaError("ingest_csv: no feature columns");

  std::vector<double> features;
  std::vector<double> targets;
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(fmt::format("ingest_csv: line {} has {} fields, header has {}", line_no, cells.size(),
                                   header.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string cell = trim(cells[j]);
      double v = 0.0;
      if (!parse_double(cell, v)) {
        throw ParseError(fmt::format("ingest_csv: row {} (line {}), column '{}': non-numeric value '{}'", row + 1,
                                     line_no, header[j], cell));
      }
      if (!std::isfinite(v)) {
        throw SchemaError(fmt::format("ingest_csv: row {} (line {}), column '{}': NaN or infinite value", row + 1,
                                      line_no, header[j]));
      }
      (j == target_idx ? targets : features).push_back(v);
    }
    ++row;
  }
  if (row == 0) throw SchemaError("ingest_csv: no data rows");
  const std::size_t cols = names.size();
  return Dataset(row, cols, std::move(features), std::move(targets), std::move(names));
}

StandardizeTransform StandardizeTransform::fit(const Dataset& data) {
  if (data.rows() < 2) throw DomainError("standardize: need at least two rows");
  StandardizeTransform t;
  std::vector<double> col(data.rows());
  for (std::size_t j = 0; j < data.cols(); ++j) {
    for (std::size_t i = 0; i < data.rows(); ++i) col[i] = data.feature(i, j);
    const double sd = sample_sd(col);
    if (!(sd > 0.0)) {
      const std::string name = data.column_names().empty() ? std::to_string(j) : data.column_names()[j];
      spdlog::warn("standardize: feature '{}' has zero variance, dropped", name);
      continue;
    }
    t.kept_features.push_back(j);
    t.feature_mean.push_back(mean(col));
    t.feature_sd.push_back(sd);
  }
  if (t.kept_features.empty()) throw DomainError("standardize: every feature has zero variance");
  t.target_sd = sample_sd(data.targets());
  if (!(t.target_sd > 0.0)) throw DomainError("standardize: target has zero variance");
  t.target_mean = mean(data.targets());
  return t;
}

Dataset StandardizeTransform::apply(const Dataset& data) const {
  const std::size_t d = kept_features.size();
  std::vector<double> f;
  f.reserve(data.rows() * d);
  std::vector<double> y(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      f.push_back((data.feature(i, kept_features[j]) - feature_mean[j]) / feature_sd[j]);
    }
    y[i] = (data.target(i) - target_mean) / target_sd;
  }
  std::vector<std::string> names;
  if (!data.column_names().empty()) {
    for (std::size_t j : kept_features) names.push_back(data.column_names()[j]);
  }
  return Dataset(data.rows(), d, std::move(f), std::move(y), std::move(names));
}

std::pair<Dataset, StandardizeTransform> standardize(const Dataset& data) {
  auto t = StandardizeTransform::fit(data);
  Dataset z = t.apply(data);
  return {std::move(z), std::move(t)};
}

Dataset inject_label_noise(const Dataset& data, double multiplier, std::uint64_t seed) {
  return inject_label_noise(data, multiplier, seed, sample_sd(data.targets()));
}

Dataset inject_label_noise(const Dataset& data, double multiplier, std::uint64_t seed, double sigma_y) {
  if (!(multiplier >= 0.0)) throw DomainError("inject_label_noise: multiplier must be >= 0");
  if (multiplier == 0.0) return data;
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, multiplier * sigma_y);
  std::vector<double> y(data.targets().begin(), data.targets().end());
  for (double& v : y) v += noise(rng);
  return data.with_targets(std::move(y));
}

Dataset make_friedman1(std::size_t n, double noise_sd, std::uint64_t seed) {
  constexpr std::size_t d = 10;
  if (n == 0) throw DomainError("make_friedman1: n must be >= 1");
  if (!(noise_sd >= 0.0)) throw DomainError("make_friedman1: noise_sd must be >= 0");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, noise_sd > 0.0 ? noise_sd : 1.0);
  std::vector<double> f(n * d);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double* x = f.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) x[j] = unif(rng);
    y[i] = 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] +
           5.0 * x[4];
    if (noise_sd > 0.0) y[i] += noise(rng);
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
  return Dataset(n, d, std::move(f), std::move(y), std::move(names));
}

WilcoxonResult wilcoxon_one_sided(std::span<const double> baseline, std::span<const double> cgas,
                                  const WilcoxonOptions& options) {
  if (baseline.size() != cgas.size()) throw DomainError("wilcoxon_one_sided: vectors differ in length");
  std::vector<double> diff(baseline.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = baseline[i] - cgas[i];
  if (options.zeros == ZeroHandling::kDrop) {
    std::erase(diff, 0.0);
  }

  WilcoxonResult r;
  const auto nonzero = static_cast<std::size_t>(std::count_if(diff.begin(), diff.end(), [](double d) { return d != 0.0; }));
  if (nonzero == 0) {
    spdlog::warn("wilcoxon_one_sided: all differences are zero, p = 1");
    return r;
  }

  // Mid-ranks of |d|, zeros included under Pratt handling.
  std::vector<std::size_t> order(diff.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(diff[a]) < std::abs(diff[b]); });
  std::vector<double> rank(diff.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(diff[order[j + 1]]) == std::abs(diff[order[i]])) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = mid;
    i = j + 1;
  }

  std::vector<double> signed_ranks;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    if (diff[i] == 0.0) continue;
    signed_ranks.push_back(rank[i]);
    if (diff[i] > 0.0) r.statistic += rank[i];
  }
  r.n_used = signed_ranks.size();

  if (r.n_used <= static_cast<std::size_t>(options.exact_max)) {
    // Doubled mid-ranks are integers, so the enumeration compares exactly.
    std::vector<long long> twice(r.n_used);
    for (std::size_t i = 0; i < r.n_used; ++i) twice[i] = std::llround(2.0 * signed_ranks[i]);
    const long long observed = std::llround(2.0 * r.statistic);
    const std::uint64_t total = std::uint64_t{1} << r.n_used;
    std::uint64_t at_least = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      long long s = 0;
      for (std::size_t i = 0; i < r.n_used; ++i) {
        if (mask >> i & 1U) s += twice[i];
      }
      if (s >= observed) ++at_least;
    }
    r.p = static_cast<double>(at_least) / static_cast<double>(total);
    r.exact = true;
    return r;
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : signed_ranks) {
    sum += v;
    sum_sq += v * v;
  }
  const double mu = 0.5 * sum;
  const double sd = 0.5 * std::sqrt(sum_sq);
  const double z = (r.statistic - mu - 0.5) / sd;
  r.p = std::clamp(0.5 * std::erfc(z / std::numbers::sqrt2), std::numeric_limits<double>::min(), 1.0);
  return r;
}

BenchConfig BenchConfig::from_json(const json& j) {
  reject_unknown_keys(j, {"datasets", "regimes", "methods", "repeats", "folds", "seed", "members", "search_members",
                          "final_members", "cgas_folds", "noisy_test_targets", "zero_handling"},
                      "bench config");
  BenchConfig c;
  for (const auto& d : j.at("datasets")) {
    reject_unknown_keys(d, {"name", "generator", "n", "noise_sd", "seed", "path", "target"}, "dataset");
    DatasetSpec s;
    s.name = d.at("name").get<std::string>();
    s.generator = d.value("generator", std::string());
    if (!s.generator.empty() && s.generator != "friedman1") {
      throw SchemaError("dataset '" + s.name + "': unknown generator '" + s.generator + "'");
    }
    s.n = d.value("n", std::size_t{2000});
    s.noise_sd = d.value("noise_sd", 1.0);
    s.seed = d.value("seed", std::uint64_t{0});
    if (s.generator.empty()) {
      s.path = d.at("path").get<std::string>();
      s.target = d.at("target").get<std::string>();
    }
    c.datasets.push_back(std::move(s));
  }
  for (const auto& r : j.at("regimes")) {
    reject_unknown_keys(r, {"name", "level", "learner", "noise_multiplier"}, "regime");
    RegimeSpec s;
    s.name = r.at("name").get<std::string>();
    const std::string level = r.at("level").get<std::string>();
    if (level != "low" && level != "high") throw SchemaError("regime '" + s.name + "': level must be low or high");
    s.level = level == "low" ? RegimeLevel::kLow : RegimeLevel::kHigh;
    s.learner = learner_from_json(r.at("learner"));
    s.noise_multiplier = r.value("noise_multiplier", 0.0);
    c.regimes.push_back(std::move(s));
  }
  if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
  c.repeats = j.value("repeats", c.repeats);
  c.folds = j.value("folds", c.folds);
  c.seed = j.value("seed", c.seed);
  c.members = j.value("members", c.members);
  c.search_members = j.value("search_members", c.search_members);
  c.final_members = j.value("final_members", c.final_members);
  c.cgas_folds = j.value("cgas_folds", c.cgas_folds);
  c.noisy_test_targets = j.value("noisy_test_targets", c.noisy_test_targets);
  const std::string zeros = j.value("zero_handling", std::string("drop"));
  if (zeros != "drop" && zeros != "pratt") throw SchemaError("zero_handling must be drop or pratt");
  c.zeros = zeros == "drop" ? ZeroHandling::kDrop : ZeroHandling::kPratt;
  c.validate();
  return c;
}

BenchConfig BenchConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("bench config: cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("bench config '" + path.string() + "': " + e.what());
  }
  BenchConfig c = from_json(j);
  for (auto& d : c.datasets) {
    if (d.generator.empty() && d.path.is_relative()) d.path = path.parent_path() / d.path;
  }
  return c;
}

void BenchConfig::validate() const {
  if (datasets.empty()) throw SchemaError("bench config: no datasets");
  if (regimes.empty()) throw SchemaError("bench config: no regimes");
  if (methods.empty()) throw SchemaError("bench config: no methods");
  if (repeats < 1) throw SchemaError("bench config: repeats must be >= 1");
  if (folds < 2) throw SchemaError("bench config: folds must be >= 2");
  if (members < 1 || search_members < 1 || final_members < 1) throw SchemaError("bench config: member counts must be >= 1");
  if (cgas_folds < 2) throw SchemaError("bench config: cgas_folds must be >= 2");
  const bool has_cgas = std::find(methods.begin(), methods.end(), "cgas") != methods.end();
  for (const auto& m : methods) {
    if (m == "cgas" || m == "rf") continue;
    if (m == "rf_star") {
      if (!has_cgas) throw SchemaError("bench config: rf_star needs cgas in methods");
      continue;
    }
    if (!fixed_ratio(m)) throw SchemaError("bench config: unknown method '" + m + "'");
  }
  for (const auto& r : regimes) {
    if (!(r.noise_multiplier >= 0.0)) throw SchemaError("regime '" + r.name + "': noise_multiplier must be >= 0");
  }
}

const MethodReport* CellReport::find(const std::string& method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

const CellReport* EvalReport::find(const std::string& dataset, const std::string& regime) const {
  for (const auto& c : cells) {
    if (c.dataset == dataset && c.regime == regime) return &c;
  }
  return nullptr;
}

EvalReport run_benchmark(const BenchConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<Dataset> data;
  for (const auto& spec : config.datasets) {
    data.push_back(load_dataset(spec));
    if (data.back().rows() < static_cast<std::size_t>(config.folds)) {
      throw SchemaError("dataset '" + spec.name + "' has fewer rows than folds");
    }
  }

  const auto n_data = config.datasets.size();
  const auto n_regime = config.regimes.size();
  const auto repeats = static_cast<std::size_t>(config.repeats);
  const auto folds = static_cast<std::size_t>(config.folds);
  const auto n_method = config.methods.size();

  std::vector<std::vector<std::vector<std::size_t>>> splits(n_data * repeats);
  for (std::size_t d = 0; d < n_data; ++d) {
    for (std::size_t r = 0; r < repeats; ++r) {
      splits[d * repeats + r] = cgas::make_folds(data[d].rows(), config.folds, derive_seed(config.seed, {kFoldStream, d, r}));
    }
  }

  const std::size_t n_tasks = n_data * n_regime * repeats * folds;
  std::vector<std::vector<FoldRecord>> results(n_tasks, std::vector<FoldRecord>(n_method));
  const auto cgas_pos = static_cast<std::size_t>(
      std::find(config.methods.begin(), config.methods.end(), "cgas") - config.methods.begin());

  tbb::parallel_for(std::size_t{0}, n_tasks, [&](std::size_t task) {
    const std::size_t f = task % folds;
    const std::size_t r = task / folds % repeats;
    const std::size_t g = task / (folds * repeats) % n_regime;
    const std::size_t d = task / (folds * repeats * n_regime);
    const RegimeSpec& regime = config.regimes[g];
    auto& out = results[task];
    for (std::size_t m = 0; m < n_method; ++m) {
      out[m].repeat = static_cast<int>(r);
      out[m].fold = static_cast<int>(f);
    }

    try {
      const auto& held = splits[d * repeats + r][f];
      std::vector<char> is_held(data[d].rows(), 0);
      for (std::size_t i : held) is_held[i] = 1;
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < data[d].rows(); ++i) {
        if (!is_held[i]) rest.push_back(i);
      }
      Dataset train = data[d].subset(rest);
      Dataset test = data[d].subset(held);
      if (regime.noise_multiplier > 0.0) {
        const double sigma_y = sample_sd(train.targets());
        train = inject_label_noise(train, regime.noise_multiplier, derive_seed(config.seed, {kTrainNoiseStream, d, g, r, f}),
                                   sigma_y);
        if (config.noisy_test_targets) {
          test = inject_label_noise(test, regime.noise_multiplier, derive_seed(config.seed, {kTestNoiseStream, d, g, r, f}),
                                    sigma_y);
        }
      }
      const auto transform = StandardizeTransform::fit(train);
      train = transform.apply(train);
      test = transform.apply(test);

      const std::uint64_t member_seed = derive_seed(config.seed, {kMemberStream, d, g, r, f});
      std::optional<double> alpha_star;
      auto score = [&](FoldRecord& rec, const cgas::Ensemble& model, double alpha) {
        const auto pred = model.predict(test);
        rec.mse = cgas::mse(pred, test.targets());
        rec.mae = cgas::mae(pred, test.targets());
        rec.alpha = alpha;
      };

      if (cgas_pos < n_method) {
        auto& rec = out[cgas_pos];
        try {
          cgas::CgasConfig cc;
          cc.learner = regime.learner;
          cc.search_members = config.search_members;
          cc.final_members = config.final_members;
          cc.folds = config.cgas_folds;
          cc.seed = derive_seed(config.seed, {kCgasStream, d, g, r, f});
          const auto result = cgas::run_cgas(cc, train);
          alpha_star = result.alpha_star;
          score(rec, *result.ensemble, result.alpha_star);
        } catch (const std::exception& e) {
          rec.ok = false;
          rec.error = e.what();
        }
      }

      for (std::size_t m = 0; m < n_method; ++m) {
        if (m == cgas_pos) continue;
        const std::string& method = config.methods[m];
        auto& rec = out[m];
        try {
          if (method == "rf") {
            score(rec, cgas::train_ensemble(regime.learner, train, 1.0, config.members, cgas::Sampling::kBootstrap, member_seed),
                  1.0);
          } else if (method == "rf_star") {
            if (!alpha_star) throw std::runtime_error("CGAS failed, no alpha for rf_star");
            score(rec,
                  cgas::train_ensemble(regime.learner, train, *alpha_star, config.members, cgas::Sampling::kBootstrap,
                                       member_seed),
                  *alpha_star);
          } else {
            const double a = *fixed_ratio(method);
            score(rec,
                  cgas::train_ensemble(regime.learner, train, a, config.members, cgas::Sampling::kWithoutReplacement,
                                       member_seed),
                  a);
          }
        } catch (const std::exception& e) {
          rec.ok = false;
          rec.error = e.what();
        }
      }
    } catch (const std::exception& e) {
      for (auto& rec : out) {
        rec.ok = false;
        rec.error = e.what();
      }
    }
  });

  EvalReport report;
  report.config = config;
  for (std::size_t d = 0; d < n_data; ++d) {
    for (std::size_t g = 0; g < n_regime; ++g) {
      CellReport cell;
      cell.dataset = config.datasets[d].name;
      cell.regime = config.regimes[g].name;
      cell.level = config.regimes[g].level;
      cell.learner = describe(config.regimes[g].learner);
      cell.noise_multiplier = config.regimes[g].noise_multiplier;
      for (std::size_t m = 0; m < n_method; ++m) {
        MethodReport mr;
        mr.method = config.methods[m];
        std::vector<double> mses;
        std::vector<double> maes;
        for (std::size_t r = 0; r < repeats; ++r) {
          for (std::size_t f = 0; f < folds; ++f) {
            const auto& rec = results[((d * n_regime + g) * repeats + r) * folds + f][m];
            mr.records.push_back(rec);
            if (rec.ok) {
              mses.push_back(rec.mse);
              maes.push_back(rec.mae);
            }
          }
        }
        mr.mean_mse = mean_of(mses);
        mr.mean_mae = mean_of(maes);
        cell.methods.push_back(std::move(mr));
      }
      if (cgas_pos < n_method) {
        const auto& ref = cell.methods[cgas_pos].records;
        for (std::size_t m = 0; m < n_method; ++m) {
          if (m == cgas_pos) continue;
          auto& mr = cell.methods[m];
          std::vector<double> base_mse, base_mae, ref_mse, ref_mae;
          for (std::size_t i = 0; i < ref.size(); ++i) {
            if (!ref[i].ok || !mr.records[i].ok) continue;
            base_mse.push_back(mr.records[i].mse);
            base_mae.push_back(mr.records[i].mae);
            ref_mse.push_back(ref[i].mse);
            ref_mae.push_back(ref[i].mae);
          }
          const WilcoxonOptions opts{config.zeros, 12};
          mr.wilcoxon_mse = wilcoxon_one_sided(base_mse, ref_mse, opts);
          mr.wilcoxon_mae = wilcoxon_one_sided(base_mae, ref_mae, opts);
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json to_json(const EvalReport& report) {
  const auto& c = report.config;
  json header = {
      {"preprocessing", "features and target z-scored with training-fold statistics; metrics in standardized units"},
      {"label_noise",
       c.noisy_test_targets ? "N(0, (m * sigma_y)^2) added to training and held-out targets; sigma_y from the clean training fold"
                            : "N(0, (m * sigma_y)^2) added to training targets only; sigma_y from the clean training fold"},
      {"wilcoxon", {{"alternative", "baseline error > cgas error"},
                    {"zero_handling", c.zeros == ZeroHandling::kDrop ? "drop" : "pratt"}}},
      {"seed", c.seed},
      {"repeats", c.repeats},
      {"folds", c.folds},
      {"members", c.members},
      {"search_members", c.search_members},
      {"final_members", c.final_members},
      {"cgas_folds", c.cgas_folds},
      {"methods", c.methods},
  };
  json datasets = json::array();
  for (const auto& d : c.datasets) {
    json dj = {{"name", d.name}};
    if (d.generator.empty()) {
      dj["path"] = d.path.string();
      dj["target"] = d.target;
    } else {
      dj["generator"] = d.generator;
      dj["n"] = d.n;
      dj["noise_sd"] = d.noise_sd;
      dj["seed"] = d.seed;
    }
    datasets.push_back(std::move(dj));
  }
  header["datasets"] = std::move(datasets);
  json regimes = json::array();
  for (const auto& r : c.regimes) {
    regimes.push_back({{"name", r.name},
                       {"level", level_name(r.level)},
                       {"learner", learner_to_json(r.learner)},
                       {"noise_multiplier", r.noise_multiplier}});
  }
  header["regimes"] = std::move(regimes);

  json cells = json::array();
  for (const auto& cell : report.cells) {
    json methods = json::array();
    json alphas = json::array();
    for (const auto& m : cell.methods) {
      json records = json::array();
      for (const auto& rec : m.records) {
        json rj = {{"repeat", rec.repeat}, {"fold", rec.fold}, {"status", rec.ok ? "ok" : "failed"}};
        if (rec.ok) {
          rj["mse"] = rec.mse;
          rj["mae"] = rec.mae;
          rj["alpha"] = rec.alpha ? json(*rec.alpha) : json(nullptr);
        } else {
          rj["error"] = rec.error;
        }
        records.push_back(std::move(rj));
        if (m.method == "cgas") {
          alphas.push_back({{"repeat", rec.repeat}, {"fold", rec.fold}, {"alpha_star", rec.ok ? json(*rec.alpha) : json(nullptr)}});
        }
      }
      methods.push_back({{"method", m.method},
                         {"mean_mse", std::isfinite(m.mean_mse) ? json(m.mean_mse) : json(nullptr)},
                         {"mean_mae", std::isfinite(m.mean_mae) ? json(m.mean_mae) : json(nullptr)},
                         {"wilcoxon_mse_vs_cgas", wilcoxon_json(m.wilcoxon_mse)},
                         {"wilcoxon_mae_vs_cgas", wilcoxon_json(m.wilcoxon_mae)},
                         {"records", std::move(records)}});
    }
    cells.push_back({{"dataset", cell.dataset},
                     {"regime", cell.regime},
                     {"level", level_name(cell.level)},
                     {"learner", cell.learner},
                     {"noise_multiplier", cell.noise_multiplier},
                     {"alpha_star", std::move(alphas)},
                     {"methods", std::move(methods)}});
  }
  return {{"header", std::move(header)}, {"cells", std::move(cells)}};
}

void write_outputs(const EvalReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto open = [&out_dir](const char* name) {
    std::ofstream f(out_dir / name);
    if (!f) throw ParseError("cannot write '" + (out_dir / name).string() + "'");
    return f;
  };
  {
    auto f = open("report.json");
    f << to_json(report).dump(2) << '\n';
  }
  {
    auto f = open("summary.csv");
    f << "dataset,regime,method,mse,mae,p_mse,p_mae\n";
    for (const auto& cell : report.cells) {
      for (const auto& m : cell.methods) {
        f << cell.dataset << ',' << cell.regime << ',' << m.method << ',' << num(m.mean_mse) << ',' << num(m.mean_mae)
          << ',' << (m.wilcoxon_mse ? num(m.wilcoxon_mse->p) : "") << ','
          << (m.wilcoxon_mae ? num(m.wilcoxon_mae->p) : "") << '\n';
      }
    }
  }
  {
    auto f = open("alpha_shift.csv");
    f << "dataset,regime,level,repeat,fold,alpha_star\n";
    for (const auto& cell : report.cells) {
      const auto* m = cell.find("cgas");
      if (!m) continue;
      for (const auto& rec : m->records) {
        f << cell.dataset << ',' << cell.regime << ',' << level_name(cell.level) << ',' << rec.repeat << ',' << rec.fold
          << ',' << (rec.ok && rec.alpha ? num(*rec.alpha) : "") << '\n';
      }
    }
  }
  {
    auto f = open("timing.json");
    f << json{{"wall_seconds", report.wall_seconds}}.dump(2) << '\n';
  }
}

}  // namespace subag::bench
