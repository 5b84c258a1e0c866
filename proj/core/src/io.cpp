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

#include "subag/io.hpp"

#include <charconv>
#include <fstream>

#include "subag/errors.hpp"

namespace subag::io {
namespace {

using nlohmann::json;

std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, {}};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(what + ": cannot parse '" + text + "'");
  }
  return v;
}

Atom atom_from_json(const json& j) {
  if (j.is_number()) return Atom::scalar(j.get<double>());
  if (!j.is_object()) throw SchemaError("distribution: support entries must be numbers or {\"x\", \"y\"} objects");
  Atom a;
  if (j.contains("x")) {
    const auto& x = j.at("x");
    a.features = x.is_array() ? x.get<std::vector<double>>() : std::vector<double>{x.get<double>()};
  }
  a.target = j.at("y").get<double>();
  return a;
}

}  // namespace

SymmetricKernel parse_kernel(const std::string& spec, int arity, const std::vector<double>& x) {
  const auto [name, arg] = split_spec(spec);
  if (name == "constant") return kernels::constant(arity, arg.empty() ? 1.0 : parse_number<double>(arg, "constant"));
  if (name == "additive") return kernels::additive(arity);
  if (name == "mean") return kernels::mean(arity);
  if (name == "product") return kernels::product(arity);
  if (name == "pairwise_max") return kernels::pairwise_max(arity);
  if (name == "random") {
    return kernels::random_symmetric(arity, arg.empty() ? 0 : parse_number<std::uint64_t>(arg, "random seed"));
  }
  if (name == "tree") {
    TreeConfig c;
    if (!arg.empty() && arg != "max") c.max_depth = parse_number<int>(arg, "tree depth");
    return learner_as_kernel(c, x, arity);
  }
  if (name == "knn") return learner_as_kernel(KnnConfig{arg.empty() ? 1 : parse_number<int>(arg, "knn K")}, x, arity);
  throw ParseError("unknown kernel '" + spec + "'");
}

DiscreteDistribution distribution_from_json(const json& j) {
  if (!j.is_object() || !j.contains("support")) throw SchemaError("distribution: missing \"support\"");
  std::vector<Atom> support;
  for (const auto& s : j.at("support")) support.push_back(atom_from_json(s));
  if (!j.contains("probs")) return DiscreteDistribution::uniform(std::move(support));
  return DiscreteDistribution(std::move(support), j.at("probs").get<std::vector<double>>());
}

DiscreteDistribution load_distribution(const std::string& path_or_name) {
  if (path_or_name == "rademacher") return DiscreteDistribution::rademacher();
  return distribution_from_json(read_json_file(path_or_name));
}

EnvelopeInput envelope_from_json(const json& j) {
  if (j.contains("bimodal")) {
    const auto& b = j.at("bimodal");
    envelope::BimodalParams p;
    p.B0 = b.value("B0", p.B0);
    p.beta = b.value("beta", p.beta);
    p.n = b.value("n", p.n);
    p.sigma1_sq = b.value("sigma1_sq", p.sigma1_sq);
    p.sigmaM_sq = b.value("sigmaM_sq", p.sigmaM_sq);
    p.M = b.value("M", p.M);
    p.validate();
    return p;
  }
  envelope::EnvelopeParams p;
  p.B0 = j.at("B0").get<double>();
  p.beta = j.at("beta").get<double>();
  p.n = j.at("n").get<int>();
  p.spectrum = j.at("spectrum").get<std::vector<double>>();
  p.M = j.value("M", static_cast<int>(p.spectrum.size()));
  p.validate();
  return p;
}

envelope::BimodalForm parse_bimodal_form(const std::string& name) {
  if (name == "exact") return envelope::BimodalForm::kExact;
  if (name == "smooth") return envelope::BimodalForm::kSmooth;
  if (name == "power_law") return envelope::BimodalForm::kPowerLaw;
  throw ParseError("unknown bimodal form '" + name + "' (exact, smooth, power_law)");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

json to_json(const HoeffdingSpectrum& s) { return {{"theta", s.theta}, {"zetas", s.zetas}}; }

json to_json(const anova::ResidualSummary& r) {
  return {{"degeneracy", r.degeneracy}, {"orthogonality", r.orthogonality}, {"base_variance", r.base_variance}};
}

json to_json(const EnsembleVarianceReport& r) {
  return {{"brute_force_variance", r.brute_force_variance},
          {"closed_form_variance", r.closed_form_variance},
          {"per_order_terms", r.per_order_terms},
          {"residual", r.residual}};
}

}  // namespace subag::io
