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

#ifndef SUBAG_IO_HPP_
#define SUBAG_IO_HPP_

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "subag/anova.hpp"
#include "subag/distribution.hpp"
#include "subag/envelope.hpp"
#include "subag/kernel.hpp"
#include "subag/learners.hpp"
#include "subag/subag_engine.hpp"

// Text and JSON forms of the library's inputs and outputs, shared by the CLI
// and the test suites.
namespace subag::io {

// Kernel names: constant[:v], additive, mean, product, pairwise_max,
// random:<seed>, tree:<depth|max>, knn:<K>. Learner kernels need a test point.
SymmetricKernel parse_kernel(const std::string& spec, int arity, const std::vector<double>& x = {});

// {"support": [number | {"x": [..], "y": number}, ...], "probs": [...]};
// probs may be omitted for the uniform distribution.
DiscreteDistribution distribution_from_json(const nlohmann::json& j);
// A JSON file, or the built-in name "rademacher".
DiscreteDistribution load_distribution(const std::string& path_or_name);

using EnvelopeInput = std::variant<envelope::EnvelopeParams, envelope::BimodalParams>;

// {"B0", "beta", "n", "M", "spectrum"} or {"bimodal": {"B0", "beta", "n",
// "sigma1_sq", "sigmaM_sq", "M"}}.
EnvelopeInput envelope_from_json(const nlohmann::json& j);
envelope::BimodalForm parse_bimodal_form(const std::string& name);

nlohmann::json read_json_file(const std::filesystem::path& path);

nlohmann::json to_json(const HoeffdingSpectrum& s);
nlohmann::json to_json(const anova::ResidualSummary& r);
nlohmann::json to_json(const EnsembleVarianceReport& r);

}  // namespace subag::io

#endif  // SUBAG_IO_HPP_
