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

#include "subag/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "subag/errors.hpp"

namespace subag {

bool canonical_less(const Atom& a, const Atom& b) { return (a <=> b) == std::partial_ordering::less; }

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> support, std::vector<double> probs) {
  if (support.empty()) throw DomainError("DiscreteDistribution: empty support");
  if (support.size() != probs.size()) {
    throw DomainError("DiscreteDistribution: support and probs differ in length");
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!(probs[i] > 0.0) || !std::isfinite(probs[i])) {
      throw DomainError("DiscreteDistribution: probability " + std::to_string(i) + " is not strictly positive");
    }
    if (!std::isfinite(support[i].target) ||
        !std::all_of(support[i].features.begin(), support[i].features.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw DomainError("DiscreteDistribution: atom " + std::to_string(i) + " is not finite");
    }
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    throw DomainError("DiscreteDistribution: probabilities sum to " + std::to_string(total));
  }

  // Merge duplicates, keeping first-occurrence order.
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto it = std::find(support_.begin(), support_.end(), support[i]);
    if (it == support_.end()) {
      support_.push_back(std::move(support[i]));
      probs_.push_back(probs[i]);
    } else {
      spdlog::warn("DiscreteDistribution: duplicate atom {} merged", i);
      probs_[static_cast<std::size_t>(it - support_.begin())] += probs[i];
    }
  }
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<Atom> support) {
  const std::size_t m = support.size();
  std::vector<double> probs(m, m == 0 ? 0.0 : 1.0 / static_cast<double>(m));
  return DiscreteDistribution(std::move(support), std::move(probs));
}

DiscreteDistribution DiscreteDistribution::rademacher() {
  return DiscreteDistribution({Atom::scalar(-1.0), Atom::scalar(1.0)}, {0.5, 0.5});
}

}  // namespace subag
