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

#ifndef SUBAG_SPECTRUM_HPP_
#define SUBAG_SPECTRUM_HPP_

#include <vector>

namespace subag {

// Hoeffding variance spectrum of a kernel at a fixed test point.
// zetas[c - 1] holds the variance of the c-th order canonical projection.
struct HoeffdingSpectrum {
  double theta = 0.0;
  std::vector<double> zetas;

  int order() const noexcept { return static_cast<int>(zetas.size()); }
  double zeta(int c) const { return zetas.at(static_cast<std::size_t>(c - 1)); }
};

}  // namespace subag

#endif  // SUBAG_SPECTRUM_HPP_
