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

#ifndef SUBAG_TOOLS_COMMANDS_HPP_
#define SUBAG_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace subag::cli {

struct SpectrumOptions {
  std::string kernel;
  std::string dist;
  int k = 1;
  std::vector<double> x;
};

struct VerifyOptions {
  std::string kernel;
  std::string dist;
  int n = 1;
  int k = 1;
  std::vector<double> x;
  double tolerance = 1e-10;
};

struct EnvelopeOptions {
  std::string params;
  std::string sweep;  // "sigmaM=lo:hi:count"
  std::string emit = "json";
  std::string form = "power_law";
  int points = 50;
  int grid = 512;
};

struct CgasOptions {
  std::string data;
  std::string target;
  std::string learner = "tree";
  std::string depth = "max";
  int neighbors = 1;
  int folds = 3;
  int search_members = 30;
  int final_members = 100;
  std::uint64_t seed = 0;
  bool rf_star = false;
  bool standardize = false;
  std::string model_out;
};

struct BenchOptions {
  std::string config;
  std::string out;
};

// Each returns the process exit code and writes its result to `out`.
int run_spectrum(const SpectrumOptions& o, std::ostream& out);
int run_verify(const VerifyOptions& o, std::ostream& out);
int run_envelope(const EnvelopeOptions& o, std::ostream& out);
int run_cgas(const CgasOptions& o, std::ostream& out);
int run_bench(const BenchOptions& o, std::ostream& out);

}  // namespace subag::cli

#endif  // SUBAG_TOOLS_COMMANDS_HPP_
