// Copyright 2026 The peaked-circuits Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peaked/circuit.hpp"
#include "peaked/obfuscator.hpp"
#include "peaked/optimize.hpp"

namespace peaked {

struct PipelineConfig {
  int n_q = 6;
  int n_l = 4;
  double delta = 0.0;
  std::optional<std::string> hidden;  // random when absent
  std::uint64_t seed = 1;
  OptimizerConfig optimizer;
  std::optional<std::array<int, 2>> entangler;  // double-peak variant
  bool merge = true;
  int threads = 1;
};

/// Circuit after the first two steps: random half, mirror, hidden string.
struct EmbeddedCircuit {
  Circuit circuit;
  std::string hidden;
  std::vector<BlockRef> touched;
};

/// RNG streams derived from the pipeline seed.
enum class PipelineStream : std::uint64_t {
  kHalf = 0,
  kHidden = 1,
  kEmbed = 2,
  kObfuscate = 3,
  kShrink = 4,
};
Rng pipeline_rng(std::uint64_t seed, PipelineStream stream);

std::string random_bitstring(int n, Rng& rng);

EmbeddedCircuit build_embedded(int n_q, int n_l, const std::optional<std::string>& hidden,
                               std::uint64_t seed);

struct PipelineResult {
  Circuit circuit;      // final circuit (metadata attached)
  Circuit embedded;     // before obfuscation, entangler included
  Circuit obfuscated;   // after obfuscation, before merging
  std::string hidden;
  DeviationStats stats;
  std::vector<BlockRef> touched;
};

/// half -> mirror -> embed -> (entangler) -> obfuscate mirror -> merge.
PipelineResult generate_peaked(const PipelineConfig& cfg);

/// Attaches metadata and merges: the tail of generate_peaked, shared with the
/// sweep drivers that reuse one obfuscator across many deltas.
Circuit finalize_circuit(const Circuit& obfuscated, const std::string& hidden, double delta,
                         std::uint64_t seed, bool merge);

}  // namespace peaked
