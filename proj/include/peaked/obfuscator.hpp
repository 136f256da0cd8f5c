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

#include <cstdint>
#include <utility>
#include <vector>

#include "peaked/circuit.hpp"
#include "peaked/linalg.hpp"
#include "peaked/optimize.hpp"
#include "peaked/rng.hpp"

namespace peaked {

struct DeviationStats {
  std::vector<double> per_block;  // one entry per re-synthesized mirror block
  double mean = 0.0;
  double max = 0.0;

  static DeviationStats from(std::vector<double> values);
};

struct SynthesisResult {
  Block block;
  double achieved = 0.0;        // deviation(block_matrix(block), target)
  double base_deviation = 0.0;  // floor reached before the perturbation pass
  double param_distance = -1.0; // max angle difference to `original`, -1 if none given
  int evaluations = 0;
};

/// Fits a standard block to `target` from fresh uniform random starts
/// (cfg.restarts of them, stopping early once the floor is reached). The
/// global phase is fitted in closed form and stored in the block.
SynthesisResult synthesize_block(const Mat4& target, Rng& rng, const OptimizerConfig& cfg);

/// Moves `base` along `direction` (18 entries) by a bisected amplitude so its
/// deviation from `target` lands within 1% of delta_target. Leaves the block
/// unchanged when its deviation is already >= delta_target.
SynthesisResult perturb_block(const Mat4& target, const Block& base, double delta_target,
                              const std::vector<double>& direction);

/// Uniform noise direction in [-1, 1]^18.
std::vector<double> random_direction(Rng& rng);

/// synthesize_block followed by perturb_block with a direction drawn from
/// `rng`. Throws SynthesisFailure when delta_target > 0 and the result is
/// further than 1.5 * delta_target from the target.
SynthesisResult resynthesize_block(const Mat4& target, double delta_target, Rng& rng,
                                   const OptimizerConfig& cfg, const Block* original = nullptr);

/// Re-synthesizes every mirror-half block of a circuit. Base syntheses are
/// computed once and cached, so calling apply() for many deltas (as the
/// threshold bisection does) only repeats the cheap perturbation pass.
/// Block i of the mirror half uses RNG stream i of the master seed.
class MirrorObfuscator {
 public:
  MirrorObfuscator(Circuit c, std::uint64_t master_seed, OptimizerConfig cfg, int threads = 1);

  std::pair<Circuit, DeviationStats> apply(double delta_target);

  std::size_t mirror_block_count() const { return refs_.size(); }

 private:
  void ensure_base();

  Circuit circuit_;
  std::uint64_t master_;
  OptimizerConfig cfg_;
  int threads_;
  std::vector<BlockRef> refs_;
  std::vector<Mat4> targets_;
  std::vector<Block> base_;
  std::vector<std::vector<double>> directions_;
};

std::pair<Circuit, DeviationStats> obfuscate_mirror(const Circuit& c, double delta_target, Rng& rng,
                                                    const OptimizerConfig& cfg, int threads = 1);

/// deviation(M_i, M_partner^dagger) for every first-half block and its
/// mirror-position partner. Requires exactly 2 * half_depth layers.
struct SymmetryPair {
  BlockRef first;
  BlockRef partner;
  double deviation = 0.0;
};
std::vector<SymmetryPair> mirror_symmetry_scan(const Circuit& c);

struct ReductionConfig {
  int depth = 3;          // trailing layers in the group; the template keeps depth - 1
  double tolerance = 0.5; // max RMS over rows of the row-vector error norm
  OptimizerConfig optimizer{20000, 0.5, 1e-12, 3, OptimizerMethod::kBfgs};
};

struct ReductionResult {
  Circuit circuit;
  double rms_error = 0.0;
  int evaluations = 0;
};

/// Replaces the last `depth` layers (all blocks, full width) by a template
/// with the same structure minus the final layer, fitted so that rows `rows`
/// of the group operator are reproduced up to one global phase. The first
/// start uses the group's own leading angles, later ones are random.
/// Throws ReductionFailure when the RMS row error exceeds the tolerance.
ReductionResult reduce_tail_group(const Circuit& c, const std::vector<std::uint64_t>& rows,
                                  Rng& rng, const ReductionConfig& cfg = {});

}  // namespace peaked
