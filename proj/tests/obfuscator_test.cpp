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

#include <gtest/gtest.h>

#include "peaked/errors.hpp"
#include "peaked/obfuscator.hpp"
#include "peaked/pipeline.hpp"
#include "peaked/statevector.hpp"

namespace peaked {
namespace {

Mat4 random_target(Rng& rng) {
  Block b = identity_block(0, 1);
  for (auto& a : b.angles) a = {uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)};
  b.phase = uniform_angle(rng);
  return block_matrix(b);
}

TEST(Obfuscator, SynthesisReachesTightFloor) {
  Rng rng = make_stream(51, 0);
  for (int k = 0; k < 5; ++k) {
    const Mat4 target = random_target(rng);
    const SynthesisResult r = synthesize_block(target, rng, OptimizerConfig{});
    EXPECT_LT(r.achieved, 1e-8);
    EXPECT_NEAR(deviation(block_matrix(r.block), target), r.achieved, 1e-12);
    EXPECT_EQ(r.block.layout, Layout::kStandard);
  }
}

TEST(Obfuscator, ResynthesisLandsInBand) {
  Rng rng = make_stream(52, 0);
  for (double delta : {0.001, 0.003, 0.01}) {
    for (int k = 0; k < 4; ++k) {
      const Mat4 target = random_target(rng);
      const SynthesisResult r = resynthesize_block(target, delta, rng, OptimizerConfig{});
      EXPECT_NEAR(r.achieved, delta, 0.01 * delta + 1e-12);
      EXPECT_LE(r.base_deviation, r.achieved);
    }
  }
}

TEST(Obfuscator, ResynthesisReportsParameterDistance) {
  Rng rng = make_stream(53, 0);
  Block original = identity_block(0, 1);
  for (auto& a : original.angles) a = {uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)};
  const SynthesisResult r =
      resynthesize_block(block_matrix(original), 0.003, rng, OptimizerConfig{}, &original);
  EXPECT_GE(r.param_distance, 0.0);
}

TEST(Obfuscator, StarvedOptimizerFailsLoudly) {
  Rng rng = make_stream(54, 0);
  OptimizerConfig cfg;
  cfg.max_evaluations = 2;
  cfg.restarts = 1;
  EXPECT_THROW(resynthesize_block(random_target(rng), 0.001, rng, cfg), SynthesisFailure);
}

TEST(Obfuscator, PerturbationLeavesFarBlocksAlone) {
  Rng rng = make_stream(55, 0);
  const Mat4 target = random_target(rng);
  Block far = identity_block(0, 1);
  const SynthesisResult r = perturb_block(target, far, 0.01, random_direction(rng));
  EXPECT_EQ(r.block.angles, far.angles);
  EXPECT_NEAR(r.achieved, deviation(block_matrix(far), target), 1e-15);
}

TEST(Obfuscator, RandomDirectionRange) {
  Rng rng = make_stream(56, 0);
  const auto d = random_direction(rng);
  ASSERT_EQ(d.size(), 18u);
  for (double v : d) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Obfuscator, MirrorObfuscatorTouchesOnlyMirrorHalf) {
  const EmbeddedCircuit e = build_embedded(6, 3, std::string("100110"), 9);
  MirrorObfuscator obf(e.circuit, 77, OptimizerConfig{});
  EXPECT_EQ(obf.mirror_block_count(), 9u);
  const auto [c, stats] = obf.apply(0.003);
  EXPECT_EQ(stats.per_block.size(), 9u);
  EXPECT_NEAR(stats.mean, 0.003, 0.0003);
  for (int l = 0; l < e.circuit.half_depth; ++l)
    for (std::size_t s = 0; s < c.layers[l].size(); ++s)
      EXPECT_EQ(c.layers[l][s].angles, e.circuit.layers[l][s].angles);
  // Same seed, same result; a second delta reuses the cached syntheses.
  MirrorObfuscator again(e.circuit, 77, OptimizerConfig{});
  EXPECT_EQ(again.apply(0.003).first.layers[5][0].angles, c.layers[5][0].angles);
  const auto [c2, stats2] = obf.apply(0.01);
  EXPECT_NEAR(stats2.mean, 0.01, 0.001);
}

TEST(Obfuscator, SymmetryScanSeesIdealMirror) {
  Rng rng = make_stream(57, 0);
  const Circuit c = build_mirror(generate_random_half(6, 3, rng));
  const auto scan = mirror_symmetry_scan(c);
  EXPECT_EQ(scan.size(), 9u);
  for (const auto& p : scan) EXPECT_LT(p.deviation, 1e-12);
}

TEST(Obfuscator, DeviationStats) {
  const DeviationStats s = DeviationStats::from({0.1, 0.3, 0.2});
  EXPECT_NEAR(s.mean, 0.2, 1e-15);
  EXPECT_EQ(s.max, 0.3);
}

TEST(Obfuscator, TailReductionDropsALayerAndKeepsThePeak) {
  PipelineConfig cfg;
  cfg.n_q = 6;
  cfg.n_l = 4;
  cfg.seed = 21;
  const PipelineResult g = generate_peaked(cfg);
  Rng rng = pipeline_rng(cfg.seed, PipelineStream::kShrink);
  const ReductionResult r = reduce_tail_group(g.circuit, {bits_to_index(g.hidden)}, rng);
  EXPECT_EQ(r.circuit.layers.size() + 1, g.circuit.layers.size());
  EXPECT_LE(r.rms_error, 0.5);
  const auto report = peak_report(probabilities(run_statevector(r.circuit)), 6);
  EXPECT_EQ(report.peak_string, g.hidden);
}

TEST(Obfuscator, TailReductionFailsBelowTolerance) {
  Rng rng = make_stream(58, 0);
  const Circuit c = build_mirror(generate_random_half(6, 4, rng));
  ReductionConfig rc;
  rc.tolerance = 1e-9;
  rc.optimizer.max_evaluations = 200;
  rc.optimizer.restarts = 1;
  EXPECT_THROW(reduce_tail_group(c, {0, 5, 17}, rng, rc), ReductionFailure);
}

TEST(Obfuscator, TailReductionRejectsBadArguments) {
  Rng rng = make_stream(59, 0);
  const Circuit c = build_mirror(generate_random_half(6, 2, rng));
  ReductionConfig rc;
  rc.depth = 1;
  EXPECT_THROW(reduce_tail_group(c, {0}, rng, rc), InvalidArgument);
  EXPECT_THROW(reduce_tail_group(c, {}, rng), InvalidArgument);
  EXPECT_THROW(reduce_tail_group(c, {64}, rng), InvalidArgument);
}

}  // namespace
}  // namespace peaked
