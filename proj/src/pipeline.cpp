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

#include "peaked/pipeline.hpp"

#include "peaked/errors.hpp"
#include "peaked/rewrite.hpp"

namespace peaked {

Rng pipeline_rng(std::uint64_t seed, PipelineStream stream) {
  return make_stream(seed, static_cast<std::uint64_t>(stream));
}

std::string random_bitstring(int n, Rng& rng) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (char& ch : s) ch = (rng() >> 63) != 0 ? '1' : '0';
  return s;
}

EmbeddedCircuit build_embedded(int n_q, int n_l, const std::optional<std::string>& hidden,
                               std::uint64_t seed) {
  Rng half_rng = pipeline_rng(seed, PipelineStream::kHalf);
  const Circuit half = generate_random_half(n_q, n_l, half_rng);
  EmbeddedCircuit out;
  if (hidden) {
    out.hidden = *hidden;
  } else {
    Rng h = pipeline_rng(seed, PipelineStream::kHidden);
    out.hidden = random_bitstring(n_q, h);
  }
  if (static_cast<int>(out.hidden.size()) != n_q) {
    throw InvalidArgument("hidden string length does not match n_q");
  }
  Rng embed_rng = pipeline_rng(seed, PipelineStream::kEmbed);
  out.circuit = embed_hidden_string(build_mirror(half), out.hidden, embed_rng, &out.touched);
  return out;
}

Circuit finalize_circuit(const Circuit& obfuscated, const std::string& hidden, double delta,
                         std::uint64_t seed, bool merge) {
  Circuit c = merge ? merge_adjacent_u3(obfuscated) : obfuscated;
  Metadata m;
  m.hidden_string = hidden;
  m.delta_target = delta;
  m.seed = seed;
  c.metadata = m;
  return c;
}

PipelineResult generate_peaked(const PipelineConfig& cfg) {
  if (!(cfg.delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
  EmbeddedCircuit e = build_embedded(cfg.n_q, cfg.n_l, cfg.hidden, cfg.seed);
  PipelineResult r;
  r.hidden = e.hidden;
  r.touched = std::move(e.touched);
  r.embedded = cfg.entangler ? insert_entangler(e.circuit, *cfg.entangler) : e.circuit;
  Rng ob = pipeline_rng(cfg.seed, PipelineStream::kObfuscate);
  auto [obf, stats] = obfuscate_mirror(r.embedded, cfg.delta, ob, cfg.optimizer, cfg.threads);
  r.obfuscated = std::move(obf);
  r.stats = std::move(stats);
  r.circuit = finalize_circuit(r.obfuscated, r.hidden, cfg.delta, cfg.seed, cfg.merge);
  return r;
}

}  // namespace peaked
