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
#include "peaked/linalg.hpp"
#include "peaked/rng.hpp"
#include "peaked/statevector.hpp"

namespace peaked {

/// Site q holds the two (left-bond x right-bond) matrices A[0], A[1] of qubit q.
struct MPSState {
  int n_q = 0;
  int chi_cap = 1;
  std::vector<std::array<MatX, 2>> sites;
  double cumulative_truncation = 0.0;  // sum of discarded squared singular values
  int canonical_center = 0;

  int max_bond() const;
};

MPSState mps_zero_state(int n_q, int chi);

/// Moves the orthogonality center with QR sweeps.
void mps_move_center(MPSState& m, int site);

void mps_apply_one(MPSState& m, int q, const Mat2& u);

/// Applies a two-qubit operator (local index: bit of a + 2 * bit of b).
/// Non-adjacent pairs are brought together by a chain of SWAPs and moved back.
void mps_apply_two(MPSState& m, int a, int b, const Mat4& u);

/// Runs the circuit from |0...0> with bond dimension capped at chi.
MPSState mps_run(const Circuit& c, int chi);

Complex mps_amplitude(const MPSState& m, const std::string& bits);

double mps_norm(const MPSState& m);

/// Max isometry violation of the sites left (right) of the center.
double mps_canonical_error(const MPSState& m);

/// Exact sampling from the state's Born distribution. Counts are split by
/// binomial draws down the prefix tree, so the cost grows with the number of
/// distinct prefixes rather than with the number of shots.
Counts mps_sample(const MPSState& m, std::uint64_t shots, Rng& rng);

/// Smallest chi at which sampling recovers the hidden string with the given
/// ratio. chi is searched by doubling, then bisection over [1, 2^(n_q/2)].
struct ChiSearchConfig {
  double threshold = 10.0;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  int max_chi = 0;  // 0: 2^(n_q/2)
};

struct ChiSearchResult {
  std::optional<int> chi_th;  // empty: "above-max"
  bool spot_check_ok = true;  // chi_th - 1 fails and chi_th + 1 succeeds
  PeakednessReport report;    // at chi_th (or at the largest chi tried)
  std::string found_string;
  double truncation = 0.0;
  int runs = 0;
};

/// With hidden == nullopt a chi counts as successful when two independent
/// sampling seeds agree on a top string that passes the threshold.
ChiSearchResult find_chi_threshold(const Circuit& c, const std::optional<std::string>& hidden,
                                   const ChiSearchConfig& cfg);

/// One attack attempt at fixed chi, as used by find_chi_threshold.
struct ChiAttempt {
  bool success = false;
  PeakednessReport report;
  double truncation = 0.0;
};
ChiAttempt attempt_chi(const Circuit& c, int chi, const std::optional<std::string>& hidden,
                       const ChiSearchConfig& cfg);

}  // namespace peaked
