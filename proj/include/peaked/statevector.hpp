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
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "peaked/circuit.hpp"
#include "peaked/linalg.hpp"
#include "peaked/rng.hpp"

namespace peaked {

inline constexpr int kDenseQubitCap = 20;

/// Probabilities below this are treated as exact zeros when a report is built
/// from an exact distribution, so ideal circuits report an infinite ratio.
inline constexpr double kExactProbabilityFloor = 1e-14;

/// Dense state, little-endian: qubit q is bit q of the amplitude index.
struct StateVector {
  int n_q = 0;
  VecX amplitudes;
};

/// Applies the circuit to |0...0>. Throws ResourceLimit above `cap` qubits.
StateVector run_statevector(const Circuit& c, int cap = kDenseQubitCap);

std::vector<double> probabilities(const StateVector& s);

/// Bitstring (qubit 0 leftmost) -> count.
using Counts = std::map<std::string, std::uint64_t>;

/// Inverse-CDF sampling over the cumulative distribution.
Counts sample(const StateVector& s, std::uint64_t shots, Rng& rng);

struct PeakednessReport {
  std::string peak_string;
  std::string second_string;
  double p_peak = 0.0;
  double p_second = 0.0;
  double ratio = 0.0;  // +inf when p_second == 0
  bool is_peaked = false;
  std::uint64_t shots = 0;  // 0 for an exact distribution
  std::string backend = "direct";
};

/// Ties are broken by lexicographic bitstring order. second_string stays empty
/// when no other string carries weight (above the exact floor, or sampled).
PeakednessReport peak_report(const std::vector<double>& probs, int n_q, double threshold = 10.0);
PeakednessReport peak_report(const Counts& counts, double threshold = 10.0);

/// "inf" for infinity, shortest round-trip decimal otherwise.
std::string format_number(double v);

/// Total-variation distance between empirical counts and an exact distribution.
double total_variation(const Counts& counts, const std::vector<double>& probs);

}  // namespace peaked
