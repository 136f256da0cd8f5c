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
#include <functional>
#include <string>
#include <vector>

#include "peaked/circuit.hpp"
#include "peaked/linalg.hpp"
#include "peaked/rng.hpp"

namespace peaked {

/// A U3 rotation together with the global phase a rewrite produced.
struct PhasedU3 {
  U3Params params;
  double phase = 0.0;
};

/// X . u3(p) = e^{i phase} u3(p') . X  with p' = (theta, pi - phi, pi - lambda),
/// phase = phi + lambda. The same (p', phase) also moves an X forward in time:
/// u3(p) . X = e^{i phase} X . u3(p').
PhasedU3 rule_x_left_of_u3(const U3Params& p);

/// u3(p) . X = e^{i phase} u3(p'): the X is absorbed.
/// p' = (pi - theta, phi - pi, -lambda), phase = lambda + pi.
PhasedU3 rule_x_right_of_u3(const U3Params& p);

/// Result of moving an X on one leg of a CZ past the CZ (forward in time):
/// X_x then CZ equals CZ then (X_x, Z_z).
struct CzCrossing {
  int x_qubit = 0;
  int z_qubit = 0;
};
CzCrossing rule_x_through_cz(const std::array<int, 2>& cz_pair, int x_qubit);

enum class Side { kLeft, kRight };

/// kLeft:  Z . u3(theta, phi, lambda) = u3(theta, phi + pi, lambda)
/// kRight: u3(theta, phi, lambda) . Z = u3(theta, phi, lambda + pi)
U3Params absorb_z_into_u3(const U3Params& p, Side side);

/// A matrix identity used by the rewriter. `matcher` builds the pattern being
/// replaced and `producer` the replacement (phase included), both from the
/// same random parameter vector.
struct RewriteRule {
  std::string name;
  int n_params = 3;
  std::function<MatX(const std::vector<double>&)> matcher;
  std::function<MatX(const std::vector<double>&)> producer;
};

class RuleRegistry {
 public:
  static constexpr double kTolerance = 1e-12;

  /// Verifies the rule on `samples` random parameter vectors and throws
  /// InvalidArgument if matcher and producer differ by more than kTolerance
  /// up to a global phase.
  void add(RewriteRule rule, int samples = 64);

  const std::vector<RewriteRule>& rules() const { return rules_; }
  const RewriteRule& get(const std::string& name) const;

 private:
  std::vector<RewriteRule> rules_;
};

/// Registry holding the rules used by embed_hidden_string and
/// merge_adjacent_u3, verified on first use.
const RuleRegistry& builtin_rules();

/// A Pauli travelling through the circuit during embedding.
struct PendingGate {
  enum class Kind { kX, kZ };
  Kind kind = Kind::kX;
  int qubit = 0;
  BlockRef position;
};

/// Inserts X on every set bit of x_hid at the circuit start and pushes each
/// one forward to a uniformly chosen U3 slot on its wire within the first
/// half, where it is absorbed. Z gates spawned at CZ crossings are absorbed
/// into the partner wire's next U3 in the same block. The result's unitary is
/// unitary(c) . X(x_hid) up to floating point, with phases kept in the block
/// phase fields. Blocks whose angles changed are appended to `touched`.
Circuit embed_hidden_string(const Circuit& c, const std::string& x_hid, Rng& rng,
                            std::vector<BlockRef>* touched = nullptr);

/// Folds the last U3 of each block wire into the first U3 of the next block
/// on that wire. The earlier U3 becomes the identity; the product goes to the
/// later block and its phase to that block's phase field.
Circuit merge_adjacent_u3(const Circuit& c);

/// Prepends H_a, H_b, CZ(a,b), H_b (time order), which maps |00> to a Bell
/// pair, and absorbs it into the first-layer block on {a, b}. That block is
/// turned into the 3-CZ layout. Throws InvalidArgument when {a, b} is not a
/// first-layer pair.
Circuit insert_entangler(const Circuit& c, const std::array<int, 2>& pair);

}  // namespace peaked
