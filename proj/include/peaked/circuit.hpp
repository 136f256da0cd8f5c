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

#include "peaked/linalg.hpp"
#include "peaked/rng.hpp"

namespace peaked {

/// Gate layout inside a two-qubit block. A block with k CZ gates holds
/// 2 * (k + 1) U3 rotations applied as:
///   (U3 (x) U3), CZ, (U3 (x) U3), CZ, ..., (U3 (x) U3)
/// Angles are stored in time order, first qubit of the pair before the second.
enum class Layout {
  kStandard,  // 2 CZ, 6 U3
  kExtended,  // 3 CZ, 8 U3
  kReduced,   // any other alternating pattern; CZ count inferred from angles
};

const char* layout_tag(Layout l);  // "cz2" | "cz3" | "red"
Layout layout_from_tag(const std::string& tag);

struct Block {
  std::array<int, 2> pair{0, 1};
  Layout layout = Layout::kStandard;
  std::vector<U3Params> angles;
  double phase = 0.0;

  int cz_count() const;
  int first() const { return pair[0]; }
  int second() const { return pair[1]; }
  bool touches(int q) const { return pair[0] == q || pair[1] == q; }
};

/// Number of U3 rotations a layout requires (kReduced: -1, any even count >= 2).
int expected_angle_count(Layout l);

/// Throws MalformedBlock when the angle count does not match the layout.
void validate_block(const Block& b);

Block identity_block(int a, int b);

/// Ordered product of the block's gates (later gates multiply from the left)
/// times e^{i phase}. Local index: first qubit = least significant bit.
Mat4 block_matrix(const Block& b);

/// Standard-layout matrix from 18 angles laid out as consecutive
/// (theta, phi, lambda) triples in time order. Hot path for optimizers.
Mat4 standard_block_matrix(const double* angles18);

/// Matrix of a phase-free standard block plus its 18 partial derivatives,
/// in the same angle order as standard_block_matrix.
void standard_block_jacobian(const double* angles18, Mat4& m, std::array<Mat4, 18>& d);

enum class GateKind { kU3, kCZ, kX };

/// Single gate of a flat (non-block) circuit, used when imported QASM does
/// not follow the brick-wall structure.
struct Gate {
  GateKind kind = GateKind::kU3;
  std::array<int, 2> qubits{0, -1};
  U3Params params;
};

using Layer = std::vector<Block>;

struct Metadata {
  std::optional<std::string> hidden_string;
  std::optional<double> delta_target;
  std::uint64_t seed = 0;
};

struct Circuit {
  int n_q = 0;
  int half_depth = 0;  // layers in the random half
  std::vector<Layer> layers;
  std::vector<Gate> gates;  // non-empty only for flat circuits
  std::optional<Metadata> metadata;

  bool is_flat() const { return !gates.empty(); }
  std::size_t block_count() const;
  /// Index of the first mirror-half layer (== half_depth).
  int mirror_begin() const { return half_depth; }
};

/// Qubit pairs of a brick-wall layer. Layer indices are 0-based: even indices
/// (the 1st, 3rd, ... layer) pair (0,1),(2,3),...; odd indices pair
/// (n-1,0),(1,2),(3,4),...
std::vector<std::array<int, 2>> brick_pairs(int n_q, int layer_index);

/// Random half: n_l brick-wall layers of standard blocks with every angle
/// uniform on (-pi, pi]. Requires n_q even, n_q >= 4, n_l >= 1.
Circuit generate_random_half(int n_q, int n_l, Rng& rng);

/// Inverse of a standard block: reversed gate order, U3 angles inverted,
/// phase negated. Throws UnsupportedLayout otherwise.
Block invert_block(const Block& b);

/// Appends the mirror half: inverted blocks in fully reversed order.
Circuit build_mirror(const Circuit& half);

/// Checks the pairing rule: layers [0, half_depth) follow brick_pairs and the
/// mirror layers mirror them. Returns an empty string when the structure holds,
/// otherwise a description of the first violation.
std::string check_brick_structure(const Circuit& c);

/// Location of a block inside a layered circuit.
struct BlockRef {
  int layer = 0;
  int slot = 0;
};

/// For each first-half block, the mirror block it should invert. Only
/// meaningful for circuits with exactly 2 * half_depth layers.
BlockRef mirror_partner(const Circuit& c, BlockRef first_half);

/// A two-qubit (or one-qubit, with qubits[1] == -1) operation in application
/// order; the common lowering consumed by the simulators.
struct Op {
  std::array<int, 2> qubits{0, -1};
  Mat4 m4;  // used when qubits[1] >= 0
  Mat2 m2;  // used when qubits[1] < 0
};

std::vector<Op> lower(const Circuit& c);

/// Dense unitary of the whole circuit (n_q <= 14, else ResourceLimit).
MatX circuit_unitary(const Circuit& c);

/// Applies a 4x4 operator on qubits (a, b) of a dense state in place.
void apply_two_qubit(VecX& state, int a, int b, const Mat4& m);
void apply_one_qubit(VecX& state, int q, const Mat2& m);

/// Parses a bitstring ("0101", qubit 0 leftmost) into a basis index.
std::uint64_t bits_to_index(const std::string& bits);
std::string index_to_bits(std::uint64_t index, int n_q);

}  // namespace peaked
