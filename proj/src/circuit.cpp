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

#include "peaked/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "peaked/errors.hpp"

namespace peaked {

const char* layout_tag(Layout l) {
  switch (l) {
    case Layout::kStandard:
      return "cz2";
    case Layout::kExtended:
      return "cz3";
    case Layout::kReduced:
      return "red";
  }
  return "?";
}

Layout layout_from_tag(const std::string& tag) {
  if (tag == "cz2") return Layout::kStandard;
  if (tag == "cz3") return Layout::kExtended;
  if (tag == "red") return Layout::kReduced;
  throw InvalidArgument("unknown block layout '" + tag + "'");
}

int expected_angle_count(Layout l) {
  switch (l) {
    case Layout::kStandard:
      return 6;
    case Layout::kExtended:
      return 8;
    case Layout::kReduced:
      return -1;
  }
  return -1;
}

int Block::cz_count() const { return static_cast<int>(angles.size()) / 2 - 1; }

void validate_block(const Block& b) {
  const int n = static_cast<int>(b.angles.size());
  const int want = expected_angle_count(b.layout);
  if (want >= 0 ? n != want : (n < 2 || n % 2 != 0)) {
    throw MalformedBlock("block on (" + std::to_string(b.pair[0]) + "," +
                         std::to_string(b.pair[1]) + ") has " + std::to_string(n) +
                         " angles, layout " + layout_tag(b.layout));
  }
  if (b.pair[0] == b.pair[1]) throw MalformedBlock("block acts twice on one qubit");
}

Block identity_block(int a, int b) {
  Block blk;
  blk.pair = {a, b};
  blk.angles.assign(6, U3Params{});
  return blk;
}

namespace {

// Left-multiplies m by (first (x) second), i.e. applies the single-qubit pair
// after whatever m already holds.
void apply_local_layer(Mat4& m, const Mat2& first, const Mat2& second) {
  m = kron_pair(first, second) * m;
}

void apply_cz_rows(Mat4& m) { m.row(3) *= -1.0; }

}  // namespace

Mat4 block_matrix(const Block& b) {
  validate_block(b);
  Mat4 m = kron_pair(u3_matrix(b.angles[0]), u3_matrix(b.angles[1]));
  for (std::size_t k = 2; k + 1 < b.angles.size(); k += 2) {
    apply_cz_rows(m);
    apply_local_layer(m, u3_matrix(b.angles[k]), u3_matrix(b.angles[k + 1]));
  }
  if (b.phase != 0.0) m *= std::polar(1.0, b.phase);
  return m;
}

namespace {

inline Mat2 u3_fast(const double* a) {
  const double c = std::cos(a[0] * 0.5);
  const double s = std::sin(a[0] * 0.5);
  Mat2 m;
  m(0, 0) = c;
  m(0, 1) = -std::polar(s, a[2]);
  m(1, 0) = std::polar(s, a[1]);
  m(1, 1) = std::polar(c, a[1] + a[2]);
  return m;
}

}  // namespace

Mat4 standard_block_matrix(const double* a) {
  Mat4 m = kron_pair(u3_fast(a), u3_fast(a + 3));
  m.row(3) *= -1.0;
  m = kron_pair(u3_fast(a + 6), u3_fast(a + 9)) * m;
  m.row(3) *= -1.0;
  return kron_pair(u3_fast(a + 12), u3_fast(a + 15)) * m;
}

void standard_block_jacobian(const double* a, Mat4& m, std::array<Mat4, 18>& d) {
  // m = K2 . CZ . K1 . CZ . K0 with K_k = kron(first_k, second_k).
  std::array<Mat2, 6> u;
  std::array<std::array<Mat2, 3>, 6> du;
  for (int k = 0; k < 6; ++k) {
    const U3Params p{a[3 * k], a[3 * k + 1], a[3 * k + 2]};
    u[k] = u3_matrix(p);
    du[k] = u3_derivatives(p);
  }
  std::array<Mat4, 3> kp;
  for (int k = 0; k < 3; ++k) kp[k] = kron_pair(u[2 * k], u[2 * k + 1]);
  const Mat4 cz = cz_matrix();
  // before[k]: everything applied before K_k; after[k]: everything after it.
  std::array<Mat4, 3> before, after;
  before[0] = Mat4::Identity();
  before[1] = cz * kp[0];
  before[2] = cz * kp[1] * before[1];
  after[2] = Mat4::Identity();
  after[1] = kp[2] * cz;
  after[0] = after[1] * kp[1] * cz;
  m = kp[2] * before[2];
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      d[6 * k + j] = after[k] * kron_pair(du[2 * k][j], u[2 * k + 1]) * before[k];
      d[6 * k + 3 + j] = after[k] * kron_pair(u[2 * k], du[2 * k + 1][j]) * before[k];
    }
  }
}

std::size_t Circuit::block_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.size();
  return n;
}

std::vector<std::array<int, 2>> brick_pairs(int n_q, int layer_index) {
  std::vector<std::array<int, 2>> out;
  if (layer_index % 2 == 0) {
    for (int q = 0; q + 1 < n_q; q += 2) out.push_back({q, q + 1});
  } else {
    out.push_back({n_q - 1, 0});
    for (int q = 1; q + 1 < n_q; q += 2) out.push_back({q, q + 1});
  }
  return out;
}

Circuit generate_random_half(int n_q, int n_l, Rng& rng) {
  if (n_q < 4 || n_q % 2 != 0) throw InvalidArgument("n_q must be even and >= 4");
  if (n_l < 1) throw InvalidArgument("n_l must be >= 1");
  Circuit c;
  c.n_q = n_q;
  c.half_depth = n_l;
  c.layers.reserve(n_l);
  for (int l = 0; l < n_l; ++l) {
    Layer layer;
    for (const auto& p : brick_pairs(n_q, l)) {
      Block b;
      b.pair = p;
      b.angles.resize(6);
      for (auto& u : b.angles) {
        u.theta = uniform_angle(rng);
        u.phi = uniform_angle(rng);
        u.lambda = uniform_angle(rng);
      }
      layer.push_back(std::move(b));
    }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

Block invert_block(const Block& b) {
  if (b.layout != Layout::kStandard) {
    throw UnsupportedLayout(std::string("invert_block: layout ") + layout_tag(b.layout));
  }
  validate_block(b);
  Block out;
  out.pair = b.pair;
  out.layout = b.layout;
  out.phase = -b.phase;
  const std::size_t n = b.angles.size();
  out.angles.resize(n);
  // Gate layers reverse; each layer keeps the (first, second) order.
  for (std::size_t k = 0; k < n; k += 2) {
    out.angles[k] = inverse(b.angles[n - 2 - k]);
    out.angles[k + 1] = inverse(b.angles[n - 1 - k]);
  }
  return out;
}

Circuit build_mirror(const Circuit& half) {
  if (half.is_flat()) throw InvalidArgument("build_mirror: flat circuit");
  if (static_cast<int>(half.layers.size()) != half.half_depth) {
    throw InvalidArgument("build_mirror: input is not a pure random half");
  }
  Circuit c = half;
  for (int l = half.half_depth - 1; l >= 0; --l) {
    Layer mirror;
    const Layer& src = half.layers[l];
    for (auto it = src.rbegin(); it != src.rend(); ++it) mirror.push_back(invert_block(*it));
    c.layers.push_back(std::move(mirror));
  }
  return c;
}

std::string check_brick_structure(const Circuit& c) {
  if (c.is_flat()) return "flat circuit";
  if (c.n_q % 2 != 0) return "odd qubit count";
  const int total = static_cast<int>(c.layers.size());
  for (int l = 0; l < total; ++l) {
    // Mirror layers copy the pairing of the layer they invert.
    const int source = l < c.half_depth ? l : 2 * c.half_depth - 1 - l;
    if (source < 0) return "more layers than a mirrored circuit allows";
    auto want = brick_pairs(c.n_q, source);
    if (l >= c.half_depth) std::reverse(want.begin(), want.end());
    const Layer& layer = c.layers[l];
    if (layer.size() != want.size()) {
      return "layer " + std::to_string(l) + " has " + std::to_string(layer.size()) + " blocks";
    }
    for (std::size_t s = 0; s < want.size(); ++s) {
      if (layer[s].pair != want[s]) {
        std::ostringstream os;
        os << "layer " << l << " slot " << s << " acts on (" << layer[s].pair[0] << ","
           << layer[s].pair[1] << "), expected (" << want[s][0] << "," << want[s][1] << ")";
        return os.str();
      }
    }
  }
  return {};
}

BlockRef mirror_partner(const Circuit& c, BlockRef first_half) {
  const int total = static_cast<int>(c.layers.size());
  const int layer = total - 1 - first_half.layer;
  const int width = static_cast<int>(c.layers[layer].size());
  return {layer, width - 1 - first_half.slot};
}

std::vector<Op> lower(const Circuit& c) {
  std::vector<Op> ops;
  if (c.is_flat()) {
    ops.reserve(c.gates.size());
    for (const Gate& g : c.gates) {
      Op op;
      switch (g.kind) {
        case GateKind::kU3:
          op.qubits = {g.qubits[0], -1};
          op.m2 = u3_matrix(g.params);
          break;
        case GateKind::kX:
          op.qubits = {g.qubits[0], -1};
          op.m2 = pauli_x();
          break;
        case GateKind::kCZ:
          op.qubits = g.qubits;
          op.m4 = cz_matrix();
          break;
      }
      ops.push_back(op);
    }
    return ops;
  }
  ops.reserve(c.block_count());
  for (const Layer& layer : c.layers) {
    for (const Block& b : layer) {
      Op op;
      op.qubits = b.pair;
      op.m4 = block_matrix(b);
      ops.push_back(op);
    }
  }
  return ops;
}

void apply_two_qubit(VecX& state, int a, int b, const Mat4& m) {
  const std::uint64_t ma = 1ULL << a;
  const std::uint64_t mb = 1ULL << b;
  const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
  Complex* psi = state.data();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & (ma | mb)) continue;
    const std::uint64_t idx[4] = {i, i | ma, i | mb, i | ma | mb};
    const Complex v0 = psi[idx[0]], v1 = psi[idx[1]], v2 = psi[idx[2]], v3 = psi[idx[3]];
    for (int r = 0; r < 4; ++r) {
      psi[idx[r]] = m(r, 0) * v0 + m(r, 1) * v1 + m(r, 2) * v2 + m(r, 3) * v3;
    }
  }
}

void apply_one_qubit(VecX& state, int q, const Mat2& m) {
  const std::uint64_t mq = 1ULL << q;
  const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
  Complex* psi = state.data();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & mq) continue;
    const Complex v0 = psi[i], v1 = psi[i | mq];
    psi[i] = m(0, 0) * v0 + m(0, 1) * v1;
    psi[i | mq] = m(1, 0) * v0 + m(1, 1) * v1;
  }
}

MatX circuit_unitary(const Circuit& c) {
  if (c.n_q > 14) throw ResourceLimit("circuit_unitary: n_q > 14");
  const Eigen::Index dim = Eigen::Index{1} << c.n_q;
  MatX u = MatX::Identity(dim, dim);
  const auto ops = lower(c);
  for (Eigen::Index col = 0; col < dim; ++col) {
    VecX v = u.col(col);
    for (const Op& op : ops) {
      if (op.qubits[1] >= 0) {
        apply_two_qubit(v, op.qubits[0], op.qubits[1], op.m4);
      } else {
        apply_one_qubit(v, op.qubits[0], op.m2);
      }
    }
    u.col(col) = v;
  }
  return u;
}

std::uint64_t bits_to_index(const std::string& bits) {
  if (bits.size() > 63) throw InvalidArgument("bitstring too long");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      idx |= 1ULL << i;
    } else if (bits[i] != '0') {
      throw InvalidArgument("bitstring may only contain 0 and 1");
    }
  }
  return idx;
}

std::string index_to_bits(std::uint64_t index, int n_q) {
  std::string s(static_cast<std::size_t>(n_q), '0');
  for (int i = 0; i < n_q; ++i) {
    if ((index >> i) & 1ULL) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace peaked
