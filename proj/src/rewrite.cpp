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

#include "peaked/rewrite.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "peaked/errors.hpp"

namespace peaked {

namespace {

constexpr double kPi = std::numbers::pi;

Complex phase_factor(double a) { return std::polar(1.0, a); }

const U3Params kHadamard{kPi / 2.0, 0.0, kPi};

}  // namespace

PhasedU3 rule_x_left_of_u3(const U3Params& p) {
  return {{p.theta, kPi - p.phi, kPi - p.lambda}, p.phi + p.lambda};
}

PhasedU3 rule_x_right_of_u3(const U3Params& p) {
  return {{kPi - p.theta, p.phi - kPi, -p.lambda}, p.lambda + kPi};
}

CzCrossing rule_x_through_cz(const std::array<int, 2>& cz_pair, int x_qubit) {
  if (x_qubit == cz_pair[0]) return {x_qubit, cz_pair[1]};
  if (x_qubit == cz_pair[1]) return {x_qubit, cz_pair[0]};
  throw InvalidArgument("rule_x_through_cz: qubit not on the CZ");
}

U3Params absorb_z_into_u3(const U3Params& p, Side side) {
  if (side == Side::kLeft) return {p.theta, p.phi + kPi, p.lambda};
  return {p.theta, p.phi, p.lambda + kPi};
}

void RuleRegistry::add(RewriteRule rule, int samples) {
  Rng rng(stream_seed(0x5eed, rules_.size()));
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x(rule.n_params);
    for (double& v : x) v = uniform_angle(rng);
    const MatX lhs = rule.matcher(x);
    const MatX rhs = rule.producer(x);
    const double err = distance_up_to_phase(lhs, rhs);
    if (!(err <= kTolerance)) {
      throw InvalidArgument("rewrite rule '" + rule.name + "' failed its self-check (residual " +
                            std::to_string(err) + ")");
    }
  }
  rules_.push_back(std::move(rule));
}

const RewriteRule& RuleRegistry::get(const std::string& name) const {
  for (const auto& r : rules_) {
    if (r.name == name) return r;
  }
  throw InvalidArgument("unknown rewrite rule '" + name + "'");
}

const RuleRegistry& builtin_rules() {
  static const RuleRegistry registry = [] {
    RuleRegistry r;
    auto u3 = [](const std::vector<double>& x, int k = 0) {
      return u3_matrix({x[k], x[k + 1], x[k + 2]});
    };
    r.add({"x_left_of_u3", 3, [u3](const auto& x) -> MatX { return pauli_x() * u3(x); },
           [](const auto& x) -> MatX {
             const PhasedU3 q = rule_x_left_of_u3({x[0], x[1], x[2]});
             return phase_factor(q.phase) * u3_matrix(q.params) * pauli_x();
           }});
    r.add({"x_right_of_u3", 3, [u3](const auto& x) -> MatX { return u3(x) * pauli_x(); },
           [](const auto& x) -> MatX {
             const PhasedU3 q = rule_x_right_of_u3({x[0], x[1], x[2]});
             return phase_factor(q.phase) * u3_matrix(q.params);
           }});
    r.add({"z_left_of_u3", 3, [u3](const auto& x) -> MatX { return pauli_z() * u3(x); },
           [](const auto& x) -> MatX {
             return u3_matrix(absorb_z_into_u3({x[0], x[1], x[2]}, Side::kLeft));
           }});
    r.add({"z_right_of_u3", 3, [u3](const auto& x) -> MatX { return u3(x) * pauli_z(); },
           [](const auto& x) -> MatX {
             return u3_matrix(absorb_z_into_u3({x[0], x[1], x[2]}, Side::kRight));
           }});
    const Mat2 id = Mat2::Identity();
    r.add({"x_first_through_cz", 0,
           [id](const auto&) -> MatX { return cz_matrix() * kron_pair(pauli_x(), id); },
           [](const auto&) -> MatX { return kron_pair(pauli_x(), pauli_z()) * cz_matrix(); }},
          1);
    r.add({"x_second_through_cz", 0,
           [id](const auto&) -> MatX { return cz_matrix() * kron_pair(id, pauli_x()); },
           [](const auto&) -> MatX { return kron_pair(pauli_z(), pauli_x()) * cz_matrix(); }},
          1);
    r.add({"merge_u3", 6, [u3](const auto& x) -> MatX { return u3(x, 3) * u3(x, 0); },
           [u3](const auto& x) -> MatX {
             const ZyzResult z = zyz_decompose(u3(x, 3) * u3(x, 0));
             return phase_factor(z.phase) * u3_matrix(z.params);
           }});
    return r;
  }();
  return registry;
}

namespace {

int block_on_wire(const Layer& layer, int q) {
  for (std::size_t s = 0; s < layer.size(); ++s) {
    if (layer[s].touches(q)) return static_cast<int>(s);
  }
  return -1;
}

}  // namespace

Circuit embed_hidden_string(const Circuit& c, const std::string& x_hid, Rng& rng,
                            std::vector<BlockRef>* touched) {
  if (static_cast<int>(x_hid.size()) != c.n_q) {
    throw InvalidArgument("hidden string length does not match n_q");
  }
  (void)bits_to_index(x_hid);
  if (c.is_flat()) throw InvalidArgument("embed_hidden_string: flat circuit");
  const int half = c.half_depth;
  if (half < 1 || static_cast<int>(c.layers.size()) < half) {
    throw InvalidArgument("embed_hidden_string: circuit has no first half");
  }
  Circuit out = c;
  std::set<std::pair<int, int>> seen;
  auto mark = [&](int l, int s) {
    if (touched != nullptr && seen.insert({l, s}).second) touched->push_back({l, s});
  };

  for (int q = 0; q < c.n_q; ++q) {
    if (x_hid[q] != '1') continue;
    // Slots on wire q in the first half, in time order.
    std::vector<std::pair<int, int>> slots;  // (layer, pair index)
    for (int l = 0; l < half; ++l) {
      const int s = block_on_wire(out.layers[l], q);
      if (s < 0) continue;
      validate_block(out.layers[l][s]);
      const int pairs = static_cast<int>(out.layers[l][s].angles.size()) / 2;
      for (int k = 0; k < pairs; ++k) slots.emplace_back(l, k);
    }
    if (slots.empty()) throw InvalidArgument("embed_hidden_string: wire has no gates");
    const auto stop = static_cast<std::size_t>(
        std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng));

    PendingGate x{PendingGate::Kind::kX, q, {0, 0}};
    for (std::size_t i = 0; i <= stop; ++i) {
      const auto [l, k] = slots[i];
      const int s = block_on_wire(out.layers[l], q);
      Block& b = out.layers[l][s];
      x.position = {l, s};
      mark(l, s);
      const int own = b.first() == q ? 0 : 1;
      if (k > 0) {
        // A CZ sits before this U3 pair: X continues, Z lands on the partner's
        // U3 that follows the CZ.
        const CzCrossing cross = rule_x_through_cz(b.pair, q);
        const int partner = cross.z_qubit == b.first() ? 0 : 1;
        U3Params& zp = b.angles[2 * k + partner];
        zp = absorb_z_into_u3(zp, Side::kRight);
      }
      U3Params& u = b.angles[2 * k + own];
      if (i == stop) {
        const PhasedU3 r = rule_x_right_of_u3(u);
        u = r.params;
        b.phase += r.phase;
      } else {
        const PhasedU3 r = rule_x_left_of_u3(u);
        u = r.params;
        b.phase += r.phase;
      }
    }
  }
  return out;
}

Circuit merge_adjacent_u3(const Circuit& c) {
  if (c.is_flat()) return c;
  Circuit out = c;
  const int total = static_cast<int>(out.layers.size());
  for (int l = 0; l + 1 < total; ++l) {
    for (Block& b : out.layers[l]) {
      validate_block(b);
      for (int w = 0; w < 2; ++w) {
        const int q = b.pair[w];
        Block* next = nullptr;
        for (int m = l + 1; m < total && next == nullptr; ++m) {
          const int s = block_on_wire(out.layers[m], q);
          if (s >= 0) next = &out.layers[m][s];
        }
        if (next == nullptr) continue;
        U3Params& trail = b.angles[b.angles.size() - 2 + w];
        U3Params& lead = next->angles[next->first() == q ? 0 : 1];
        const ZyzResult z = zyz_decompose(u3_matrix(lead) * u3_matrix(trail));
        lead = z.params;
        next->phase += z.phase;
        trail = U3Params{};
      }
    }
  }
  return out;
}

Circuit insert_entangler(const Circuit& c, const std::array<int, 2>& pair) {
  const int a = pair[0], b = pair[1];
  if (a == b) throw InvalidArgument("insert_entangler: qubits must differ");
  if (c.is_flat() || c.layers.empty()) throw InvalidArgument("insert_entangler: no layers");
  Circuit out = c;
  for (Block& blk : out.layers[0]) {
    if (!(blk.touches(a) && blk.touches(b))) continue;
    validate_block(blk);
    if (blk.layout != Layout::kStandard) {
      throw UnsupportedLayout("insert_entangler: first-layer block is not standard");
    }
    const int slot_b = blk.first() == b ? 0 : 1;
    // Time order: [H, H], CZ, [I_a, H_b] followed by the original block. The
    // lone H_b merges into the block's leading U3 on b.
    std::vector<U3Params> angles = {kHadamard, kHadamard};
    const ZyzResult z = zyz_decompose(u3_matrix(blk.angles[slot_b]) * hadamard());
    blk.angles[slot_b] = z.params;
    blk.phase += z.phase;
    angles.insert(angles.end(), blk.angles.begin(), blk.angles.end());
    blk.angles = std::move(angles);
    blk.layout = Layout::kExtended;
    return out;
  }
  throw InvalidArgument("insert_entangler: (" + std::to_string(a) + "," + std::to_string(b) +
                        ") is not a first-layer pair");
}

}  // namespace peaked
