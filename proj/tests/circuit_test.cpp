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

#include <set>

#include <gtest/gtest.h>

#include "peaked/circuit.hpp"
#include "peaked/errors.hpp"

namespace peaked {
namespace {

constexpr double kTight = 1e-12;

Block random_block(int a, int b, Rng& rng) {
  Block blk;
  blk.pair = {a, b};
  for (int k = 0; k < 6; ++k)
    blk.angles.push_back({uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)});
  blk.phase = uniform_angle(rng);
  return blk;
}

// Gate-by-gate product with explicit 4x4 matrices, later gates on the left.
Mat4 oracle_block(const Block& b) {
  Mat4 m = Mat4::Identity();
  const int pairs = static_cast<int>(b.angles.size()) / 2;
  for (int k = 0; k < pairs; ++k) {
    if (k > 0) m = cz_matrix() * m;
    m = kron_pair(u3_matrix(b.angles[2 * k]), u3_matrix(b.angles[2 * k + 1])) * m;
  }
  return std::polar(1.0, b.phase) * m;
}

// Embeds a two-qubit operator into the full space by index arithmetic.
MatX embed_two(int n, int a, int b, const Mat4& g) {
  const std::size_t dim = std::size_t{1} << n;
  MatX full = MatX::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const int la = (col >> a) & 1, lb = (col >> b) & 1;
    for (int out = 0; out < 4; ++out) {
      std::size_t row = col;
      row = (row & ~(std::size_t{1} << a)) | (std::size_t(out & 1) << a);
      row = (row & ~(std::size_t{1} << b)) | (std::size_t(out >> 1) << b);
      full(row, col) += g(out, la + 2 * lb);
    }
  }
  return full;
}

TEST(Circuit, BlockMatrixMatchesOracle) {
  Rng rng = make_stream(21, 0);
  for (int k = 0; k < 100; ++k) {
    const Block b = random_block(0, 1, rng);
    EXPECT_LT((block_matrix(b) - oracle_block(b)).norm(), kTight);
  }
}

TEST(Circuit, StandardBlockMatrixMatchesBlockMatrix) {
  Rng rng = make_stream(22, 0);
  for (int k = 0; k < 100; ++k) {
    Block b = random_block(0, 1, rng);
    b.phase = 0.0;
    double a[18];
    for (int j = 0; j < 6; ++j) {
      a[3 * j] = b.angles[j].theta;
      a[3 * j + 1] = b.angles[j].phi;
      a[3 * j + 2] = b.angles[j].lambda;
    }
    EXPECT_LT((standard_block_matrix(a) - block_matrix(b)).norm(), kTight);
  }
}

TEST(Circuit, JacobianMatchesFiniteDifferences) {
  Rng rng = make_stream(23, 0);
  double a[18];
  for (double& v : a) v = uniform_angle(rng);
  Mat4 m;
  std::array<Mat4, 18> d;
  standard_block_jacobian(a, m, d);
  EXPECT_LT((m - standard_block_matrix(a)).norm(), kTight);
  const double h = 1e-6;
  for (int j = 0; j < 18; ++j) {
    double p[18], q[18];
    std::copy(a, a + 18, p);
    std::copy(a, a + 18, q);
    p[j] += h;
    q[j] -= h;
    const Mat4 fd = (standard_block_matrix(p) - standard_block_matrix(q)) / (2 * h);
    EXPECT_LT((fd - d[j]).norm(), 1e-8) << "angle " << j;
  }
}

TEST(Circuit, ValidateBlockRejectsWrongAngleCount) {
  Block b = identity_block(0, 1);
  b.angles.pop_back();
  EXPECT_THROW(validate_block(b), MalformedBlock);
  b.layout = Layout::kExtended;
  EXPECT_THROW(validate_block(b), MalformedBlock);
}

TEST(Circuit, LayoutTags) {
  for (Layout l : {Layout::kStandard, Layout::kExtended, Layout::kReduced})
    EXPECT_EQ(layout_from_tag(layout_tag(l)), l);
  EXPECT_THROW(layout_from_tag("cz9"), Error);
}

TEST(Circuit, IdentityBlockIsIdentity) {
  EXPECT_LT((block_matrix(identity_block(2, 3)) - Mat4::Identity()).norm(), kTight);
}

TEST(Circuit, InvertBlockGivesAdjoint) {
  Rng rng = make_stream(24, 0);
  for (int k = 0; k < 100; ++k) {
    const Block b = random_block(1, 2, rng);
    const Block inv = invert_block(b);
    EXPECT_EQ(inv.pair, b.pair);
    EXPECT_LT((block_matrix(inv) * block_matrix(b) - Mat4::Identity()).norm(), kTight);
  }
}

TEST(Circuit, BrickPairs) {
  using P = std::array<int, 2>;
  EXPECT_EQ(brick_pairs(6, 0), (std::vector<P>{{0, 1}, {2, 3}, {4, 5}}));
  EXPECT_EQ(brick_pairs(6, 1), (std::vector<P>{{5, 0}, {1, 2}, {3, 4}}));
  EXPECT_EQ(brick_pairs(6, 2), brick_pairs(6, 0));
  for (int n : {4, 8, 12}) {
    for (int l : {0, 1}) {
      std::set<int> seen;
      for (auto p : brick_pairs(n, l)) {
        seen.insert(p[0]);
        seen.insert(p[1]);
      }
      EXPECT_EQ(static_cast<int>(seen.size()), n);
    }
  }
}

TEST(Circuit, RandomHalfRejectsBadShapes) {
  Rng rng = make_stream(25, 0);
  EXPECT_THROW(generate_random_half(5, 2, rng), InvalidArgument);
  EXPECT_THROW(generate_random_half(2, 2, rng), InvalidArgument);
  EXPECT_THROW(generate_random_half(6, 0, rng), InvalidArgument);
}

TEST(Circuit, MirrorIsIdentityAndBrickShaped) {
  Rng rng = make_stream(26, 0);
  for (int n : {4, 6, 8}) {
    for (int l : {1, 2, 3}) {
      const Circuit full = build_mirror(generate_random_half(n, l, rng));
      EXPECT_EQ(full.half_depth, l);
      EXPECT_EQ(static_cast<int>(full.layers.size()), 2 * l);
      EXPECT_EQ(check_brick_structure(full), "");
      const MatX u = circuit_unitary(full);
      EXPECT_LT(distance_up_to_phase(u, MatX::Identity(u.rows(), u.cols())), 1e-10);
    }
  }
}

TEST(Circuit, MirrorPartnerInvertsBlock) {
  Rng rng = make_stream(27, 0);
  const Circuit c = build_mirror(generate_random_half(6, 3, rng));
  for (int l = 0; l < c.half_depth; ++l) {
    for (int s = 0; s < static_cast<int>(c.layers[l].size()); ++s) {
      const BlockRef p = mirror_partner(c, {l, s});
      const Block& a = c.layers[l][s];
      const Block& b = c.layers[p.layer][p.slot];
      EXPECT_EQ(a.pair, b.pair);
      EXPECT_LT((block_matrix(b) * block_matrix(a) - Mat4::Identity()).norm(), 1e-12);
    }
  }
}

TEST(Circuit, BrokenStructureIsReported) {
  Rng rng = make_stream(28, 0);
  Circuit c = build_mirror(generate_random_half(6, 2, rng));
  std::swap(c.layers[0][0].pair[0], c.layers[0][1].pair[0]);
  EXPECT_NE(check_brick_structure(c), "");
}

TEST(Circuit, UnitaryMatchesEmbeddedProduct) {
  Rng rng = make_stream(29, 0);
  const Circuit c = generate_random_half(4, 3, rng);
  MatX oracle = MatX::Identity(16, 16);
  for (const auto& layer : c.layers)
    for (const auto& b : layer) oracle = embed_two(4, b.pair[0], b.pair[1], oracle_block(b)) * oracle;
  EXPECT_LT((circuit_unitary(c) - oracle).norm(), 1e-11);
}

TEST(Circuit, ApplyOneAndTwoQubitMatchOracle) {
  Rng rng = make_stream(30, 0);
  const int n = 5;
  VecX s = haar_unitary(1 << n, rng).col(0);
  const Mat4 g = haar_unitary(4, rng);
  VecX t = s;
  apply_two_qubit(t, 3, 1, g);
  EXPECT_LT((t - embed_two(n, 3, 1, g) * s).norm(), 1e-12);
  const Mat2 u = haar_unitary(2, rng);
  VecX w = s;
  apply_one_qubit(w, 2, u);
  EXPECT_LT((w - embed_two(n, 2, 0, kron_pair(u, Mat2::Identity())) * s).norm(), 1e-12);
}

TEST(Circuit, CircuitUnitaryHasQubitCap) {
  Circuit c;
  c.n_q = 16;
  EXPECT_THROW(circuit_unitary(c), ResourceLimit);
}

TEST(Circuit, BitstringIndexRoundTrip) {
  EXPECT_EQ(bits_to_index("100"), 1u);
  EXPECT_EQ(bits_to_index("001"), 4u);
  EXPECT_EQ(index_to_bits(6, 4), "0110");
  for (std::uint64_t i = 0; i < 64; ++i) EXPECT_EQ(bits_to_index(index_to_bits(i, 6)), i);
  EXPECT_THROW(bits_to_index("01x"), InvalidArgument);
}

}  // namespace
}  // namespace peaked
