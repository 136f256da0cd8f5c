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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "peaked/errors.hpp"
#include "peaked/linalg.hpp"

namespace peaked {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTight = 1e-12;

Mat2 hand_u3(double t, double p, double l) {
  const Complex i(0.0, 1.0);
  Mat2 m;
  m << std::cos(t / 2), -std::exp(i * l) * std::sin(t / 2), std::exp(i * p) * std::sin(t / 2),
      std::exp(i * (p + l)) * std::cos(t / 2);
  return m;
}

TEST(Linalg, U3MatchesHandWrittenOracle) {
  Rng rng = make_stream(11, 0);
  for (int k = 0; k < 200; ++k) {
    const U3Params p{uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)};
    EXPECT_LT((u3_matrix(p) - hand_u3(p.theta, p.phi, p.lambda)).norm(), kTight);
    EXPECT_LT(unitarity_error(u3_matrix(p)), kTight);
  }
}

TEST(Linalg, U3SpecialAnglesGiveKnownGates) {
  // u3(pi, 0, pi) = X, u3(pi/2, 0, pi) = H, u3(0, 0, pi) = Z.
  EXPECT_LT((u3_matrix({kPi, 0, kPi}) - pauli_x()).norm(), kTight);
  EXPECT_LT((u3_matrix({kPi / 2, 0, kPi}) - hadamard()).norm(), kTight);
  EXPECT_LT((u3_matrix({0, 0, kPi}) - pauli_z()).norm(), kTight);
}

TEST(Linalg, U3RejectsNonFinite) {
  EXPECT_THROW(u3_matrix({NAN, 0, 0}), InvalidArgument);
  EXPECT_THROW(u3_matrix({0, INFINITY, 0}), InvalidArgument);
}

TEST(Linalg, InverseIsAdjoint) {
  Rng rng = make_stream(12, 0);
  for (int k = 0; k < 100; ++k) {
    const U3Params p{uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)};
    EXPECT_LT((u3_matrix(inverse(p)) - u3_matrix(p).adjoint()).norm(), kTight);
  }
}

TEST(Linalg, DerivativesMatchFiniteDifferences) {
  Rng rng = make_stream(13, 0);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const U3Params p{uniform_angle(rng), uniform_angle(rng), uniform_angle(rng)};
    const auto d = u3_derivatives(p);
    for (int j = 0; j < 3; ++j) {
      U3Params a = p, b = p;
      double* pa = j == 0 ? &a.theta : j == 1 ? &a.phi : &a.lambda;
      double* pb = j == 0 ? &b.theta : j == 1 ? &b.phi : &b.lambda;
      *pa += h;
      *pb -= h;
      const Mat2 fd = (u3_matrix(a) - u3_matrix(b)) / (2 * h);
      EXPECT_LT((fd - d[j]).norm(), 1e-8);
    }
  }
}

TEST(Linalg, NormalizeAngleRangeAndIdempotence) {
  for (double a : {-10.0, -kPi, -1.0, 0.0, 1.0, kPi, 3 * kPi, 100.0}) {
    const double r = normalize_angle(a);
    EXPECT_GT(r, -kPi);
    EXPECT_LE(r, kPi);
    EXPECT_DOUBLE_EQ(normalize_angle(r), r);
    EXPECT_NEAR(std::remainder(a - r, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(Linalg, NormalizedKeepsMatrixUpToReportedSign) {
  Rng rng = make_stream(14, 0);
  std::uniform_real_distribution<double> wide(-20.0, 20.0);
  for (int k = 0; k < 200; ++k) {
    const U3Params p{wide(rng), wide(rng), wide(rng)};
    bool flip = false;
    const U3Params q = normalized(p, &flip);
    EXPECT_GT(q.theta, -kPi - 1e-12);
    EXPECT_LE(q.theta, kPi + 1e-12);
    const Mat2 expect = flip ? Mat2(-u3_matrix(p)) : u3_matrix(p);
    EXPECT_LT((u3_matrix(q) - expect).norm(), 1e-11);
  }
}

TEST(Linalg, KronPairOrdering) {
  // X on the first qubit flips the least significant bit.
  const Mat4 m = kron_pair(pauli_x(), Mat2::Identity());
  EXPECT_EQ(m(1, 0), Complex(1.0));
  EXPECT_EQ(m(3, 2), Complex(1.0));
  const Mat4 n = kron_pair(Mat2::Identity(), pauli_x());
  EXPECT_EQ(n(2, 0), Complex(1.0));
}

TEST(Linalg, CzIsDiagonal) {
  const Mat4 cz = cz_matrix();
  EXPECT_EQ(cz.diagonal()(3), Complex(-1.0));
  EXPECT_LT((cz * cz - Mat4::Identity()).norm(), kTight);
}

TEST(Linalg, DeviationScaling) {
  const Mat4 a = Mat4::Identity();
  EXPECT_DOUBLE_EQ(deviation(a, a), 0.0);
  // ||I - (-I)||^2 = 16, so the scaled distance is 1.
  EXPECT_NEAR(deviation(a, Mat4(-a)), 1.0, kTight);
  EXPECT_THROW(deviation(MatX(MatX::Identity(2, 2)), MatX(MatX::Identity(4, 4))), InvalidArgument);
}

TEST(Linalg, ZyzRoundTripOnHaarSamples) {
  Rng rng = make_stream(15, 0);
  for (int k = 0; k < 1000; ++k) {
    const Mat2 u = haar_unitary(2, rng);
    const ZyzResult z = zyz_decompose(u);
    EXPECT_GE(z.params.theta, 0.0);
    EXPECT_LE(z.params.theta, kPi);
    const Mat2 back = std::polar(1.0, z.phase) * u3_matrix(z.params);
    EXPECT_LT((back - u).norm(), 1e-12);
  }
}

TEST(Linalg, ZyzNearDegenerateAngles) {
  for (double t : {0.0, 1e-13, 1e-9, kPi - 1e-9, kPi}) {
    const Mat2 u = std::polar(1.0, 0.3) * u3_matrix({t, 1.1, -0.4});
    const ZyzResult z = zyz_decompose(u);
    EXPECT_LT((std::polar(1.0, z.phase) * u3_matrix(z.params) - u).norm(), 1e-12)
        << "theta " << t;
  }
}

TEST(Linalg, ZyzRejectsNonUnitary) {
  Mat2 m = Mat2::Identity();
  m(0, 0) = 2.0;
  EXPECT_THROW(zyz_decompose(m), InvalidArgument);
}

TEST(Linalg, DistanceUpToPhaseIgnoresGlobalPhase) {
  Rng rng = make_stream(16, 0);
  const MatX u = haar_unitary(4, rng);
  EXPECT_LT(distance_up_to_phase(u, std::polar(1.0, 2.1) * u), 1e-13);
  EXPECT_GT(distance_up_to_phase(u, haar_unitary(4, rng)), 0.1);
}

TEST(Linalg, HaarIsUnitary) {
  Rng rng = make_stream(17, 0);
  for (int d : {2, 4, 8}) EXPECT_LT(unitarity_error(haar_unitary(d, rng)), 1e-12);
}

}  // namespace
}  // namespace peaked
