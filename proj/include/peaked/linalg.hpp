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
#include <complex>

#include <Eigen/Dense>

#include "peaked/rng.hpp"

namespace peaked {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

/// Angles of a U3 rotation, in radians.
struct U3Params {
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;

  friend bool operator==(const U3Params&, const U3Params&) = default;
};

/// Maps an angle onto (-pi, pi]. Idempotent.
double normalize_angle(double a);

/// Normalizes phi and lambda onto (-pi, pi]. theta is reduced modulo 4*pi
/// into (-2pi, 2pi] and then folded so that the returned matrix equals the
/// input matrix up to the sign returned in `sign_flip` (true means the matrix
/// picked up a factor of -1).
U3Params normalized(const U3Params& p, bool* sign_flip = nullptr);

/// Parameters of u3(p)^dagger: (theta, phi, lambda) -> (-theta, -lambda, -phi).
constexpr U3Params inverse(const U3Params& p) { return {-p.theta, -p.lambda, -p.phi}; }

/// [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]].
/// Throws InvalidArgument for non-finite angles.
Mat2 u3_matrix(const U3Params& p);

/// Partial derivatives of u3_matrix with respect to theta, phi and lambda.
std::array<Mat2, 3> u3_derivatives(const U3Params& p);

Mat4 cz_matrix();
Mat2 pauli_x();
Mat2 pauli_z();
Mat2 hadamard();

/// Two-qubit operator acting as `first` on the first qubit of a pair and as
/// `second` on the second one. The first qubit is the least significant bit
/// of the local 4-dimensional index.
Mat4 kron_pair(const Mat2& first, const Mat2& second);

/// Scaled Frobenius distance sqrt(sum |a_ij - b_ij|^2 / 16) between two 4x4
/// matrices. Throws InvalidArgument unless both are 4x4.
double deviation(const MatX& a, const MatX& b);
double deviation(const Mat4& a, const Mat4& b);

/// Squared deviation, the smooth form used as an optimization objective.
double deviation_squared(const Mat4& a, const Mat4& b);

struct ZyzResult {
  U3Params params;
  double phase = 0.0;
};

/// Finds (p, alpha) with e^{i alpha} u3(p) == u, theta in [0, pi].
/// At theta in {0, pi} phi is set to 0 and lambda carries the remaining phase.
/// Throws InvalidArgument when u is not unitary to 1e-10.
ZyzResult zyz_decompose(const Mat2& u);

/// min over alpha of ||a - e^{i alpha} b||_F, closed form via tr(b^dagger a).
double distance_up_to_phase(const MatX& a, const MatX& b);

/// ||u^dagger u - I||_F.
double unitarity_error(const MatX& u);

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
MatX haar_unitary(int dim, Rng& rng);

}  // namespace peaked
