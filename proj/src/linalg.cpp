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

#include "peaked/linalg.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "peaked/errors.hpp"

namespace peaked {

namespace {

constexpr double kPi = std::numbers::pi;

// |sin(theta/2)| or |cos(theta/2)| below this is treated as an exact zero
// when picking the tie-broken angles in zyz_decompose.
constexpr double kDegenerate = 1e-14;

}  // namespace

double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

U3Params normalized(const U3Params& p, bool* sign_flip) {
  // theta -> theta - 2pi negates both cos(theta/2) and sin(theta/2).
  double t = std::remainder(p.theta, 4.0 * kPi);  // [-2pi, 2pi]
  bool flip = false;
  if (t > kPi) {
    t -= 2.0 * kPi;
    flip = true;
  } else if (t <= -kPi) {
    t += 2.0 * kPi;
    flip = true;
  }
  if (sign_flip != nullptr) *sign_flip = flip;
  return {t, normalize_angle(p.phi), normalize_angle(p.lambda)};
}

Mat2 u3_matrix(const U3Params& p) {
  if (!std::isfinite(p.theta) || !std::isfinite(p.phi) || !std::isfinite(p.lambda)) {
    throw InvalidArgument("u3_matrix: non-finite angle");
  }
  const double c = std::cos(p.theta / 2.0);
  const double s = std::sin(p.theta / 2.0);
  Mat2 m;
  m(0, 0) = c;
  m(0, 1) = -std::polar(s, p.lambda);
  m(1, 0) = std::polar(s, p.phi);
  m(1, 1) = std::polar(c, p.phi + p.lambda);
  return m;
}

std::array<Mat2, 3> u3_derivatives(const U3Params& p) {
  const double c = std::cos(p.theta / 2.0);
  const double s = std::sin(p.theta / 2.0);
  const Complex el = std::polar(1.0, p.lambda);
  const Complex ep = std::polar(1.0, p.phi);
  const Complex epl = std::polar(1.0, p.phi + p.lambda);
  const Complex i(0.0, 1.0);
  std::array<Mat2, 3> d;
  d[0] << -0.5 * s, -0.5 * c * el, 0.5 * c * ep, -0.5 * s * epl;
  d[1] << 0.0, 0.0, i * s * ep, i * c * epl;
  d[2] << 0.0, -i * s * el, 0.0, i * c * epl;
  return d;
}

Mat4 cz_matrix() {
  Mat4 m = Mat4::Identity();
  m(3, 3) = -1.0;
  return m;
}

Mat2 pauli_x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Mat2 hadamard() {
  Mat2 m;
  const double r = 1.0 / std::numbers::sqrt2;
  m << r, r, r, -r;
  return m;
}

Mat4 kron_pair(const Mat2& first, const Mat2& second) {
  // index = bit_first + 2 * bit_second
  Mat4 m;
  for (int b1 = 0; b1 < 2; ++b1)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int a0 = 0; a0 < 2; ++a0)
          m(a1 + 2 * b1, a0 + 2 * b0) = first(a1, a0) * second(b1, b0);
  return m;
}

double deviation_squared(const Mat4& a, const Mat4& b) {
  return (a - b).squaredNorm() / 16.0;
}

double deviation(const Mat4& a, const Mat4& b) { return std::sqrt(deviation_squared(a, b)); }

double deviation(const MatX& a, const MatX& b) {
  if (a.rows() != 4 || a.cols() != 4 || b.rows() != 4 || b.cols() != 4) {
    throw InvalidArgument("deviation: both matrices must be 4x4");
  }
  return std::sqrt((a - b).squaredNorm() / 16.0);
}

ZyzResult zyz_decompose(const Mat2& u) {
  if (!u.allFinite() || unitarity_error(u) > 1e-10) {
    throw InvalidArgument("zyz_decompose: input is not unitary");
  }
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(1, 0));
  ZyzResult r;
  r.params.theta = 2.0 * std::atan2(s, c);
  if (s < kDegenerate) {
    r.phase = std::arg(u(0, 0));
    r.params.phi = 0.0;
    r.params.lambda = normalize_angle(std::arg(u(1, 1)) - r.phase);
  } else if (c < kDegenerate) {
    r.phase = std::arg(u(1, 0));
    r.params.phi = 0.0;
    r.params.lambda = normalize_angle(std::arg(-u(0, 1)) - r.phase);
  } else {
    // Angles of the small off-diagonal (or diagonal) entries are noisy; take
    // each angle from entries whose error gets multiplied by the small factor.
    r.phase = std::arg(u(0, 0));
    r.params.phi = normalize_angle(std::arg(u(1, 0)) - r.phase);
    if (c >= s) {
      r.params.lambda = normalize_angle(std::arg(u(1, 1)) - std::arg(u(1, 0)));
    } else {
      r.params.lambda = normalize_angle(std::arg(-u(0, 1)) - r.phase);
    }
  }
  return r;
}

double distance_up_to_phase(const MatX& a, const MatX& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("distance_up_to_phase: dimension mismatch");
  }
  // ||a - e^{it} b||^2 = ||a||^2 + ||b||^2 - 2 Re(e^{-it} tr(b^+ a)), minimised
  // at t = arg tr(b^+ a). The residual is formed explicitly to keep precision.
  const Complex inner = (b.adjoint() * a).trace();
  const Complex phase = std::abs(inner) > 0.0 ? inner / std::abs(inner) : Complex(1.0);
  return (a - phase * b).norm();
}

double unitarity_error(const MatX& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - MatX::Identity(u.rows(), u.cols())).norm();
}

MatX haar_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatX z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<MatX> qr(z);
  MatX q = qr.householderQ();
  MatX r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so Q is Haar distributed.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

}  // namespace peaked
