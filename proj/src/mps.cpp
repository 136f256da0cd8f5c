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

#include "peaked/mps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "peaked/errors.hpp"

namespace peaked {

namespace {

// Singular values below this fraction of the largest one are dropped even
// when the bond cap would allow them; they carry no weight.
constexpr double kSingularFloor = 1e-14;

Mat4 swap_matrix() {
  Mat4 s = Mat4::Zero();
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
  return s;
}

void check_site(const MPSState& m, int q) {
  if (q < 0 || q >= m.n_q) throw InvalidArgument("mps: qubit out of range");
}

// Gate on sites (i, i + 1) with local index bit_i + 2 * bit_{i+1}. Leaves the
// center on site i + 1.
void apply_adjacent(MPSState& m, int i, const Mat4& g) {
  mps_move_center(m, i);
  auto& left = m.sites[i];
  auto& right = m.sites[i + 1];
  const Eigen::Index l = left[0].rows();
  const Eigen::Index r = right[0].cols();
  MatX t[2][2];
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) t[s1][s2] = left[s1] * right[s2];
  MatX theta = MatX::Zero(2 * l, 2 * r);
  for (int t1 = 0; t1 < 2; ++t1) {
    for (int t2 = 0; t2 < 2; ++t2) {
      auto blk = theta.block(t1 * l, t2 * r, l, r);
      for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
          const Complex gv = g(t1 + 2 * t2, s1 + 2 * s2);
          if (gv != Complex(0.0)) blk += gv * t[s1][s2];
        }
      }
    }
  }
  Eigen::BDCSVD<MatX> svd(theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double total = sv.squaredNorm();
  Eigen::Index keep = 0;
  const double floor = sv.size() > 0 ? kSingularFloor * sv[0] : 0.0;
  while (keep < sv.size() && keep < m.chi_cap && sv[keep] > floor) ++keep;
  keep = std::max<Eigen::Index>(keep, 1);
  const double kept = sv.head(keep).squaredNorm();
  if (total > 0.0) m.cumulative_truncation += std::max(0.0, (total - kept) / total);
  const Eigen::VectorXd s = sv.head(keep) / std::sqrt(kept);
  const MatX& u = svd.matrixU();
  const MatX sv_dag = s.asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
  for (int t1 = 0; t1 < 2; ++t1) left[t1] = u.block(t1 * l, 0, l, keep);
  for (int t2 = 0; t2 < 2; ++t2) right[t2] = sv_dag.block(0, t2 * r, keep, r);
  m.canonical_center = i + 1;
}

}  // namespace

int MPSState::max_bond() const {
  int b = 1;
  for (const auto& s : sites) b = std::max<int>(b, static_cast<int>(s[0].cols()));
  return b;
}

MPSState mps_zero_state(int n_q, int chi) {
  if (chi < 1) throw InvalidArgument("chi must be >= 1");
  if (n_q < 1) throw InvalidArgument("n_q must be >= 1");
  MPSState m;
  m.n_q = n_q;
  m.chi_cap = chi;
  m.sites.resize(n_q);
  for (auto& s : m.sites) {
    s[0] = MatX::Ones(1, 1);
    s[1] = MatX::Zero(1, 1);
  }
  m.canonical_center = 0;
  return m;
}

void mps_move_center(MPSState& m, int site) {
  check_site(m, site);
  while (m.canonical_center < site) {
    const int c = m.canonical_center;
    auto& a = m.sites[c];
    const Eigen::Index l = a[0].rows(), r = a[0].cols();
    MatX stacked(2 * l, r);
    stacked << a[0], a[1];
    Eigen::HouseholderQR<MatX> qr(stacked);
    const Eigen::Index k = std::min<Eigen::Index>(2 * l, r);
    const MatX q = qr.householderQ() * MatX::Identity(2 * l, k);
    const MatX rr = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    a[0] = q.topRows(l);
    a[1] = q.bottomRows(l);
    auto& nxt = m.sites[c + 1];
    nxt[0] = rr * nxt[0];
    nxt[1] = rr * nxt[1];
    m.canonical_center = c + 1;
  }
  while (m.canonical_center > site) {
    const int c = m.canonical_center;
    auto& a = m.sites[c];
    const Eigen::Index l = a[0].rows(), r = a[0].cols();
    MatX wide(l, 2 * r);
    wide << a[0], a[1];
    const MatX adj = wide.adjoint();
    Eigen::HouseholderQR<MatX> qr(adj);
    const Eigen::Index k = std::min<Eigen::Index>(2 * r, l);
    const MatX q = qr.householderQ() * MatX::Identity(2 * r, k);
    const MatX rr = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const MatX qd = q.adjoint();  // k x 2r, orthonormal rows
    a[0] = qd.leftCols(r);
    a[1] = qd.rightCols(r);
    auto& prv = m.sites[c - 1];
    const MatX rd = rr.adjoint();  // l x k
    prv[0] = prv[0] * rd;
    prv[1] = prv[1] * rd;
    m.canonical_center = c - 1;
  }
}

void mps_apply_one(MPSState& m, int q, const Mat2& u) {
  check_site(m, q);
  auto& a = m.sites[q];
  const MatX a0 = a[0], a1 = a[1];
  a[0] = u(0, 0) * a0 + u(0, 1) * a1;
  a[1] = u(1, 0) * a0 + u(1, 1) * a1;
}

void mps_apply_two(MPSState& m, int a, int b, const Mat4& u) {
  check_site(m, a);
  check_site(m, b);
  if (a == b) throw InvalidArgument("mps: two-qubit gate on one qubit");
  const Mat4 sw = swap_matrix();
  const int lo = std::min(a, b), hi = std::max(a, b);
  // Carry qubit lo up to site hi - 1.
  for (int s = lo; s < hi - 1; ++s) apply_adjacent(m, s, sw);
  // Now qubit lo sits on site hi - 1 and qubit hi on site hi.
  apply_adjacent(m, hi - 1, a == lo ? u : Mat4(sw * u * sw));
  for (int s = hi - 2; s >= lo; --s) apply_adjacent(m, s, sw);
}

MPSState mps_run(const Circuit& c, int chi) {
  MPSState m = mps_zero_state(c.n_q, chi);
  for (const Op& op : lower(c)) {
    if (op.qubits[1] < 0) {
      mps_apply_one(m, op.qubits[0], op.m2);
    } else {
      mps_apply_two(m, op.qubits[0], op.qubits[1], op.m4);
    }
  }
  return m;
}

Complex mps_amplitude(const MPSState& m, const std::string& bits) {
  if (static_cast<int>(bits.size()) != m.n_q) {
    throw InvalidArgument("mps_amplitude: bitstring length does not match n_q");
  }
  MatX v = MatX::Ones(1, 1);
  for (int q = 0; q < m.n_q; ++q) {
    if (bits[q] != '0' && bits[q] != '1') throw InvalidArgument("bitstring must contain 0/1 only");
    v = v * m.sites[q][bits[q] - '0'];
  }
  return v(0, 0);
}

double mps_norm(const MPSState& m) {
  MatX e = MatX::Ones(1, 1);
  for (const auto& s : m.sites) e = s[0].adjoint() * e * s[0] + s[1].adjoint() * e * s[1];
  return std::sqrt(std::abs(e(0, 0)));
}

double mps_canonical_error(const MPSState& m) {
  double worst = 0.0;
  for (int q = 0; q < m.n_q; ++q) {
    const auto& s = m.sites[q];
    if (q < m.canonical_center) {
      const MatX g = s[0].adjoint() * s[0] + s[1].adjoint() * s[1];
      worst = std::max(worst, (g - MatX::Identity(g.rows(), g.cols())).norm());
    } else if (q > m.canonical_center) {
      const MatX g = s[0] * s[0].adjoint() + s[1] * s[1].adjoint();
      worst = std::max(worst, (g - MatX::Identity(g.rows(), g.cols())).norm());
    }
  }
  return worst;
}

Counts mps_sample(const MPSState& state, std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  MPSState m = state;
  mps_move_center(m, 0);
  Counts out;
  std::string prefix;
  prefix.reserve(m.n_q);
  // Sites right of the center are right-isometric, so |v A[s]|^2 is the
  // unnormalized conditional marginal of bit s given the prefix.
  std::function<void(int, const MatX&, std::uint64_t)> split = [&](int site, const MatX& v,
                                                                   std::uint64_t n) {
    if (site == m.n_q) {
      out[prefix] += n;
      return;
    }
    const MatX w0 = v * m.sites[site][0];
    const MatX w1 = v * m.sites[site][1];
    const double p0 = w0.squaredNorm(), p1 = w1.squaredNorm();
    const double tot = p0 + p1;
    std::uint64_t n0 = 0;
    if (tot > 0.0) {
      const double q0 = std::clamp(p0 / tot, 0.0, 1.0);
      n0 = std::binomial_distribution<std::uint64_t>(n, q0)(rng);
    }
    const std::uint64_t n1 = n - n0;
    if (n0 > 0) {
      prefix.push_back('0');
      split(site + 1, w0 / std::sqrt(p0), n0);
      prefix.pop_back();
    }
    if (n1 > 0) {
      prefix.push_back('1');
      split(site + 1, p1 > 0.0 ? MatX(w1 / std::sqrt(p1)) : w1, n1);
      prefix.pop_back();
    }
  };
  split(0, MatX::Ones(1, 1), shots);
  return out;
}

ChiAttempt attempt_chi(const Circuit& c, int chi, const std::optional<std::string>& hidden,
                       const ChiSearchConfig& cfg) {
  const MPSState m = mps_run(c, chi);
  ChiAttempt a;
  a.truncation = m.cumulative_truncation;
  Rng r1 = make_stream(cfg.seed, 2 * static_cast<std::uint64_t>(chi));
  a.report = peak_report(mps_sample(m, cfg.shots, r1), cfg.threshold);
  a.report.backend = "mps";
  if (hidden) {
    a.success = a.report.peak_string == *hidden && a.report.is_peaked;
  } else {
    Rng r2 = make_stream(cfg.seed, 2 * static_cast<std::uint64_t>(chi) + 1);
    const PeakednessReport second = peak_report(mps_sample(m, cfg.shots, r2), cfg.threshold);
    a.success = a.report.is_peaked && second.is_peaked &&
                second.peak_string == a.report.peak_string;
  }
  return a;
}

ChiSearchResult find_chi_threshold(const Circuit& c, const std::optional<std::string>& hidden,
                                   const ChiSearchConfig& cfg) {
  if (hidden && static_cast<int>(hidden->size()) != c.n_q) {
    throw InvalidArgument("hidden string length does not match n_q");
  }
  const int full = c.n_q / 2 >= 30 ? (1 << 30) : (1 << (c.n_q / 2));
  const int max_chi = cfg.max_chi > 0 ? cfg.max_chi : full;
  ChiSearchResult res;
  std::map<int, ChiAttempt> cache;
  auto attempt = [&](int chi) -> const ChiAttempt& {
    auto it = cache.find(chi);
    if (it == cache.end()) {
      ++res.runs;
      it = cache.emplace(chi, attempt_chi(c, chi, hidden, cfg)).first;
    }
    return it->second;
  };
  int lo = 0;  // largest known failure (0: none)
  int hi = 1;
  while (!attempt(hi).success) {
    lo = hi;
    if (hi >= max_chi) {
      res.report = attempt(hi).report;
      res.found_string = res.report.peak_string;
      res.truncation = attempt(hi).truncation;
      return res;  // above-max
    }
    hi = std::min(2 * hi, max_chi);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (attempt(mid).success) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  res.chi_th = hi;
  if (hi > 1 && attempt(hi - 1).success) res.spot_check_ok = false;
  if (hi < max_chi && !attempt(hi + 1).success) res.spot_check_ok = false;
  const ChiAttempt& at = attempt(hi);
  res.report = at.report;
  res.found_string = at.report.peak_string;
  res.truncation = at.truncation;
  return res;
}

}  // namespace peaked
