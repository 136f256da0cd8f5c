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

#include "peaked/obfuscator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "peaked/errors.hpp"
#include "peaked/parallel.hpp"

namespace peaked {

DeviationStats DeviationStats::from(std::vector<double> values) {
  DeviationStats s;
  s.per_block = std::move(values);
  if (!s.per_block.empty()) {
    s.mean = std::accumulate(s.per_block.begin(), s.per_block.end(), 0.0) /
             static_cast<double>(s.per_block.size());
    s.max = *std::max_element(s.per_block.begin(), s.per_block.end());
  }
  return s;
}

namespace {

constexpr int kAngles = 18;

std::vector<double> flatten(const Block& b) {
  std::vector<double> x;
  x.reserve(kAngles);
  for (const auto& u : b.angles) {
    x.push_back(u.theta);
    x.push_back(u.phi);
    x.push_back(u.lambda);
  }
  return x;
}

Block make_block(const std::vector<double>& x, double phase) {
  Block b;
  b.layout = Layout::kStandard;
  b.angles.resize(6);
  for (int k = 0; k < 6; ++k) b.angles[k] = {x[3 * k], x[3 * k + 1], x[3 * k + 2]};
  b.phase = phase;
  return b;
}

// Squared deviation minimized over the global phase, ||U - e^{ia} M||^2 / 16
// with e^{ia} = tr(M^+ U) / |tr(M^+ U)|. The residual is formed explicitly so
// the value stays accurate far below 1e-16. By the envelope theorem the
// gradient is Re sum(conj(R) dU) / 8.
double phase_free_objective(const Mat4& target, const std::vector<double>& x,
                            std::vector<double>* grad) {
  Mat4 m;
  std::array<Mat4, kAngles> d;
  if (grad == nullptr) {
    m = standard_block_matrix(x.data());
  } else {
    standard_block_jacobian(x.data(), m, d);
  }
  const Complex t = target.conjugate().cwiseProduct(m).sum();
  const Complex ph = std::abs(t) > 0.0 ? t / std::abs(t) : Complex(1.0);
  const Mat4 r = m - ph * target;
  if (grad != nullptr) {
    grad->assign(kAngles, 0.0);
    const Mat4 cr = r.conjugate();
    for (int k = 0; k < kAngles; ++k) (*grad)[k] = std::real(cr.cwiseProduct(d[k]).sum()) / 8.0;
  }
  return r.squaredNorm() / 16.0;
}

double best_phase(const Mat4& target, const std::vector<double>& x) {
  // e^{i a} U closest to M for a = arg tr(U^+ M).
  const Complex t = (standard_block_matrix(x.data()).adjoint() * target).trace();
  return std::abs(t) > 0.0 ? std::arg(t) : 0.0;
}

double max_angle_distance(const Block& a, const Block& b) {
  if (a.angles.size() != b.angles.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t k = 0; k < a.angles.size(); ++k) {
    d = std::max({d, std::abs(normalize_angle(a.angles[k].theta - b.angles[k].theta)),
                  std::abs(normalize_angle(a.angles[k].phi - b.angles[k].phi)),
                  std::abs(normalize_angle(a.angles[k].lambda - b.angles[k].lambda))});
  }
  return d;
}

}  // namespace

SynthesisResult synthesize_block(const Mat4& target, Rng& rng, const OptimizerConfig& cfg) {
  cfg.validate();
  const GradientObjective fg = [&target](const std::vector<double>& x, std::vector<double>* g) {
    return phase_free_objective(target, x, g);
  };
  std::vector<double> best_x;
  double best_f = std::numeric_limits<double>::infinity();
  int evals = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> x0(kAngles);
    for (double& v : x0) v = uniform_angle(rng);
    MinimizeResult res = minimize(fg, x0, cfg);
    evals += res.evaluations;
    if (!res.converged && cfg.method == OptimizerMethod::kBfgs) {
      // Simplex polish from the quasi-Newton end point.
      OptimizerConfig nm = cfg;
      nm.method = OptimizerMethod::kNelderMead;
      nm.initial_step = std::min(cfg.initial_step, std::max(1e-4, std::sqrt(res.f)));
      MinimizeResult polish = minimize(fg, res.x, nm);
      evals += polish.evaluations;
      if (polish.f < res.f) res = std::move(polish);
    }
    if (res.f < best_f) {
      best_f = res.f;
      best_x = std::move(res.x);
    }
    if (best_f <= cfg.convergence_tol) break;
  }
  SynthesisResult out;
  out.block = make_block(best_x, best_phase(target, best_x));
  out.achieved = deviation(block_matrix(out.block), target);
  out.base_deviation = out.achieved;
  out.evaluations = evals;
  return out;
}

std::vector<double> random_direction(Rng& rng) {
  std::vector<double> v(kAngles);
  for (double& x : v) x = 2.0 * uniform01(rng) - 1.0;
  return v;
}

SynthesisResult perturb_block(const Mat4& target, const Block& base, double delta_target,
                              const std::vector<double>& direction) {
  if (!(delta_target >= 0.0)) throw InvalidArgument("delta_target must be >= 0");
  if (base.layout != Layout::kStandard || direction.size() != kAngles) {
    throw InvalidArgument("perturb_block: needs a standard block and an 18-entry direction");
  }
  SynthesisResult out;
  out.block = base;
  out.base_deviation = deviation(block_matrix(base), target);
  out.achieved = out.base_deviation;
  if (delta_target == 0.0 || out.base_deviation >= delta_target) return out;

  const std::vector<double> x0 = flatten(base);
  auto at = [&](double eps) {
    std::vector<double> x(x0);
    for (int k = 0; k < kAngles; ++k) x[k] += eps * direction[k];
    return x;
  };
  auto dev = [&](double eps) {
    return deviation(block_matrix(make_block(at(eps), base.phase)), target);
  };
  double lo = 0.0, hi = 1e-3;
  double dev_hi = dev(hi);
  while (dev_hi < delta_target && hi < 8.0) {
    lo = hi;
    hi *= 2.0;
    dev_hi = dev(hi);
  }
  if (dev_hi < delta_target) return out;  // unreachable along this direction
  double eps = hi;
  double d = dev_hi;
  for (int it = 0; it < 100 && std::abs(d - delta_target) > 0.01 * delta_target; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double dm = dev(mid);
    if (dm < delta_target) {
      lo = mid;
    } else {
      hi = mid;
    }
    eps = mid;
    d = dm;
  }
  out.block = make_block(at(eps), base.phase);
  out.achieved = deviation(block_matrix(out.block), target);
  return out;
}

SynthesisResult resynthesize_block(const Mat4& target, double delta_target, Rng& rng,
                                   const OptimizerConfig& cfg, const Block* original) {
  if (!(delta_target >= 0.0)) throw InvalidArgument("delta_target must be >= 0");
  const SynthesisResult base = synthesize_block(target, rng, cfg);
  const std::vector<double> direction = random_direction(rng);
  SynthesisResult out = perturb_block(target, base.block, delta_target, direction);
  out.evaluations = base.evaluations;
  if (original != nullptr) out.param_distance = max_angle_distance(out.block, *original);
  if (delta_target > 0.0 && out.achieved > 1.5 * delta_target) {
    throw SynthesisFailure("block synthesis stuck at deviation " + std::to_string(out.achieved), -1);
  }
  return out;
}

MirrorObfuscator::MirrorObfuscator(Circuit c, std::uint64_t master_seed, OptimizerConfig cfg,
                                   int threads)
    : circuit_(std::move(c)), master_(master_seed), cfg_(cfg), threads_(threads) {
  cfg_.validate();
  if (circuit_.is_flat()) throw InvalidArgument("obfuscate_mirror: flat circuit");
  const int total = static_cast<int>(circuit_.layers.size());
  if (circuit_.half_depth <= 0 || circuit_.half_depth >= total) {
    throw InvalidArgument("obfuscate_mirror: circuit has no mirror half");
  }
  for (int l = circuit_.half_depth; l < total; ++l) {
    for (int s = 0; s < static_cast<int>(circuit_.layers[l].size()); ++s) {
      const Block& b = circuit_.layers[l][s];
      validate_block(b);
      if (b.layout != Layout::kStandard) {
        throw UnsupportedLayout("obfuscate_mirror: mirror block is not standard");
      }
      refs_.push_back({l, s});
      targets_.push_back(block_matrix(b));
    }
  }
}

void MirrorObfuscator::ensure_base() {
  if (!base_.empty() || refs_.empty()) return;
  std::vector<Block> base(refs_.size());
  std::vector<std::vector<double>> dirs(refs_.size());
  parallel_for(refs_.size(), threads_, [&](std::size_t i) {
    Rng rng = make_stream(master_, i);
    base[i] = synthesize_block(targets_[i], rng, cfg_).block;
    dirs[i] = random_direction(rng);
  });
  base_ = std::move(base);
  directions_ = std::move(dirs);
}

std::pair<Circuit, DeviationStats> MirrorObfuscator::apply(double delta_target) {
  if (!(delta_target >= 0.0)) throw InvalidArgument("delta_target must be >= 0");
  ensure_base();
  Circuit out = circuit_;
  std::vector<double> achieved(refs_.size());
  for (std::size_t i = 0; i < refs_.size(); ++i) {
    const SynthesisResult r = perturb_block(targets_[i], base_[i], delta_target, directions_[i]);
    if (delta_target > 0.0 && r.achieved > 1.5 * delta_target) {
      throw SynthesisFailure("mirror block " + std::to_string(i) + " stuck at deviation " +
                                 std::to_string(r.achieved) + " (seed " +
                                 std::to_string(master_) + ")",
                             static_cast<long>(i));
    }
    Block b = r.block;
    b.pair = out.layers[refs_[i].layer][refs_[i].slot].pair;
    out.layers[refs_[i].layer][refs_[i].slot] = std::move(b);
    achieved[i] = r.achieved;
  }
  return {std::move(out), DeviationStats::from(std::move(achieved))};
}

std::pair<Circuit, DeviationStats> obfuscate_mirror(const Circuit& c, double delta_target, Rng& rng,
                                                    const OptimizerConfig& cfg, int threads) {
  MirrorObfuscator ob(c, rng(), cfg, threads);
  return ob.apply(delta_target);
}

std::vector<SymmetryPair> mirror_symmetry_scan(const Circuit& c) {
  if (c.is_flat() || static_cast<int>(c.layers.size()) != 2 * c.half_depth) {
    throw InvalidArgument("symmetry scan needs a full mirrored circuit");
  }
  std::vector<SymmetryPair> out;
  for (int l = 0; l < c.half_depth; ++l) {
    for (int s = 0; s < static_cast<int>(c.layers[l].size()); ++s) {
      SymmetryPair p;
      p.first = {l, s};
      p.partner = mirror_partner(c, p.first);
      const Block& a = c.layers[l][s];
      const auto& partner_layer = c.layers[p.partner.layer];
      if (p.partner.slot < 0 || p.partner.slot >= static_cast<int>(partner_layer.size())) {
        p.deviation = std::numeric_limits<double>::infinity();
      } else {
        const Block& b = partner_layer[p.partner.slot];
        const bool same = (a.pair[0] == b.pair[0] && a.pair[1] == b.pair[1]);
        const bool swapped = (a.pair[0] == b.pair[1] && a.pair[1] == b.pair[0]);
        if (!same && !swapped) {
          p.deviation = std::numeric_limits<double>::infinity();
        } else {
          Mat4 mb = block_matrix(b).adjoint();
          if (swapped) {
            // Re-express b in a's local ordering.
            Mat4 perm = Mat4::Zero();
            perm(0, 0) = perm(1, 2) = perm(2, 1) = perm(3, 3) = 1.0;
            mb = perm * mb * perm;
          }
          p.deviation = deviation(block_matrix(a), mb);
        }
      }
      out.push_back(p);
    }
  }
  return out;
}

namespace {

// Template layers of the tail reduction: pairs plus the flat angle vector.
struct TemplateLayout {
  std::vector<std::vector<std::array<int, 2>>> pairs;  // per template layer
  int blocks = 0;
};

// Template application G' (phase-free blocks) and the row-match objective
// f = 1 - |sum_x <e_x| G' |v_x>| / R with v_x = conj(row_x(G)).
class RowMatch {
 public:
  RowMatch(int n_q, TemplateLayout layout, std::vector<std::uint64_t> rows,
           std::vector<VecX> v)
      : n_q_(n_q), layout_(std::move(layout)), rows_(std::move(rows)), v_(std::move(v)) {}

  double operator()(const std::vector<double>& x, std::vector<double>* grad) const {
    const int nb = layout_.blocks;
    std::vector<Mat4> m(nb);
    std::vector<std::array<Mat4, kAngles>> d;
    if (grad != nullptr) {
      d.resize(nb);
      for (int k = 0; k < nb; ++k) standard_block_jacobian(x.data() + kAngles * k, m[k], d[k]);
      grad->assign(x.size(), 0.0);
    } else {
      for (int k = 0; k < nb; ++k) m[k] = standard_block_matrix(x.data() + kAngles * k);
    }
    const int depth = static_cast<int>(layout_.pairs.size());
    Complex s = 0.0;
    std::vector<Complex> ds(grad != nullptr ? x.size() : 0, Complex(0.0));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      // Forward states F_k (before template layer k).
      std::vector<VecX> fwd(depth + 1);
      fwd[0] = v_[r];
      int k0 = 0;
      for (int l = 0; l < depth; ++l) {
        fwd[l + 1] = fwd[l];
        for (const auto& p : layout_.pairs[l]) apply_two_qubit(fwd[l + 1], p[0], p[1], m[k0++]);
      }
      s += fwd[depth][static_cast<Eigen::Index>(rows_[r])];
      if (grad == nullptr) continue;
      VecX bwd = VecX::Zero(fwd[0].size());
      bwd[static_cast<Eigen::Index>(rows_[r])] = 1.0;
      int kend = nb;
      for (int l = depth - 1; l >= 0; --l) {
        const int width = static_cast<int>(layout_.pairs[l].size());
        const int kbeg = kend - width;
        for (int j = 0; j < width; ++j) {
          const int k = kbeg + j;
          const auto& p = layout_.pairs[l][j];
          // w = (other blocks of the layer) F_l = m_k^+ F_{l+1}
          VecX w = fwd[l + 1];
          apply_two_qubit(w, p[0], p[1], m[k].adjoint());
          const Mat4 e = environment(bwd, w, p[0], p[1]);
          for (int a = 0; a < kAngles; ++a) {
            ds[kAngles * k + a] += d[k][a].cwiseProduct(e).sum();
          }
        }
        // bwd <- L_l^T bwd
        for (int j = 0; j < width; ++j) {
          const auto& p = layout_.pairs[l][j];
          apply_two_qubit(bwd, p[0], p[1], m[kbeg + j].transpose());
        }
        kend = kbeg;
      }
    }
    const double n_rows = static_cast<double>(rows_.size());
    const double as = std::abs(s);
    if (grad != nullptr && as > 0.0) {
      for (std::size_t a = 0; a < x.size(); ++a) {
        (*grad)[a] = -std::real(std::conj(s) * ds[a]) / (as * n_rows);
      }
    }
    return std::max(0.0, 1.0 - as / n_rows);
  }

 private:
  // E(i, j) = sum over the other qubits of bwd[i, rest] * w[j, rest], where
  // i, j are local indices on (a, b).
  Mat4 environment(const VecX& bwd, const VecX& w, int a, int b) const {
    Mat4 e = Mat4::Zero();
    const std::uint64_t ma = 1ULL << a, mb = 1ULL << b;
    const std::uint64_t dim = 1ULL << n_q_;
    for (std::uint64_t base = 0; base < dim; ++base) {
      if ((base & ma) || (base & mb)) continue;
      const std::uint64_t idx[4] = {base, base | ma, base | mb, base | ma | mb};
      for (int i = 0; i < 4; ++i) {
        const Complex bi = bwd[static_cast<Eigen::Index>(idx[i])];
        if (bi == Complex(0.0)) continue;
        for (int j = 0; j < 4; ++j) e(i, j) += bi * w[static_cast<Eigen::Index>(idx[j])];
      }
    }
    return e;
  }

  int n_q_;
  TemplateLayout layout_;
  std::vector<std::uint64_t> rows_;
  std::vector<VecX> v_;
};

}  // namespace

ReductionResult reduce_tail_group(const Circuit& c, const std::vector<std::uint64_t>& rows,
                                  Rng& rng, const ReductionConfig& cfg) {
  cfg.optimizer.validate();
  if (c.is_flat()) throw InvalidArgument("reduce_tail_group: flat circuit");
  if (c.n_q > 14) throw ResourceLimit("reduce_tail_group: n_q above 14");
  const int total = static_cast<int>(c.layers.size());
  const int mirror_layers = total - c.half_depth;
  if (cfg.depth < 2 || cfg.depth > mirror_layers) {
    throw InvalidArgument("reduce_tail_group: depth must be in [2, mirror layers]");
  }
  if (rows.empty()) throw InvalidArgument("reduce_tail_group: no rows");
  const std::uint64_t dim = 1ULL << c.n_q;
  for (auto r : rows) {
    if (r >= dim) throw InvalidArgument("reduce_tail_group: row index out of range");
  }
  const int first = total - cfg.depth;

  // Rows of the group operator G: row_x^T = G^T e_x.
  std::vector<VecX> v;
  for (auto r : rows) {
    VecX e = VecX::Zero(static_cast<Eigen::Index>(dim));
    e[static_cast<Eigen::Index>(r)] = 1.0;
    for (int l = total - 1; l >= first; --l) {
      for (const Block& b : c.layers[l]) {
        apply_two_qubit(e, b.pair[0], b.pair[1], block_matrix(b).transpose());
      }
    }
    v.push_back(e.conjugate());
  }

  TemplateLayout layout;
  std::vector<double> x_orig;
  for (int l = first; l < total - 1; ++l) {
    std::vector<std::array<int, 2>> pairs;
    for (const Block& b : c.layers[l]) {
      pairs.push_back(b.pair);
      ++layout.blocks;
      if (b.layout == Layout::kStandard) {
        const auto f = flatten(b);
        x_orig.insert(x_orig.end(), f.begin(), f.end());
      } else {
        for (int k = 0; k < kAngles; ++k) x_orig.push_back(uniform_angle(rng));
      }
    }
    layout.pairs.push_back(std::move(pairs));
  }
  const RowMatch objective(c.n_q, layout, rows, v);
  const GradientObjective fg = [&objective](const std::vector<double>& x, std::vector<double>* g) {
    return objective(x, g);
  };

  std::vector<double> best_x = x_orig;
  double best_f = std::numeric_limits<double>::infinity();
  int evals = 0;
  for (int r = 0; r <= cfg.optimizer.restarts; ++r) {
    std::vector<double> x0 = x_orig;
    if (r > 0) {
      for (double& a : x0) a = uniform_angle(rng);
    }
    const MinimizeResult res = minimize(fg, x0, cfg.optimizer);
    evals += res.evaluations;
    if (res.f < best_f) {
      best_f = res.f;
      best_x = res.x;
    }
    if (best_f <= cfg.optimizer.convergence_tol) break;
  }
  ReductionResult out;
  out.rms_error = std::sqrt(2.0 * best_f);
  out.evaluations = evals;
  if (!(out.rms_error <= cfg.tolerance)) {
    throw ReductionFailure("tail reduction row error " + std::to_string(out.rms_error) +
                           " exceeds tolerance " + std::to_string(cfg.tolerance));
  }
  out.circuit = c;
  out.circuit.layers.resize(first);
  int k = 0;
  for (const auto& pairs : layout.pairs) {
    Layer layer;
    for (const auto& p : pairs) {
      std::vector<double> x(best_x.begin() + kAngles * k, best_x.begin() + kAngles * (k + 1));
      Block b = make_block(x, 0.0);
      b.pair = p;
      layer.push_back(std::move(b));
      ++k;
    }
    out.circuit.layers.push_back(std::move(layer));
  }
  return out;
}

}  // namespace peaked
