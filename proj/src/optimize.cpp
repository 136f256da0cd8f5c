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

#include "peaked/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "peaked/errors.hpp"

namespace peaked {

OptimizerMethod optimizer_method_from_name(const std::string& name) {
  if (name == "bfgs") return OptimizerMethod::kBfgs;
  if (name == "nelder-mead") return OptimizerMethod::kNelderMead;
  throw InvalidArgument("unknown optimizer method '" + name + "'");
}

const char* optimizer_method_name(OptimizerMethod m) {
  return m == OptimizerMethod::kBfgs ? "bfgs" : "nelder-mead";
}

void OptimizerConfig::validate() const {
  if (max_evaluations <= 0 || !(initial_step > 0.0) || !(convergence_tol > 0.0) ||
      restarts <= 0) {
    throw InvalidArgument("optimizer settings must all be positive");
  }
}

namespace {

using Vec = Eigen::VectorXd;

// Objective wrapper that enforces the evaluation budget and tracks the best
// point seen.
class Budgeted {
 public:
  Budgeted(const GradientObjective& f, bool has_gradient, int budget)
      : f_(f), has_gradient_(has_gradient), budget_(budget) {}

  bool has_gradient() const { return has_gradient_; }

  bool exhausted() const { return evals_ >= budget_; }
  int evaluations() const { return evals_; }
  int remaining() const { return budget_ - evals_; }

  double operator()(const Vec& x, Vec* grad = nullptr) {
    ++evals_;
    std::vector<double> v(x.data(), x.data() + x.size());
    std::vector<double> g;
    double y = f_(v, grad != nullptr ? &g : nullptr);
    if (grad != nullptr) *grad = Eigen::Map<const Vec>(g.data(), static_cast<Eigen::Index>(g.size()));
    if (!std::isfinite(y)) y = std::numeric_limits<double>::infinity();
    if (y < best_f_) {
      best_f_ = y;
      best_x_ = x;
    }
    return y;
  }

  double best_f() const { return best_f_; }
  const Vec& best_x() const { return best_x_; }

 private:
  const GradientObjective& f_;
  bool has_gradient_;
  int budget_;
  int evals_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  Vec best_x_;
};

void run_bfgs(Budgeted& f, const Vec& x0, const OptimizerConfig& cfg) {
  const int n = static_cast<int>(x0.size());
  Vec x = x0;
  double fx = f(x);
  if (fx <= cfg.convergence_tol) return;

  auto gradient = [&](const Vec& at, double f_at, Vec& g) -> bool {
    if (f.has_gradient()) {
      if (f.exhausted()) return false;
      f(at, &g);
      return true;
    }
    if (f.remaining() < 2 * n) return false;
    // Step scales with the objective so the gradient stays accurate near a
    // zero minimum.
    const double h = std::clamp(1e-3 * std::sqrt(std::max(f_at, 0.0)), 1e-7, 1e-4);
    g.resize(n);
    Vec p = at;
    for (int i = 0; i < n; ++i) {
      p[i] = at[i] + h;
      const double up = f(p);
      p[i] = at[i] - h;
      const double dn = f(p);
      p[i] = at[i];
      g[i] = (up - dn) / (2.0 * h);
    }
    return true;
  };

  Vec g;
  if (!gradient(x, fx, g)) return;
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  int stalls = 0;
  while (!f.exhausted() && fx > cfg.convergence_tol) {
    Vec d = -hinv * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
      if (!(slope < 0.0)) break;
    }
    // First iteration: limit the step to initial_step.
    double t = 1.0;
    if (!scaled) t = std::min(1.0, cfg.initial_step / std::max(d.norm(), 1e-300));
    Vec xn;
    double fn = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40 && !f.exhausted(); ++ls) {
      xn = x + t * d;
      fn = f(xn);
      if (fn <= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (hinv.isIdentity()) break;
      hinv.setIdentity();
      continue;
    }
    const double rel = (fx - fn) / std::max(std::abs(fx), 1e-300);
    stalls = rel < 1e-10 ? stalls + 1 : 0;
    if (stalls >= 5) break;
    Vec gn;
    if (!gradient(xn, fn, gn)) break;
    const Vec s = xn - x;
    const Vec y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Vec hy = hinv * y;
      hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
              rho * (hy * s.transpose() + s * hy.transpose());
    }
    x = xn;
    fx = fn;
    g = gn;
    if (g.norm() < 1e-14) break;
  }
}

// Nelder-Mead with dimension-adaptive coefficients (Gao and Han).
void run_nelder_mead(Budgeted& f, const Vec& x0, const OptimizerConfig& cfg) {
  const int n = static_cast<int>(x0.size());
  const double dn = static_cast<double>(std::max(n, 2));
  const double alpha = 1.0, beta = 1.0 + 2.0 / dn, gamma = 0.75 - 1.0 / (2.0 * dn),
               delta = 1.0 - 1.0 / dn;
  std::vector<Vec> simplex(n + 1, x0);
  std::vector<double> fs(n + 1);
  fs[0] = f(x0);
  for (int i = 0; i < n; ++i) {
    simplex[i + 1][i] += cfg.initial_step;
    fs[i + 1] = f(simplex[i + 1]);
  }
  std::vector<int> order(n + 1);
  while (!f.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int lo = order[0], hi = order[n], second = order[n - 1];
    if (fs[lo] <= cfg.convergence_tol) break;
    if (fs[hi] - fs[lo] <= 1e-16 * (std::abs(fs[lo]) + 1e-300)) {
      double spread = 0.0;
      for (const Vec& v : simplex) spread = std::max(spread, (v - simplex[lo]).norm());
      if (spread < 1e-12) break;
    }
    Vec centroid = Vec::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != hi) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);
    const Vec xr = centroid + alpha * (centroid - simplex[hi]);
    const double fr = f(xr);
    if (fr < fs[lo]) {
      const Vec xe = centroid + beta * (xr - centroid);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[hi] = xe;
        fs[hi] = fe;
      } else {
        simplex[hi] = xr;
        fs[hi] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      simplex[hi] = xr;
      fs[hi] = fr;
      continue;
    }
    const bool outside = fr < fs[hi];
    const Vec xc = outside ? Vec(centroid + gamma * (xr - centroid))
                           : Vec(centroid - gamma * (centroid - simplex[hi]));
    const double fc = f(xc);
    if (fc < (outside ? fr : fs[hi])) {
      simplex[hi] = xc;
      fs[hi] = fc;
      continue;
    }
    for (int i = 0; i <= n && !f.exhausted(); ++i) {
      if (i == lo) continue;
      simplex[i] = simplex[lo] + delta * (simplex[i] - simplex[lo]);
      fs[i] = f(simplex[i]);
    }
  }
}

}  // namespace

namespace {

MinimizeResult minimize_impl(const GradientObjective& f, bool has_gradient,
                             const std::vector<double>& x0, const OptimizerConfig& cfg) {
  cfg.validate();
  Budgeted bf(f, has_gradient, cfg.max_evaluations);
  const Vec start = Eigen::Map<const Vec>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  const double f0 = bf(start);
  if (!x0.empty() && f0 > cfg.convergence_tol) {
    if (cfg.method == OptimizerMethod::kBfgs) {
      run_bfgs(bf, start, cfg);
    } else {
      run_nelder_mead(bf, start, cfg);
    }
  }
  MinimizeResult r;
  r.evaluations = bf.evaluations();
  r.f = bf.best_f();
  r.improved = r.f < f0;
  const Vec& bx = r.improved ? bf.best_x() : start;
  r.x.assign(bx.data(), bx.data() + bx.size());
  if (!r.improved) r.f = f0;
  r.converged = r.f <= cfg.convergence_tol;
  return r;
}

}  // namespace

MinimizeResult minimize(const Objective& f, const std::vector<double>& x0,
                        const OptimizerConfig& cfg) {
  const GradientObjective wrapped = [&f](const std::vector<double>& x, std::vector<double>*) {
    return f(x);
  };
  return minimize_impl(wrapped, false, x0, cfg);
}

MinimizeResult minimize(const GradientObjective& fg, const std::vector<double>& x0,
                        const OptimizerConfig& cfg) {
  return minimize_impl(fg, true, x0, cfg);
}

}  // namespace peaked
