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

#include <gtest/gtest.h>

#include "peaked/errors.hpp"
#include "peaked/optimize.hpp"

namespace peaked {
namespace {

double quadratic(const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.1 * i) * (x[i] - 0.1 * i);
  return s;
}

TEST(Optimize, Quadratic18DBothMethods) {
  for (OptimizerMethod m : {OptimizerMethod::kBfgs, OptimizerMethod::kNelderMead}) {
    OptimizerConfig cfg;
    cfg.method = m;
    cfg.max_evaluations = 60000;
    cfg.convergence_tol = 1e-14;
    const MinimizeResult r = minimize(quadratic, std::vector<double>(18, 1.0), cfg);
    EXPECT_TRUE(r.improved);
    EXPECT_LT(r.f, m == OptimizerMethod::kBfgs ? 1e-14 : 1e-6) << optimizer_method_name(m);
    EXPECT_LE(r.evaluations, cfg.max_evaluations + 40);
  }
}

TEST(Optimize, AnalyticGradientOverload) {
  const GradientObjective fg = [](const std::vector<double>& x, std::vector<double>* g) {
    if (g != nullptr) {
      g->resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) (*g)[i] = 2.0 * (i + 1.0) * (x[i] - 0.1 * i);
    }
    return quadratic(x);
  };
  OptimizerConfig cfg;
  cfg.convergence_tol = 1e-20;
  const MinimizeResult r = minimize(fg, std::vector<double>(18, -0.7), cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.f, 1e-20);
}

TEST(Optimize, ConstantObjectiveNeverImproves) {
  const Objective f = [](const std::vector<double>&) { return 3.0; };
  for (OptimizerMethod m : {OptimizerMethod::kBfgs, OptimizerMethod::kNelderMead}) {
    OptimizerConfig cfg;
    cfg.method = m;
    cfg.max_evaluations = 500;
    const std::vector<double> x0{0.3, -0.2};
    const MinimizeResult r = minimize(f, x0, cfg);
    EXPECT_FALSE(r.improved);
    EXPECT_EQ(r.x, x0);
    EXPECT_EQ(r.f, 3.0);
  }
}

TEST(Optimize, Rosenbrock) {
  const Objective f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  for (OptimizerMethod m : {OptimizerMethod::kBfgs, OptimizerMethod::kNelderMead}) {
    OptimizerConfig cfg;
    cfg.method = m;
    cfg.max_evaluations = 20000;
    cfg.convergence_tol = 1e-16;
    const MinimizeResult r = minimize(f, {-1.2, 1.0}, cfg);
    EXPECT_NEAR(r.x[0], 1.0, 1e-4) << optimizer_method_name(m);
    EXPECT_NEAR(r.x[1], 1.0, 1e-4) << optimizer_method_name(m);
  }
}

TEST(Optimize, Deterministic) {
  OptimizerConfig cfg;
  cfg.method = OptimizerMethod::kNelderMead;
  const auto a = minimize(quadratic, std::vector<double>(5, 2.0), cfg);
  const auto b = minimize(quadratic, std::vector<double>(5, 2.0), cfg);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Optimize, ConfigValidation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_evaluations = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = OptimizerConfig{};
  cfg.initial_step = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_EQ(optimizer_method_from_name("nelder-mead"), OptimizerMethod::kNelderMead);
  EXPECT_EQ(optimizer_method_from_name("bfgs"), OptimizerMethod::kBfgs);
  EXPECT_THROW(optimizer_method_from_name("cobyla"), InvalidArgument);
}

}  // namespace
}  // namespace peaked
