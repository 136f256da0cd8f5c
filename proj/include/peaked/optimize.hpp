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

#include <functional>
#include <string>
#include <vector>

namespace peaked {

enum class OptimizerMethod {
  kBfgs,        // quasi-Newton with central-difference gradients
  kNelderMead,  // adaptive simplex
};

OptimizerMethod optimizer_method_from_name(const std::string& name);  // "bfgs" | "nelder-mead"
const char* optimizer_method_name(OptimizerMethod m);

struct OptimizerConfig {
  int max_evaluations = 5000;
  double initial_step = 0.5;       // simplex edge / first line-search step, radians
  double convergence_tol = 1e-20;  // stop once f <= this (or on stalls)
  int restarts = 3;
  OptimizerMethod method = OptimizerMethod::kBfgs;

  /// Throws InvalidArgument unless every field is positive.
  void validate() const;
};

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool improved = false;   // f < f(x0)
  bool converged = false;  // reached convergence_tol
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Objective that also fills `grad` (resized to x.size()) when it is non-null.
using GradientObjective = std::function<double(const std::vector<double>&, std::vector<double>*)>;

/// Local minimization from x0 with the configured method. Deterministic.
/// Never returns a point worse than x0; `improved` is false when nothing
/// better was found within the budget. Restarts are the caller's business.
MinimizeResult minimize(const Objective& f, const std::vector<double>& x0,
                        const OptimizerConfig& cfg);

/// As above; BFGS uses the supplied gradient instead of finite differences.
/// Each call of `fg` counts as one evaluation.
MinimizeResult minimize(const GradientObjective& fg, const std::vector<double>& x0,
                        const OptimizerConfig& cfg);

}  // namespace peaked
