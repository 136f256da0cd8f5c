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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peaked/optimize.hpp"

namespace peaked {

enum class Study { kPeakedness, kDeltaThreshold, kChiThreshold };
const char* study_name(Study s);  // "peakedness" | "delta-threshold" | "chi-threshold"
Study study_from_name(const std::string& name);

enum class Backend { kDirect, kMps };
const char* backend_name(Backend b);
Backend backend_from_name(const std::string& name);

struct SweepSpec {
  Study study = Study::kPeakedness;
  std::vector<int> n_q{6, 8};
  std::vector<int> n_l{4, 8};
  double delta = 0.003;
  double delta_lo = 1e-4;  // bisection bracket of the threshold study
  double delta_hi = 0.1;
  double delta_rel_width = 0.1;
  int seeds = 10;
  std::uint64_t shots = 100000;  // 0: exact probabilities (direct backend only)
  double threshold = 10.0;
  Backend backend = Backend::kDirect;
  int chi = 0;      // MPS bond cap for the peakedness study, 0: 2^(n_q/2)
  int max_chi = 0;  // search ceiling for the chi study, 0: 2^(n_q/2)
  std::uint64_t master_seed = 1;
  OptimizerConfig optimizer;
  int threads = 0;      // 0: hardware concurrency
  bool timing = true;   // false writes wall_ms = 0 for byte-stable output

  /// Throws InvalidArgument for empty grids, odd n_q, seeds < 1 and the like.
  void validate() const;
};

/// Parses "key = value" lines; '#' starts a comment. Lists are comma
/// separated. Unknown keys are rejected.
SweepSpec parse_sweep_config(const std::string& text);

struct SweepRow {
  int n_q = 0;
  int n_l = 0;
  std::uint64_t seed = 0;  // pipeline seed of this instance
  double delta = 0.0;      // achieved mean block deviation
  double p_peak = 0.0;     // probability (or frequency) of the hidden string
  double p_second = 0.0;   // largest probability among the other strings
  double ratio = 0.0;
  bool is_peaked = false;
  std::string backend;
  std::optional<int> chi;
  double wall_ms = 0.0;
  std::string error;  // non-empty when the instance failed
};

struct CellSummary {
  int n_q = 0;
  int n_l = 0;
  double median_p_peak = 0.0;
  double median_ratio = 0.0;
  std::optional<double> delta_th;  // threshold study
  std::optional<double> median_chi_th;  // chi study; above-max seeds count as 2 * max
  bool resolved = true;
  int failures = 0;
};

struct SweepResult {
  Study study = Study::kPeakedness;
  std::vector<SweepRow> rows;  // sorted by (n_q, n_l, seed index)
  std::vector<CellSummary> cells;
};

/// Pipeline seed of instance `index` in cell (n_q, n_l).
std::uint64_t cell_seed(std::uint64_t master, int n_q, int n_l, int index);

SweepResult sweep_peakedness(const SweepSpec& spec);
SweepResult sweep_delta_threshold(const SweepSpec& spec);
SweepResult sweep_chi_threshold(const SweepSpec& spec);
SweepResult run_sweep(const SweepSpec& spec);

inline constexpr const char* kCsvHeader =
    "n_q,n_l,seed,delta,p_peak,p_second,ratio,is_peaked,backend,chi,wall_ms";

std::string to_csv(const SweepResult& r);

/// Sidecar JSON with the spec, per-cell summaries and failures.
std::string sweep_meta_json(const SweepSpec& spec, const SweepResult& r);

/// Line chart of the per-cell statistic against n_l, one series per n_q.
std::string render_svg(const SweepResult& r);

double median(std::vector<double> v);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace peaked
