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
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "peaked/errors.hpp"
#include "peaked/harness.hpp"

namespace peaked {
namespace {

SweepSpec small_spec() {
  SweepSpec s;
  s.n_q = {4, 6};
  s.n_l = {2, 4};
  s.seeds = 3;
  s.shots = 0;
  s.timing = false;
  s.threads = 1;
  return s;
}

TEST(Harness, ParseConfig) {
  const SweepSpec s = parse_sweep_config(
      "# peakedness grid\n"
      "study = delta-threshold\n"
      "n_q = 6, 8\n"
      "n_l=4,8,16\n"
      "seeds = 5   # per cell\n"
      "shots = 0\n"
      "backend = direct\n"
      "timing = false\n"
      "optimizer.method = nelder-mead\n"
      "optimizer.max_evaluations = 1234\n");
  EXPECT_EQ(s.study, Study::kDeltaThreshold);
  EXPECT_EQ(s.n_q, (std::vector<int>{6, 8}));
  EXPECT_EQ(s.n_l, (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(s.seeds, 5);
  EXPECT_EQ(s.shots, 0u);
  EXPECT_FALSE(s.timing);
  EXPECT_EQ(s.optimizer.method, OptimizerMethod::kNelderMead);
  EXPECT_EQ(s.optimizer.max_evaluations, 1234);
}

TEST(Harness, ParseConfigErrors) {
  EXPECT_THROW(parse_sweep_config("bogus = 1\n"), Error);
  EXPECT_THROW(parse_sweep_config("n_q = 5\n"), Error);
  EXPECT_THROW(parse_sweep_config("seeds = 0\n"), Error);
  EXPECT_THROW(parse_sweep_config("n_q\n"), Error);
  EXPECT_THROW(parse_sweep_config("study = nope\n"), Error);
  EXPECT_THROW(parse_sweep_config("shots = 0\nbackend = mps\n"), Error);
}

TEST(Harness, CellSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (int n : {4, 6, 8})
    for (int l : {2, 4})
      for (int i = 0; i < 10; ++i) seen.insert(cell_seed(1, n, l, i));
  EXPECT_EQ(seen.size(), 60u);
  EXPECT_NE(cell_seed(1, 4, 2, 0), cell_seed(2, 4, 2, 0));
}

TEST(Harness, CsvHeaderAndRowOrder) {
  const SweepResult r = run_sweep(small_spec());
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  ASSERT_EQ(r.rows.size(), 12u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1];
    const auto& b = r.rows[i];
    EXPECT_LE(std::make_pair(a.n_q, a.n_l), std::make_pair(b.n_q, b.n_l));
  }
  ASSERT_EQ(r.cells.size(), 4u);
  // delta = 0.003 is deep inside the peaked regime for these small cells.
  for (const auto& c : r.cells) EXPECT_GT(c.median_p_peak, 0.9);
}

TEST(Harness, OutputIndependentOfThreadCount) {
  SweepSpec a = small_spec();
  SweepSpec b = a;
  b.threads = 4;
  EXPECT_EQ(to_csv(run_sweep(a)), to_csv(run_sweep(b)));
}

TEST(Harness, MetaAndSvg) {
  const SweepSpec spec = small_spec();
  const SweepResult r = run_sweep(spec);
  const auto meta = nlohmann::json::parse(sweep_meta_json(spec, r));
  EXPECT_EQ(meta["study"], "peakedness");
  EXPECT_EQ(meta["spec"]["seeds"], 3);
  EXPECT_EQ(meta["cells"].size(), 4u);
  const std::string svg = render_svg(r);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Harness, MedianAndSpearman) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-15);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
  // Ties take average ranks: x ranks (1, 2.5, 2.5, 4).
  EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 0.9486832980505138, 1e-12);
}

TEST(Harness, Names) {
  for (Study s : {Study::kPeakedness, Study::kDeltaThreshold, Study::kChiThreshold})
    EXPECT_EQ(study_from_name(study_name(s)), s);
  EXPECT_EQ(backend_from_name("mps"), Backend::kMps);
  EXPECT_THROW(backend_from_name("gpu"), InvalidArgument);
}

TEST(Harness, TinyDeltaThresholdStudy) {
  SweepSpec s = small_spec();
  s.study = Study::kDeltaThreshold;
  s.n_q = {4};
  s.n_l = {4};
  s.delta_hi = 0.8;
  s.delta_rel_width = 0.5;
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.cells.size(), 1u);
  ASSERT_TRUE(r.cells[0].delta_th.has_value());
  EXPECT_TRUE(r.cells[0].resolved);
  EXPECT_GE(*r.cells[0].delta_th, s.delta_lo);
  EXPECT_LE(*r.cells[0].delta_th, s.delta_hi);
  EXPECT_EQ(r.rows.size(), 3u);

  // A bracket that is peaked at both ends cannot be bisected.
  s.delta_hi = 2e-4;
  const SweepResult u = run_sweep(s);
  EXPECT_FALSE(u.cells[0].resolved);
  EXPECT_FALSE(u.cells[0].delta_th.has_value());
}

TEST(Harness, TinyChiStudy) {
  SweepSpec s = small_spec();
  s.study = Study::kChiThreshold;
  s.backend = Backend::kMps;
  s.shots = 20000;
  s.n_q = {6};
  s.n_l = {2};
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.cells.size(), 1u);
  ASSERT_TRUE(r.cells[0].median_chi_th.has_value());
  EXPECT_LE(*r.cells[0].median_chi_th, 8.0);
  for (const auto& row : r.rows) EXPECT_EQ(row.backend, "mps");
}

}  // namespace
}  // namespace peaked
