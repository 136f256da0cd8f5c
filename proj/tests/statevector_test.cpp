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
#include "peaked/pipeline.hpp"
#include "peaked/statevector.hpp"

namespace peaked {
namespace {

TEST(StateVector, MatchesDenseUnitaryColumn) {
  Rng rng = make_stream(61, 0);
  const Circuit c = generate_random_half(6, 4, rng);
  const StateVector s = run_statevector(c);
  EXPECT_LT((s.amplitudes - circuit_unitary(c).col(0)).norm(), 1e-12);
  double total = 0.0;
  for (double p : probabilities(s)) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(StateVector, ResourceCap) {
  Circuit c;
  c.n_q = 22;
  EXPECT_THROW(run_statevector(c), ResourceLimit);
  c.n_q = 8;
  EXPECT_THROW(run_statevector(c, 6), ResourceLimit);
}

TEST(StateVector, PeakReportTieBreakAndRatio) {
  std::vector<double> p(8, 0.0);
  p[bits_to_index("110")] = 0.4;
  p[bits_to_index("011")] = 0.4;
  p[bits_to_index("000")] = 0.2;
  const auto r = peak_report(p, 3);
  EXPECT_EQ(r.peak_string, "011");
  EXPECT_EQ(r.second_string, "110");
  EXPECT_DOUBLE_EQ(r.ratio, 1.0);
  EXPECT_FALSE(r.is_peaked);
}

TEST(StateVector, ExactFloorGivesInfiniteRatio) {
  std::vector<double> p(4, 1e-20);
  p[2] = 1.0;
  const auto r = peak_report(p, 2);
  EXPECT_TRUE(std::isinf(r.ratio));
  EXPECT_TRUE(r.is_peaked);
  EXPECT_EQ(format_number(r.ratio), "inf");
  EXPECT_THROW(peak_report(std::vector<double>(3, 0.3), 2), InvalidArgument);
}

TEST(StateVector, CountsReport) {
  const Counts c{{"01", 90}, {"10", 9}, {"11", 1}};
  const auto r = peak_report(c);
  EXPECT_EQ(r.peak_string, "01");
  EXPECT_EQ(r.shots, 100u);
  EXPECT_DOUBLE_EQ(r.ratio, 10.0);
  EXPECT_TRUE(r.is_peaked);
  EXPECT_THROW(peak_report(Counts{}), InvalidArgument);
}

TEST(StateVector, SamplingMatchesDistribution) {
  Rng rng = make_stream(62, 0);
  const Circuit c = generate_random_half(8, 3, rng);
  const StateVector s = run_statevector(c);
  Rng sr = make_stream(62, 1);
  const Counts counts = sample(s, 100000, sr);
  std::uint64_t total = 0;
  for (const auto& [k, v] : counts) {
    EXPECT_EQ(k.size(), 8u);
    total += v;
  }
  EXPECT_EQ(total, 100000u);
  EXPECT_LT(total_variation(counts, probabilities(s)), 0.02);
}

TEST(StateVector, SamplingIsSeeded) {
  Rng rng = make_stream(63, 0);
  const StateVector s = run_statevector(generate_random_half(4, 2, rng));
  Rng a = make_stream(1, 2), b = make_stream(1, 2);
  EXPECT_EQ(sample(s, 1000, a), sample(s, 1000, b));
}

TEST(StateVector, FormatNumber) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(std::stod(format_number(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(StateVector, TotalVariationOracle) {
  const Counts c{{"0", 3}, {"1", 1}};
  EXPECT_NEAR(total_variation(c, {0.5, 0.5}), 0.25, 1e-15);
}

}  // namespace
}  // namespace peaked
