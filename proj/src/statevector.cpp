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

#include "peaked/statevector.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "peaked/errors.hpp"

namespace peaked {

StateVector run_statevector(const Circuit& c, int cap) {
  if (c.n_q < 1) throw InvalidArgument("circuit has no qubits");
  if (c.n_q > cap) {
    throw ResourceLimit("dense simulation of " + std::to_string(c.n_q) + " qubits exceeds cap " +
                        std::to_string(cap));
  }
  StateVector s;
  s.n_q = c.n_q;
  s.amplitudes = VecX::Zero(static_cast<Eigen::Index>(1ULL << c.n_q));
  s.amplitudes[0] = 1.0;
  for (const Op& op : lower(c)) {
    if (op.qubits[1] < 0) {
      apply_one_qubit(s.amplitudes, op.qubits[0], op.m2);
    } else {
      apply_two_qubit(s.amplitudes, op.qubits[0], op.qubits[1], op.m4);
    }
  }
  return s;
}

std::vector<double> probabilities(const StateVector& s) {
  std::vector<double> p(static_cast<std::size_t>(s.amplitudes.size()));
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s.amplitudes[static_cast<Eigen::Index>(i)]);
  return p;
}

Counts sample(const StateVector& s, std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  const std::vector<double> p = probabilities(s);
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  const double total = cdf.back();
  std::vector<std::uint64_t> hits(p.size(), 0);
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // Skip zero-probability entries that share the same cumulative value.
    std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    while (p[i] == 0.0 && i + 1 < p.size()) ++i;
    ++hits[i];
  }
  Counts out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] > 0) out[index_to_bits(i, s.n_q)] = hits[i];
  }
  return out;
}

namespace {

PeakednessReport finish(std::vector<std::pair<std::string, double>> entries, double threshold) {
  if (entries.empty()) throw InvalidArgument("peak_report: empty source");
  const auto better = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  const std::size_t top = std::min<std::size_t>(2, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(top),
                    entries.end(), better);
  PeakednessReport r;
  r.peak_string = entries[0].first;
  r.p_peak = entries[0].second;
  if (entries.size() > 1) {
    r.second_string = entries[1].first;
    r.p_second = entries[1].second;
  }
  r.ratio = r.p_second > 0.0 ? r.p_peak / r.p_second : std::numeric_limits<double>::infinity();
  r.is_peaked = r.ratio >= threshold;
  return r;
}

}  // namespace

PeakednessReport peak_report(const std::vector<double>& probs, int n_q, double threshold) {
  if (probs.size() != (std::size_t{1} << n_q)) {
    throw InvalidArgument("peak_report: distribution size does not match n_q");
  }
  std::vector<std::pair<std::string, double>> entries;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] >= kExactProbabilityFloor) entries.emplace_back(index_to_bits(i, n_q), probs[i]);
  }
  if (entries.empty()) throw InvalidArgument("peak_report: distribution is numerically zero");
  PeakednessReport r = finish(std::move(entries), threshold);
  r.shots = 0;
  return r;
}

PeakednessReport peak_report(const Counts& counts, double threshold) {
  std::uint64_t total = 0;
  for (const auto& [k, v] : counts) total += v;
  if (total == 0) throw InvalidArgument("peak_report: no samples");
  std::vector<std::pair<std::string, double>> entries;
  for (const auto& [k, v] : counts) {
    if (v > 0) entries.emplace_back(k, static_cast<double>(v) / static_cast<double>(total));
  }
  PeakednessReport r = finish(std::move(entries), threshold);
  r.shots = total;
  return r;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double total_variation(const Counts& counts, const std::vector<double>& probs) {
  std::uint64_t total = 0;
  for (const auto& [k, v] : counts) total += v;
  if (total == 0) throw InvalidArgument("total_variation: no samples");
  std::vector<double> emp(probs.size(), 0.0);
  for (const auto& [k, v] : counts) {
    const auto i = bits_to_index(k);
    if (i >= emp.size()) throw InvalidArgument("total_variation: bitstring out of range");
    emp[i] = static_cast<double>(v) / static_cast<double>(total);
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) tv += std::abs(emp[i] - probs[i]);
  return 0.5 * tv;
}

}  // namespace peaked
