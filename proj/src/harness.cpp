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

#include "peaked/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "peaked/errors.hpp"
#include "peaked/mps.hpp"
#include "peaked/obfuscator.hpp"
#include "peaked/parallel.hpp"
#include "peaked/pipeline.hpp"
#include "peaked/statevector.hpp"

namespace peaked {

const char* study_name(Study s) {
  switch (s) {
    case Study::kPeakedness:
      return "peakedness";
    case Study::kDeltaThreshold:
      return "delta-threshold";
    case Study::kChiThreshold:
      return "chi-threshold";
  }
  return "?";
}

Study study_from_name(const std::string& name) {
  if (name == "peakedness") return Study::kPeakedness;
  if (name == "delta-threshold") return Study::kDeltaThreshold;
  if (name == "chi-threshold") return Study::kChiThreshold;
  throw InvalidArgument("unknown study '" + name + "'");
}

const char* backend_name(Backend b) { return b == Backend::kDirect ? "direct" : "mps"; }

Backend backend_from_name(const std::string& name) {
  if (name == "direct") return Backend::kDirect;
  if (name == "mps") return Backend::kMps;
  throw InvalidArgument("unknown backend '" + name + "'");
}

void SweepSpec::validate() const {
  if (n_q.empty() || n_l.empty()) throw InvalidArgument("sweep grids must be nonempty");
  for (int q : n_q) {
    if (q < 4 || q % 2 != 0) throw InvalidArgument("sweep n_q values must be even and >= 4");
  }
  for (int l : n_l) {
    if (l < 1) throw InvalidArgument("sweep n_l values must be >= 1");
  }
  if (seeds < 1) throw InvalidArgument("seeds must be >= 1");
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
  if (!(delta_lo > 0.0) || !(delta_hi > delta_lo)) throw InvalidArgument("bad delta bracket");
  if (!(delta_rel_width > 0.0)) throw InvalidArgument("delta_rel_width must be positive");
  if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  if (chi < 0 || max_chi < 0) throw InvalidArgument("chi must be >= 0");
  if (shots == 0 && (backend == Backend::kMps || study == Study::kChiThreshold)) {
    throw InvalidArgument("exact mode (shots = 0) needs the direct backend");
  }
  optimizer.validate();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_scalar(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (is.fail() || !is.eof()) throw InvalidArgument("bad value for '" + key + "': " + v);
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(parse_scalar<T>(key, trim(item)));
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("bad value for '" + key + "': " + v);
}

}  // namespace

SweepSpec parse_sweep_config(const std::string& text) {
  SweepSpec s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected 'key = value'", lineno, 1);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key == "study") {
      s.study = study_from_name(v);
    } else if (key == "n_q") {
      s.n_q = parse_list<int>(key, v);
    } else if (key == "n_l") {
      s.n_l = parse_list<int>(key, v);
    } else if (key == "delta") {
      s.delta = parse_scalar<double>(key, v);
    } else if (key == "delta_lo") {
      s.delta_lo = parse_scalar<double>(key, v);
    } else if (key == "delta_hi") {
      s.delta_hi = parse_scalar<double>(key, v);
    } else if (key == "delta_rel_width") {
      s.delta_rel_width = parse_scalar<double>(key, v);
    } else if (key == "seeds") {
      s.seeds = parse_scalar<int>(key, v);
    } else if (key == "shots") {
      s.shots = parse_scalar<std::uint64_t>(key, v);
    } else if (key == "threshold") {
      s.threshold = parse_scalar<double>(key, v);
    } else if (key == "backend") {
      s.backend = backend_from_name(v);
    } else if (key == "chi") {
      s.chi = parse_scalar<int>(key, v);
    } else if (key == "max_chi") {
      s.max_chi = parse_scalar<int>(key, v);
    } else if (key == "master_seed") {
      s.master_seed = parse_scalar<std::uint64_t>(key, v);
    } else if (key == "threads") {
      s.threads = parse_scalar<int>(key, v);
    } else if (key == "timing") {
      s.timing = parse_bool(key, v);
    } else if (key == "optimizer.max_evaluations") {
      s.optimizer.max_evaluations = parse_scalar<int>(key, v);
    } else if (key == "optimizer.initial_step") {
      s.optimizer.initial_step = parse_scalar<double>(key, v);
    } else if (key == "optimizer.convergence_tol") {
      s.optimizer.convergence_tol = parse_scalar<double>(key, v);
    } else if (key == "optimizer.restarts") {
      s.optimizer.restarts = parse_scalar<int>(key, v);
    } else if (key == "optimizer.method") {
      s.optimizer.method = optimizer_method_from_name(v);
    } else {
      throw InvalidArgument("unknown config key '" + key + "' on line " + std::to_string(lineno));
    }
  }
  s.validate();
  return s;
}

std::uint64_t cell_seed(std::uint64_t master, int n_q, int n_l, int index) {
  const std::uint64_t cell =
      (static_cast<std::uint64_t>(n_q) << 32) | static_cast<std::uint32_t>(n_l);
  return stream_seed(stream_seed(master, cell), static_cast<std::uint64_t>(index));
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman: need two equal series");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Job {
  int n_q;
  int n_l;
  int index;
};

std::vector<Job> all_jobs(const SweepSpec& spec) {
  std::vector<Job> jobs;
  std::vector<int> qs = spec.n_q, ls = spec.n_l;
  std::sort(qs.begin(), qs.end());
  std::sort(ls.begin(), ls.end());
  for (int q : qs)
    for (int l : ls)
      for (int i = 0; i < spec.seeds; ++i) jobs.push_back({q, l, i});
  return jobs;
}

// Fills the probability columns of a row from a distribution over the hidden
// string and the best competitor.
void fill_from_probabilities(SweepRow& row, const std::vector<double>& p, const std::string& hidden,
                             double threshold) {
  const auto h = bits_to_index(hidden);
  row.p_peak = p[h];
  double second = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i != h) second = std::max(second, p[i]);
  }
  if (second < kExactProbabilityFloor) second = 0.0;
  row.p_second = second;
  row.ratio = second > 0.0 ? row.p_peak / second : std::numeric_limits<double>::infinity();
  row.is_peaked = row.ratio >= threshold;
}

void fill_from_counts(SweepRow& row, const Counts& counts, const std::string& hidden,
                      double threshold) {
  std::uint64_t total = 0, hit = 0, best = 0;
  for (const auto& [k, v] : counts) {
    total += v;
    if (k == hidden) {
      hit = v;
    } else {
      best = std::max(best, v);
    }
  }
  row.p_peak = static_cast<double>(hit) / static_cast<double>(total);
  row.p_second = static_cast<double>(best) / static_cast<double>(total);
  row.ratio = best > 0 ? row.p_peak / row.p_second : std::numeric_limits<double>::infinity();
  row.is_peaked = hit > 0 && row.ratio >= threshold;
}

// Simulates a finished circuit with the sweep's backend and sampling mode.
void measure(SweepRow& row, const Circuit& c, const std::string& hidden, const SweepSpec& spec,
             std::uint64_t seed) {
  Rng rng = make_stream(seed, 0x5a3d);
  if (spec.backend == Backend::kDirect) {
    const StateVector s = run_statevector(c);
    if (spec.shots == 0) {
      fill_from_probabilities(row, probabilities(s), hidden, spec.threshold);
    } else {
      fill_from_counts(row, sample(s, spec.shots, rng), hidden, spec.threshold);
    }
    row.backend = "direct";
  } else {
    const int chi = spec.chi > 0 ? spec.chi : (1 << (c.n_q / 2));
    const MPSState m = mps_run(c, chi);
    fill_from_counts(row, mps_sample(m, spec.shots, rng), hidden, spec.threshold);
    row.backend = "mps";
    row.chi = chi;
  }
}

SweepRow failed_row(const Job& j, std::uint64_t seed, const SweepSpec& spec, const std::string& e) {
  SweepRow row;
  row.n_q = j.n_q;
  row.n_l = j.n_l;
  row.seed = seed;
  row.delta = std::numeric_limits<double>::quiet_NaN();
  row.p_peak = row.p_second = row.ratio = std::numeric_limits<double>::quiet_NaN();
  row.backend = backend_name(spec.backend);
  row.error = e;
  return row;
}

std::vector<CellSummary> summarize(const std::vector<SweepRow>& rows) {
  std::map<std::pair<int, int>, std::vector<const SweepRow*>> by_cell;
  for (const auto& r : rows) by_cell[{r.n_q, r.n_l}].push_back(&r);
  std::vector<CellSummary> out;
  for (const auto& [key, list] : by_cell) {
    CellSummary c;
    c.n_q = key.first;
    c.n_l = key.second;
    std::vector<double> p, ratio;
    for (const SweepRow* r : list) {
      if (!r->error.empty()) {
        ++c.failures;
        continue;
      }
      p.push_back(r->p_peak);
      ratio.push_back(r->ratio);
    }
    c.median_p_peak = median(p);
    c.median_ratio = median(ratio);
    out.push_back(c);
  }
  return out;
}

}  // namespace

SweepResult sweep_peakedness(const SweepSpec& spec) {
  spec.validate();
  const std::vector<Job> jobs = all_jobs(spec);
  std::vector<SweepRow> rows(jobs.size());
  parallel_for(jobs.size(), spec.threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    const std::uint64_t seed = cell_seed(spec.master_seed, j.n_q, j.n_l, j.index);
    const auto t0 = Clock::now();
    try {
      PipelineConfig cfg;
      cfg.n_q = j.n_q;
      cfg.n_l = j.n_l;
      cfg.delta = spec.delta;
      cfg.seed = seed;
      cfg.optimizer = spec.optimizer;
      const PipelineResult pr = generate_peaked(cfg);
      SweepRow row;
      row.n_q = j.n_q;
      row.n_l = j.n_l;
      row.seed = seed;
      row.delta = pr.stats.mean;
      measure(row, pr.circuit, pr.hidden, spec, seed);
      row.wall_ms = spec.timing ? elapsed_ms(t0) : 0.0;
      rows[i] = std::move(row);
    } catch (const Error& e) {
      rows[i] = failed_row(j, seed, spec, e.what());
    }
  });
  SweepResult r;
  r.study = Study::kPeakedness;
  r.rows = std::move(rows);
  r.cells = summarize(r.rows);
  return r;
}

SweepResult sweep_delta_threshold(const SweepSpec& spec) {
  spec.validate();
  std::vector<int> qs = spec.n_q, ls = spec.n_l;
  std::sort(qs.begin(), qs.end());
  std::sort(ls.begin(), ls.end());
  std::vector<std::pair<int, int>> cells;
  for (int q : qs)
    for (int l : ls) cells.emplace_back(q, l);

  std::vector<std::vector<SweepRow>> cell_rows(cells.size());
  std::vector<CellSummary> summaries(cells.size());
  parallel_for(cells.size(), spec.threads, [&](std::size_t ci) {
    const auto [n_q, n_l] = cells[ci];
    const auto t0 = Clock::now();
    CellSummary& sum = summaries[ci];
    sum.n_q = n_q;
    sum.n_l = n_l;
    struct Instance {
      std::uint64_t seed;
      std::string hidden;
      std::optional<MirrorObfuscator> ob;
      std::string error;
    };
    std::vector<Instance> inst(spec.seeds);
    for (int i = 0; i < spec.seeds; ++i) {
      inst[i].seed = cell_seed(spec.master_seed, n_q, n_l, i);
      try {
        EmbeddedCircuit e = build_embedded(n_q, n_l, std::nullopt, inst[i].seed);
        inst[i].hidden = e.hidden;
        Rng ob = pipeline_rng(inst[i].seed, PipelineStream::kObfuscate);
        inst[i].ob.emplace(std::move(e.circuit), ob(), spec.optimizer, 1);
      } catch (const Error& e) {
        inst[i].error = e.what();
      }
    }
    // One evaluation: all seeds at delta; returns whether the median passes.
    auto evaluate = [&](double delta, std::vector<SweepRow>* out) {
      int pass = 0, total = 0;
      for (int i = 0; i < spec.seeds; ++i) {
        const Job j{n_q, n_l, i};
        if (!inst[i].error.empty()) {
          if (out != nullptr) out->push_back(failed_row(j, inst[i].seed, spec, inst[i].error));
          continue;
        }
        try {
          auto [obf, stats] = inst[i].ob->apply(delta);
          const Circuit c = finalize_circuit(obf, inst[i].hidden, delta, inst[i].seed, true);
          SweepRow row;
          row.n_q = n_q;
          row.n_l = n_l;
          row.seed = inst[i].seed;
          row.delta = stats.mean;
          measure(row, c, inst[i].hidden, spec, inst[i].seed);
          ++total;
          if (row.is_peaked) ++pass;
          if (out != nullptr) out->push_back(std::move(row));
        } catch (const Error& e) {
          // A failed instance counts as not peaked.
          ++total;
          if (out != nullptr) out->push_back(failed_row(j, inst[i].seed, spec, e.what()));
        }
      }
      return total > 0 && 2 * pass >= total;
    };
    double lo = spec.delta_lo, hi = spec.delta_hi;
    if (!evaluate(lo, nullptr) || evaluate(hi, nullptr)) {
      sum.resolved = false;
      evaluate(lo, &cell_rows[ci]);
    } else {
      while (hi / lo > 1.0 + spec.delta_rel_width) {
        const double mid = std::sqrt(lo * hi);
        if (evaluate(mid, nullptr)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      sum.delta_th = lo;
      evaluate(lo, &cell_rows[ci]);
    }
    const double ms = spec.timing ? elapsed_ms(t0) : 0.0;
    std::vector<double> p, ratio;
    for (auto& row : cell_rows[ci]) {
      row.wall_ms = ms / static_cast<double>(spec.seeds);
      if (!row.error.empty()) {
        ++sum.failures;
        continue;
      }
      p.push_back(row.p_peak);
      ratio.push_back(row.ratio);
    }
    sum.median_p_peak = median(p);
    sum.median_ratio = median(ratio);
  });
  SweepResult r;
  r.study = Study::kDeltaThreshold;
  for (auto& rows : cell_rows) {
    for (auto& row : rows) r.rows.push_back(std::move(row));
  }
  r.cells = std::move(summaries);
  return r;
}

SweepResult sweep_chi_threshold(const SweepSpec& spec) {
  spec.validate();
  const std::vector<Job> jobs = all_jobs(spec);
  std::vector<SweepRow> rows(jobs.size());
  std::vector<double> chi_values(jobs.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(jobs.size(), spec.threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    const std::uint64_t seed = cell_seed(spec.master_seed, j.n_q, j.n_l, j.index);
    const auto t0 = Clock::now();
    try {
      PipelineConfig cfg;
      cfg.n_q = j.n_q;
      cfg.n_l = j.n_l;
      cfg.delta = spec.delta;
      cfg.seed = seed;
      cfg.optimizer = spec.optimizer;
      const PipelineResult pr = generate_peaked(cfg);
      ChiSearchConfig cc;
      cc.threshold = spec.threshold;
      cc.shots = spec.shots;
      cc.seed = make_stream(seed, 0xc41)();
      cc.max_chi = spec.max_chi;
      const ChiSearchResult res = find_chi_threshold(pr.circuit, pr.hidden, cc);
      SweepRow row;
      row.n_q = j.n_q;
      row.n_l = j.n_l;
      row.seed = seed;
      row.delta = pr.stats.mean;
      row.backend = "mps";
      const auto& rep = res.report;
      row.p_peak = rep.peak_string == pr.hidden ? rep.p_peak : 0.0;
      row.p_second = rep.peak_string == pr.hidden ? rep.p_second : rep.p_peak;
      row.ratio = row.p_second > 0.0 ? row.p_peak / row.p_second
                                     : std::numeric_limits<double>::infinity();
      row.is_peaked = res.chi_th.has_value();
      row.chi = res.chi_th;
      const int ceiling = spec.max_chi > 0 ? spec.max_chi : (1 << (j.n_q / 2));
      chi_values[i] = res.chi_th ? *res.chi_th : 2.0 * ceiling;
      row.wall_ms = spec.timing ? elapsed_ms(t0) : 0.0;
      rows[i] = std::move(row);
    } catch (const Error& e) {
      rows[i] = failed_row(jobs[i], seed, spec, e.what());
      rows[i].backend = "mps";
    }
  });
  SweepResult r;
  r.study = Study::kChiThreshold;
  r.rows = std::move(rows);
  r.cells = summarize(r.rows);
  for (auto& cell : r.cells) {
    std::vector<double> v;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].n_q == cell.n_q && jobs[i].n_l == cell.n_l && !std::isnan(chi_values[i])) {
        v.push_back(chi_values[i]);
      }
    }
    if (!v.empty()) cell.median_chi_th = median(v);
    cell.resolved = !v.empty();
  }
  return r;
}

SweepResult run_sweep(const SweepSpec& spec) {
  switch (spec.study) {
    case Study::kPeakedness:
      return sweep_peakedness(spec);
    case Study::kDeltaThreshold:
      return sweep_delta_threshold(spec);
    case Study::kChiThreshold:
      return sweep_chi_threshold(spec);
  }
  throw InvalidArgument("unknown study");
}

std::string to_csv(const SweepResult& r) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& row : r.rows) {
    os << row.n_q << "," << row.n_l << "," << row.seed << "," << format_number(row.delta) << ","
       << format_number(row.p_peak) << "," << format_number(row.p_second) << ","
       << format_number(row.ratio) << "," << (row.is_peaked ? "true" : "false") << ","
       << row.backend << "," << (row.chi ? std::to_string(*row.chi) : "") << ","
       << format_number(std::round(row.wall_ms * 1000.0) / 1000.0) << "\n";
  }
  return os.str();
}

namespace {

nlohmann::ordered_json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::string sweep_meta_json(const SweepSpec& spec, const SweepResult& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["study"] = study_name(spec.study);
  json s;
  s["n_q"] = spec.n_q;
  s["n_l"] = spec.n_l;
  s["delta"] = spec.delta;
  s["delta_lo"] = spec.delta_lo;
  s["delta_hi"] = spec.delta_hi;
  s["delta_rel_width"] = spec.delta_rel_width;
  s["seeds"] = spec.seeds;
  s["shots"] = spec.shots;
  s["probabilities"] = spec.shots == 0 ? "exact" : "sampled";
  s["threshold"] = spec.threshold;
  s["backend"] = backend_name(spec.backend);
  s["chi"] = spec.chi;
  s["max_chi"] = spec.max_chi;
  s["master_seed"] = spec.master_seed;
  s["aggregation"] = "median over seeds";
  json o;
  o["method"] = optimizer_method_name(spec.optimizer.method);
  o["max_evaluations"] = spec.optimizer.max_evaluations;
  o["initial_step"] = spec.optimizer.initial_step;
  o["convergence_tol"] = spec.optimizer.convergence_tol;
  o["restarts"] = spec.optimizer.restarts;
  s["optimizer"] = std::move(o);
  j["spec"] = std::move(s);
  json cells = json::array();
  for (const auto& c : r.cells) {
    json jc;
    jc["n_q"] = c.n_q;
    jc["n_l"] = c.n_l;
    jc["median_p_peak"] = number_or_string(c.median_p_peak);
    jc["median_ratio"] = number_or_string(c.median_ratio);
    jc["delta_th"] = c.delta_th ? json(*c.delta_th) : json();
    jc["median_chi_th"] = c.median_chi_th ? json(*c.median_chi_th) : json();
    jc["resolved"] = c.resolved;
    jc["failures"] = c.failures;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  json failures = json::array();
  for (const auto& row : r.rows) {
    if (row.error.empty()) continue;
    failures.push_back({{"n_q", row.n_q}, {"n_l", row.n_l}, {"seed", row.seed}, {"error", row.error}});
  }
  j["failures"] = std::move(failures);
  return j.dump(2) + "\n";
}

std::string render_svg(const SweepResult& r) {
  const char* label = r.study == Study::kPeakedness       ? "median P_peak"
                      : r.study == Study::kDeltaThreshold ? "delta_th"
                                                          : "median chi_th";
  auto value = [&](const CellSummary& c) -> double {
    if (r.study == Study::kPeakedness) return c.median_p_peak;
    if (r.study == Study::kDeltaThreshold) {
      return c.delta_th ? *c.delta_th : std::numeric_limits<double>::quiet_NaN();
    }
    return c.median_chi_th ? *c.median_chi_th : std::numeric_limits<double>::quiet_NaN();
  };
  std::map<int, std::vector<std::pair<double, double>>> series;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& c : r.cells) {
    const double y = value(c);
    if (!std::isfinite(y)) continue;
    const double x = std::log2(static_cast<double>(c.n_l));
    series[c.n_q].emplace_back(x, y);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double w = 640, h = 400, m = 60;
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + (ymin == 0 ? 1 : std::abs(ymin) * 0.1);
  auto px = [&](double x) { return m + (x - xmin) / (xmax - xmin) * (w - 2 * m); };
  auto py = [&](double y) { return h - m - (y - ymin) / (ymax - ymin) * (h - 2 * m); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">n_l (log2)</text>\n";
  os << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
     << ")\" text-anchor=\"middle\">" << label << "</text>\n";
  os << "<text x=\"" << m << "\" y=\"" << h - m + 15 << "\">" << format_number(std::exp2(xmin))
     << "</text>\n";
  os << "<text x=\"" << w - m << "\" y=\"" << h - m + 15 << "\" text-anchor=\"end\">"
     << format_number(std::exp2(xmax)) << "</text>\n";
  os << "<text x=\"" << m - 5 << "\" y=\"" << m << "\" text-anchor=\"end\">" << format_number(ymax)
     << "</text>\n";
  os << "<text x=\"" << m - 5 << "\" y=\"" << h - m << "\" text-anchor=\"end\">"
     << format_number(ymin) << "</text>\n";
  int k = 0;
  for (const auto& [nq, pts] : series) {
    const char* col = colors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) os << px(x) << "," << py(y) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << w - m + 5 << "\" y=\"" << m + 15 * k << "\" fill=\"" << col
       << "\">n_q=" << nq << "</text>\n";
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace peaked
