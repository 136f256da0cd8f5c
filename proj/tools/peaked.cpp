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

// Command-line front end: generate, inspect, simulate, attack, shrink,
// double-peak, sweep, verify.
//
// Exit codes: 0 success, 1 verify mismatch or failed synthesis/reduction,
// 2 validation error (bad flags, malformed input), 3 resource limit.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "peaked/circuit.hpp"
#include "peaked/errors.hpp"
#include "peaked/harness.hpp"
#include "peaked/mps.hpp"
#include "peaked/obfuscator.hpp"
#include "peaked/pipeline.hpp"
#include "peaked/serialize.hpp"
#include "peaked/statevector.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace peaked;

constexpr double kHighTruncation = 1e-3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

Circuit load_circuit(const std::string& path) {
  const std::string text = read_file(path);
  return deserialize(text, sniff_format(text));
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json report_json(const PeakednessReport& r) {
  json j;
  j["backend"] = r.backend;
  j["peak_string"] = r.peak_string;
  j["second_string"] = r.second_string;
  j["p_peak"] = number(r.p_peak);
  j["p_second"] = number(r.p_second);
  j["ratio"] = number(r.ratio);
  j["is_peaked"] = r.is_peaked;
  j["shots"] = r.shots == 0 ? json("exact") : json(r.shots);
  return j;
}

std::array<int, 2> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("pair must look like 'a,b'");
  try {
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw InvalidArgument("pair must look like 'a,b'");
  }
}

OptimizerConfig optimizer_from(const std::string& config_path) {
  if (config_path.empty()) return OptimizerConfig{};
  return parse_sweep_config(read_file(config_path)).optimizer;
}

std::vector<std::pair<std::string, double>> top_entries(const std::vector<double>& p, int n_q,
                                                        int k) {
  std::vector<std::size_t> idx(p.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kk), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      return p[a] != p[b] ? p[a] > p[b] : index_to_bits(a, n_q) < index_to_bits(b, n_q);
                    });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < kk; ++i) out.emplace_back(index_to_bits(idx[i], n_q), p[idx[i]]);
  return out;
}

// --- generate -------------------------------------------------------------

struct GenerateOpts {
  int n_q = 6;
  int n_l = 4;
  double delta = 0.0;
  std::string hidden = "auto";
  std::uint64_t seed = 1;
  std::string out = "circuit.json";
  std::string qasm;
  std::string challenge;
  std::string config;
  std::string entangler;
  bool no_merge = false;
};

int cmd_generate(const GenerateOpts& o) {
  PipelineConfig cfg;
  cfg.n_q = o.n_q;
  cfg.n_l = o.n_l;
  cfg.delta = o.delta;
  cfg.seed = o.seed;
  cfg.merge = !o.no_merge;
  cfg.optimizer = optimizer_from(o.config);
  if (o.hidden != "auto") cfg.hidden = o.hidden;
  if (!o.entangler.empty()) cfg.entangler = parse_pair(o.entangler);
  const PipelineResult r = generate_peaked(cfg);
  write_file(o.out, to_json(r.circuit, true));
  if (!o.qasm.empty()) write_file(o.qasm, to_qasm(r.circuit));
  if (!o.challenge.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(o.challenge);
    write_file((fs::path(o.challenge) / "circuit.qasm").string(), to_qasm(r.circuit));
    write_file((fs::path(o.challenge) / "circuit.json").string(), to_json(r.circuit, false));
    write_file((fs::path(o.challenge) / "answer.txt").string(), r.hidden + "\n");
  }
  json j;
  j["out"] = o.out;
  j["hidden_string"] = r.hidden;
  j["delta_target"] = o.delta;
  j["delta_mean"] = r.stats.mean;
  j["delta_max"] = r.stats.max;
  j["layers"] = r.circuit.layers.size();
  j["blocks"] = r.circuit.block_count();
  std::cout << j.dump(2) << "\n";
  return 0;
}

// --- inspect --------------------------------------------------------------

int cmd_inspect(const std::string& path, double tol) {
  const Circuit c = load_circuit(path);
  json j;
  j["n_q"] = c.n_q;
  j["half_depth"] = c.half_depth;
  j["flat"] = c.is_flat();
  if (c.is_flat()) {
    j["gates"] = c.gates.size();
  } else {
    j["layers"] = c.layers.size();
    j["blocks"] = c.block_count();
    std::map<std::string, int> layouts;
    for (const auto& l : c.layers)
      for (const auto& b : l) ++layouts[layout_tag(b.layout)];
    j["layouts"] = layouts;
    const std::string brick = check_brick_structure(c);
    j["brick_wall"] = brick.empty() ? json("ok") : json(brick);
    if (static_cast<int>(c.layers.size()) == 2 * c.half_depth && c.half_depth > 0) {
      const auto scan = mirror_symmetry_scan(c);
      std::vector<double> devs;
      int symmetric = 0;
      for (const auto& p : scan) {
        devs.push_back(p.deviation);
        if (p.deviation < tol) ++symmetric;
      }
      json s;
      s["pairs"] = scan.size();
      s["tolerance"] = tol;
      s["symmetric_pairs"] = symmetric;
      s["min_deviation"] = number(*std::min_element(devs.begin(), devs.end()));
      s["median_deviation"] = number(median(devs));
      j["mirror_symmetry"] = std::move(s);
    }
  }
  j["has_metadata"] = c.metadata.has_value();
  std::cout << j.dump(2) << "\n";
  return 0;
}

// --- simulate -------------------------------------------------------------

struct SimulateOpts {
  std::string path;
  std::string backend = "direct";
  int chi = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 1;
  double threshold = 10.0;
  int top = 5;
};

int cmd_simulate(const SimulateOpts& o) {
  const Circuit c = load_circuit(o.path);
  json j;
  Rng rng = make_stream(o.seed, 0x51);
  if (backend_from_name(o.backend) == Backend::kDirect) {
    const StateVector s = run_statevector(c);
    const std::vector<double> p = probabilities(s);
    PeakednessReport r = o.shots == 0 ? peak_report(p, c.n_q, o.threshold)
                                      : peak_report(sample(s, o.shots, rng), o.threshold);
    j = report_json(r);
    json top = json::array();
    for (const auto& [k, v] : top_entries(p, c.n_q, o.top)) top.push_back({{"string", k}, {"p", v}});
    j["top_exact"] = std::move(top);
  } else {
    if (o.shots == 0) throw InvalidArgument("the mps backend needs --shots > 0");
    const int full = 1 << std::min(c.n_q / 2, 30);
    const int chi = o.chi > 0 ? o.chi : full;
    const MPSState m = mps_run(c, chi);
    PeakednessReport r = peak_report(mps_sample(m, o.shots, rng), o.threshold);
    r.backend = "mps";
    j = report_json(r);
    j["chi"] = chi;
    j["max_bond"] = m.max_bond();
    j["truncation"] = m.cumulative_truncation;
    j["high_truncation"] = m.cumulative_truncation > kHighTruncation;
    if (m.cumulative_truncation > kHighTruncation) {
      std::cerr << "warning: high truncation (" << m.cumulative_truncation << ") at chi " << chi
                << "; results are unreliable\n";
    }
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

// --- attack ---------------------------------------------------------------

struct AttackOpts {
  std::string path;
  int chi = 0;  // 0: search
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  double threshold = 10.0;
};

int cmd_attack(const AttackOpts& o) {
  const Circuit c = load_circuit(o.path);
  ChiSearchConfig cfg;
  cfg.shots = o.shots;
  cfg.seed = o.seed;
  cfg.threshold = o.threshold;
  json j;
  if (o.chi > 0) {
    const ChiAttempt a = attempt_chi(c, o.chi, std::nullopt, cfg);
    j["found"] = a.success;
    j["found_string"] = a.report.peak_string;
    j["chi_used"] = o.chi;
    j["ratio"] = number(a.report.ratio);
    j["shots"] = o.shots;
    j["truncation"] = a.truncation;
  } else {
    const ChiSearchResult r = find_chi_threshold(c, std::nullopt, cfg);
    j["found"] = r.chi_th.has_value();
    j["found_string"] = r.found_string;
    j["chi_used"] = r.chi_th ? json(*r.chi_th) : json("above-max");
    j["ratio"] = number(r.report.ratio);
    j["shots"] = o.shots;
    j["truncation"] = r.truncation;
    j["spot_check_ok"] = r.spot_check_ok;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

// --- shrink ---------------------------------------------------------------

struct ShrinkOpts {
  std::string path;
  std::string out = "shrunk.json";
  std::string hidden;
  int passes = 1;
  int depth = 3;
  double tolerance = 0.5;
  std::uint64_t seed = 1;
};

int cmd_shrink(const ShrinkOpts& o) {
  Circuit c = load_circuit(o.path);
  std::string hidden = o.hidden;
  if (hidden.empty() && c.metadata && c.metadata->hidden_string) hidden = *c.metadata->hidden_string;
  if (hidden.empty()) throw InvalidArgument("shrink needs --hidden or a circuit with metadata");
  if (static_cast<int>(hidden.size()) != c.n_q) throw InvalidArgument("hidden string length");
  ReductionConfig rc;
  rc.depth = o.depth;
  rc.tolerance = o.tolerance;
  Rng rng = make_stream(o.seed, static_cast<std::uint64_t>(PipelineStream::kShrink));
  json passes = json::array();
  const std::size_t before = c.layers.size();
  for (int p = 0; p < o.passes; ++p) {
    const ReductionResult r = reduce_tail_group(c, {bits_to_index(hidden)}, rng, rc);
    c = r.circuit;
    passes.push_back({{"rms_row_error", r.rms_error}, {"evaluations", r.evaluations}});
  }
  write_file(o.out, to_json(c, true));
  json j;
  j["out"] = o.out;
  j["layers_before"] = before;
  j["layers_after"] = c.layers.size();
  j["passes"] = std::move(passes);
  if (c.n_q <= kDenseQubitCap) {
    const std::vector<double> p = probabilities(run_statevector(c));
    j["p_hidden"] = p[bits_to_index(hidden)];
    j["report"] = report_json(peak_report(p, c.n_q));
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

// --- verify ---------------------------------------------------------------

int cmd_verify(const std::string& path, const std::string& claim, double threshold) {
  const Circuit c = load_circuit(path);
  if (static_cast<int>(claim.size()) != c.n_q) throw InvalidArgument("claim length != n_q");
  (void)bits_to_index(claim);
  const std::vector<double> p = probabilities(run_statevector(c));
  const PeakednessReport r = peak_report(p, c.n_q, threshold);
  const bool match = r.peak_string == claim;
  json j = report_json(r);
  j["claim"] = claim;
  j["p_claim"] = p[bits_to_index(claim)];
  j["match"] = match;
  if (c.metadata && c.metadata->hidden_string) {
    j["metadata_agrees"] = *c.metadata->hidden_string == r.peak_string;
  }
  std::cout << j.dump(2) << "\n";
  return match ? 0 : 1;
}

// --- sweep ----------------------------------------------------------------

int cmd_sweep(const std::string& config, const std::string& out, const std::string& meta,
              const std::string& svg, int threads) {
  SweepSpec spec = parse_sweep_config(read_file(config));
  if (threads >= 0) spec.threads = threads;
  const SweepResult r = run_sweep(spec);
  write_file(out, to_csv(r));
  write_file(meta.empty() ? out + ".meta.json" : meta, sweep_meta_json(spec, r));
  if (!svg.empty()) write_file(svg, render_svg(r));
  json j;
  j["rows"] = r.rows.size();
  j["cells"] = r.cells.size();
  std::size_t failures = 0;
  for (const auto& row : r.rows) failures += row.error.empty() ? 0 : 1;
  j["failures"] = failures;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peaked random circuit generator, simulators and attack harness"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "Build a peaked circuit (JSON, optional QASM/challenge)");
  g->add_option("--nq", gen.n_q, "Qubits (even, >= 4)")->required();
  g->add_option("--nl", gen.n_l, "Layers in the random half")->required();
  g->add_option("--delta", gen.delta, "Target mean block deviation");
  g->add_option("--hidden", gen.hidden, "Hidden bitstring or 'auto'");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--out", gen.out, "Circuit JSON with metadata");
  g->add_option("--qasm", gen.qasm, "Also write OpenQASM 2.0");
  g->add_option("--challenge", gen.challenge, "Directory for the metadata-free challenge bundle");
  g->add_option("--entangler", gen.entangler, "First-layer pair 'a,b' for the double-peak variant");
  g->add_option("--config", gen.config, "Key-value file with optimizer.* settings");
  g->add_flag("--no-merge", gen.no_merge, "Keep the identity U3s at block boundaries");

  std::string inspect_path;
  double inspect_tol = 1e-9;
  auto* ins = app.add_subcommand("inspect", "Structure and mirror-symmetry report");
  ins->add_option("circuit", inspect_path)->required();
  ins->add_option("--tol", inspect_tol, "Deviation below which a pair counts as symmetric");

  SimulateOpts sim;
  auto* s = app.add_subcommand("simulate", "Exact probabilities or sampling");
  s->add_option("circuit", sim.path)->required();
  s->add_option("--backend", sim.backend, "direct | mps");
  s->add_option("--chi", sim.chi, "MPS bond cap (default 2^(n_q/2))");
  s->add_option("--shots", sim.shots, "Samples (0: exact, direct backend only)");
  s->add_option("--seed", sim.seed);
  s->add_option("--threshold", sim.threshold);
  s->add_option("--top", sim.top, "Number of most likely strings to list");

  AttackOpts att;
  auto* a = app.add_subcommand("attack", "MPS recovery of the peak from a metadata-free circuit");
  a->add_option("circuit", att.path)->required();
  a->add_option("--chi", att.chi, "Fixed bond cap (default: search for the threshold)");
  a->add_option("--shots", att.shots);
  a->add_option("--seed", att.seed);
  a->add_option("--threshold", att.threshold);

  ShrinkOpts shr;
  auto* sh = app.add_subcommand("shrink", "Tail-reduction passes on the mirror half");
  sh->add_option("circuit", shr.path)->required();
  sh->add_option("--out", shr.out);
  sh->add_option("--hidden", shr.hidden, "Peak string (default: from metadata)");
  sh->add_option("--passes", shr.passes);
  sh->add_option("--depth", shr.depth, "Trailing layers per group");
  sh->add_option("--tolerance", shr.tolerance, "Max RMS row error");
  sh->add_option("--seed", shr.seed);

  GenerateOpts dp;
  dp.out = "double_peak.json";
  dp.entangler = "0,1";
  auto* d = app.add_subcommand("double-peak", "Generate with the Bell entangler on a first-layer pair");
  d->add_option("--nq", dp.n_q)->required();
  d->add_option("--nl", dp.n_l)->required();
  d->add_option("--delta", dp.delta);
  d->add_option("--hidden", dp.hidden);
  d->add_option("--seed", dp.seed);
  d->add_option("--pair", dp.entangler, "First-layer pair 'a,b'");
  d->add_option("--out", dp.out);
  d->add_option("--qasm", dp.qasm);
  d->add_option("--config", dp.config);

  std::string sweep_config, sweep_out = "sweep.csv", sweep_meta, sweep_svg;
  int sweep_threads = -1;
  auto* sw = app.add_subcommand("sweep", "Run a study from a key-value config file");
  sw->add_option("--config", sweep_config)->required();
  sw->add_option("--out", sweep_out, "CSV output");
  sw->add_option("--meta", sweep_meta, "Sidecar JSON (default: <out>.meta.json)");
  sw->add_option("--svg", sweep_svg, "Optional SVG chart");
  sw->add_option("--threads", sweep_threads, "Worker threads (overrides the config)");

  std::string verify_path, verify_claim;
  double verify_threshold = 10.0;
  auto* v = app.add_subcommand("verify", "Check a claimed string against the exact peak");
  v->add_option("circuit", verify_path)->required();
  v->add_option("--claim", verify_claim)->required();
  v->add_option("--threshold", verify_threshold);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*ins) return cmd_inspect(inspect_path, inspect_tol);
    if (*s) return cmd_simulate(sim);
    if (*a) return cmd_attack(att);
    if (*sh) return cmd_shrink(shr);
    if (*d) return cmd_generate(dp);
    if (*sw) return cmd_sweep(sweep_config, sweep_out, sweep_meta, sweep_svg, sweep_threads);
    if (*v) return cmd_verify(verify_path, verify_claim, verify_threshold);
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const SynthesisFailure& e) {
    std::cerr << "synthesis failure: " << e.what() << "\n";
    return 1;
  } catch (const ReductionFailure& e) {
    std::cerr << "reduction failure: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
