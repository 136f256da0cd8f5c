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

#include "peaked/serialize.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "peaked/errors.hpp"

namespace peaked {

using json = nlohmann::ordered_json;

namespace {

std::pair<int, int> line_col(std::string_view text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json block_to_json(const Block& b) {
  json j;
  j["pair"] = {b.pair[0], b.pair[1]};
  j["layout"] = layout_tag(b.layout);
  json angles = json::array();
  for (const auto& u : b.angles) {
    angles.push_back(u.theta);
    angles.push_back(u.phi);
    angles.push_back(u.lambda);
  }
  j["angles"] = std::move(angles);
  j["phase"] = b.phase;
  return j;
}

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::kU3:
      return "u3";
    case GateKind::kCZ:
      return "cz";
    case GateKind::kX:
      return "x";
  }
  return "?";
}

}  // namespace

void validate_circuit(const Circuit& c) {
  if (c.n_q < 1) throw InvalidArgument("n_q must be positive");
  if (c.half_depth < 0) throw InvalidArgument("half_depth must be non-negative");
  for (std::size_t l = 0; l < c.layers.size(); ++l) {
    std::set<int> used;
    for (const Block& b : c.layers[l]) {
      validate_block(b);
      for (int q : b.pair) {
        if (q < 0 || q >= c.n_q) {
          throw InvalidArgument("layer " + std::to_string(l) + ": qubit " + std::to_string(q) +
                                " out of range");
        }
        if (!used.insert(q).second) {
          throw InvalidArgument("layer " + std::to_string(l) + ": qubit " + std::to_string(q) +
                                " used by two blocks");
        }
      }
    }
  }
  for (const Gate& g : c.gates) {
    const int arity = g.kind == GateKind::kCZ ? 2 : 1;
    for (int k = 0; k < arity; ++k) {
      if (g.qubits[k] < 0 || g.qubits[k] >= c.n_q) throw InvalidArgument("gate qubit out of range");
    }
    if (arity == 2 && g.qubits[0] == g.qubits[1]) throw InvalidArgument("cz on a single qubit");
  }
  if (c.metadata && c.metadata->hidden_string) {
    const auto& h = *c.metadata->hidden_string;
    if (static_cast<int>(h.size()) != c.n_q) throw InvalidArgument("hidden string length != n_q");
    (void)bits_to_index(h);
  }
}

std::string to_json(const Circuit& c, bool include_metadata) {
  json j;
  j["version"] = 1;
  j["n_q"] = c.n_q;
  j["half_depth"] = c.half_depth;
  json layers = json::array();
  for (const Layer& layer : c.layers) {
    json jl = json::array();
    for (const Block& b : layer) jl.push_back(block_to_json(b));
    layers.push_back(std::move(jl));
  }
  j["layers"] = std::move(layers);
  if (c.is_flat()) {
    json gates = json::array();
    for (const Gate& g : c.gates) {
      json jg;
      jg["name"] = gate_name(g.kind);
      if (g.kind == GateKind::kCZ) {
        jg["qubits"] = {g.qubits[0], g.qubits[1]};
      } else {
        jg["qubits"] = {g.qubits[0]};
      }
      if (g.kind == GateKind::kU3) jg["params"] = {g.params.theta, g.params.phi, g.params.lambda};
      gates.push_back(std::move(jg));
    }
    j["gates"] = std::move(gates);
  }
  if (include_metadata && c.metadata) {
    json m;
    m["hidden_string"] = c.metadata->hidden_string ? json(*c.metadata->hidden_string) : json();
    m["delta_target"] = c.metadata->delta_target ? json(*c.metadata->delta_target) : json();
    m["seed"] = c.metadata->seed;
    j["metadata"] = std::move(m);
  } else {
    j["metadata"] = nullptr;
  }
  return j.dump(1) + "\n";
}

Circuit from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string("invalid JSON: ") + e.what(), line, col);
  }
  Circuit c;
  try {
    if (j.at("version").get<int>() != 1) throw InvalidArgument("unsupported circuit version");
    c.n_q = j.at("n_q").get<int>();
    c.half_depth = j.at("half_depth").get<int>();
    for (const auto& jl : j.at("layers")) {
      Layer layer;
      for (const auto& jb : jl) {
        Block b;
        const auto& pair = jb.at("pair");
        if (pair.size() != 2) throw InvalidArgument("pair must have two entries");
        b.pair = {pair[0].get<int>(), pair[1].get<int>()};
        b.layout = layout_from_tag(jb.at("layout").get<std::string>());
        const auto& angles = jb.at("angles");
        if (angles.size() % 3 != 0) throw MalformedBlock("angle list is not a multiple of 3");
        for (std::size_t k = 0; k < angles.size(); k += 3) {
          b.angles.push_back(
              {angles[k].get<double>(), angles[k + 1].get<double>(), angles[k + 2].get<double>()});
        }
        b.phase = jb.value("phase", 0.0);
        layer.push_back(std::move(b));
      }
      c.layers.push_back(std::move(layer));
    }
    if (j.contains("gates")) {
      for (const auto& jg : j.at("gates")) {
        Gate g;
        const auto name = jg.at("name").get<std::string>();
        const auto& qs = jg.at("qubits");
        if (name == "u3") {
          g.kind = GateKind::kU3;
          const auto& p = jg.at("params");
          g.params = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
        } else if (name == "cz") {
          g.kind = GateKind::kCZ;
        } else if (name == "x") {
          g.kind = GateKind::kX;
        } else {
          throw UnsupportedGate("unsupported gate '" + name + "'");
        }
        g.qubits[0] = qs.at(0).get<int>();
        if (g.kind == GateKind::kCZ) g.qubits[1] = qs.at(1).get<int>();
        c.gates.push_back(g);
      }
    }
    const auto& jm = j.at("metadata");
    if (!jm.is_null()) {
      Metadata m;
      if (jm.contains("hidden_string") && !jm["hidden_string"].is_null()) {
        m.hidden_string = jm["hidden_string"].get<std::string>();
      }
      if (jm.contains("delta_target") && !jm["delta_target"].is_null()) {
        m.delta_target = jm["delta_target"].get<double>();
      }
      m.seed = jm.value("seed", std::uint64_t{0});
      c.metadata = m;
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed circuit JSON: ") + e.what(), 1, 1);
  }
  validate_circuit(c);
  return c;
}

namespace {

std::string fmt_angle(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_u3(std::ostringstream& os, const U3Params& p, int q) {
  const U3Params n = normalized(p);
  os << "u3(" << fmt_angle(n.theta) << "," << fmt_angle(n.phi) << "," << fmt_angle(n.lambda)
     << ") q[" << q << "];\n";
}

}  // namespace

std::string to_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.n_q << "];\n";
  if (c.is_flat()) {
    for (const Gate& g : c.gates) {
      switch (g.kind) {
        case GateKind::kU3:
          emit_u3(os, g.params, g.qubits[0]);
          break;
        case GateKind::kCZ:
          os << "cz q[" << g.qubits[0] << "],q[" << g.qubits[1] << "];\n";
          break;
        case GateKind::kX:
          os << "x q[" << g.qubits[0] << "];\n";
          break;
      }
    }
    return os.str();
  }
  for (const Layer& layer : c.layers) {
    for (const Block& b : layer) {
      validate_block(b);
      for (std::size_t k = 0; k < b.angles.size(); k += 2) {
        if (k > 0) os << "cz q[" << b.pair[0] << "],q[" << b.pair[1] << "];\n";
        emit_u3(os, b.angles[k], b.pair[0]);
        emit_u3(os, b.angles[k + 1], b.pair[1]);
      }
    }
  }
  return os.str();
}

namespace {

// Recursive-descent reader for the QASM subset. Positions are tracked so
// every error carries line and column.
class QasmReader {
 public:
  explicit QasmReader(std::string_view text) : text_(text) {}

  Circuit read() {
    Circuit c;
    bool have_header = false;
    int qreg_size = -1;
    std::string qreg_name;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const std::size_t start = pos_;
      const std::string word = identifier();
      if (word.empty()) fail("expected a statement", start);
      if (word == "OPENQASM") {
        skip_space();
        const std::string version = number_token();
        if (version != "2.0") fail("only OPENQASM 2.0 is supported", start);
        expect(';');
        have_header = true;
      } else if (word == "include") {
        skip_space();
        string_literal();
        expect(';');
      } else if (word == "qreg" || word == "creg") {
        skip_space();
        const std::string name = identifier();
        expect('[');
        const int size = integer();
        expect(']');
        expect(';');
        if (word == "qreg") {
          if (qreg_size >= 0) fail("only one qreg is supported", start);
          qreg_size = size;
          qreg_name = name;
        }
      } else if (word == "u3" || word == "U") {
        expect('(');
        U3Params p;
        p.theta = expression();
        expect(',');
        p.phi = expression();
        expect(',');
        p.lambda = expression();
        expect(')');
        Gate g;
        g.kind = GateKind::kU3;
        g.params = p;
        g.qubits[0] = qubit(qreg_name, qreg_size);
        expect(';');
        gates_.push_back(g);
      } else if (word == "cz") {
        Gate g;
        g.kind = GateKind::kCZ;
        g.qubits[0] = qubit(qreg_name, qreg_size);
        expect(',');
        g.qubits[1] = qubit(qreg_name, qreg_size);
        expect(';');
        if (g.qubits[0] == g.qubits[1]) fail("cz needs two distinct qubits", start);
        gates_.push_back(g);
      } else if (word == "x") {
        Gate g;
        g.kind = GateKind::kX;
        g.qubits[0] = qubit(qreg_name, qreg_size);
        expect(';');
        gates_.push_back(g);
      } else {
        const auto [line, col] = line_col(text_, start);
        throw UnsupportedGate("unsupported gate or statement '" + word + "' at line " +
                              std::to_string(line) + ", column " + std::to_string(col));
      }
    }
    if (!have_header) fail("missing OPENQASM header", 0);
    if (qreg_size < 0) fail("missing qreg declaration", pos_);
    c.n_q = qreg_size;
    assemble(c);
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    const auto [line, col] = line_col(text_, at);
    throw ParseError(what, line, col);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_.compare(pos_, 2, "//") == 0) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char ch) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ch) {
      fail(std::string("expected '") + ch + "'", pos_);
    }
    ++pos_;
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string number_token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a number", start);
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    const std::size_t start = pos_;
    const std::string tok = number_token();
    for (char ch : tok) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) fail("expected an integer", start);
    }
    return std::stoi(tok);
  }

  void string_literal() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected a string", pos_);
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
    if (pos_ >= text_.size()) fail("unterminated string", pos_);
    ++pos_;
  }

  int qubit(const std::string& reg, int size) {
    skip_space();
    const std::size_t start = pos_;
    if (size < 0) fail("gate before qreg declaration", start);
    const std::string name = identifier();
    if (name != reg) fail("unknown register '" + name + "'", start);
    expect('[');
    const int q = integer();
    expect(']');
    if (q < 0 || q >= size) fail("qubit index out of range", start);
    return q;
  }

  // expression := term (('+'|'-') term)*
  double expression() {
    double v = term();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        const char op = text_[pos_++];
        const double r = term();
        v = op == '+' ? v + r : v - r;
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = factor();
    while (true) {
      skip_space();
      if (pos_ < text_.size() && (text_[pos_] == '*' || text_[pos_] == '/')) {
        const char op = text_[pos_++];
        const double r = factor();
        v = op == '*' ? v * r : v / r;
      } else {
        return v;
      }
    }
  }

  double factor() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input", pos_);
    const char ch = text_[pos_];
    if (ch == '-') {
      ++pos_;
      return -factor();
    }
    if (ch == '+') {
      ++pos_;
      return factor();
    }
    if (ch == '(') {
      ++pos_;
      const double v = expression();
      expect(')');
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      const std::string id = identifier();
      if (id == "pi") return std::numbers::pi;
      fail("unknown identifier '" + id + "' in expression", start);
    }
    const std::size_t start = pos_;
    const std::string tok = number_token();
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail("malformed number", start);
      return v;
    } catch (const std::logic_error&) {
      fail("malformed number", start);
    }
  }

  // Groups the gate stream into blocks: a U3 pair followed by any number of
  // (CZ on the same pair, U3 pair) repetitions. Falls back to a flat circuit.
  void assemble(Circuit& c) {
    std::vector<Block> blocks;
    std::size_t i = 0;
    bool ok = true;
    auto is_u3_on = [&](std::size_t k, int q) {
      return k < gates_.size() && gates_[k].kind == GateKind::kU3 && gates_[k].qubits[0] == q;
    };
    while (i < gates_.size() && ok) {
      if (i + 1 >= gates_.size() || gates_[i].kind != GateKind::kU3 ||
          gates_[i + 1].kind != GateKind::kU3 || gates_[i].qubits[0] == gates_[i + 1].qubits[0]) {
        ok = false;
        break;
      }
      Block b;
      b.pair = {gates_[i].qubits[0], gates_[i + 1].qubits[0]};
      b.angles = {gates_[i].params, gates_[i + 1].params};
      i += 2;
      while (i < gates_.size() && gates_[i].kind == GateKind::kCZ) {
        const auto& q = gates_[i].qubits;
        const bool same = (q[0] == b.pair[0] && q[1] == b.pair[1]) ||
                          (q[0] == b.pair[1] && q[1] == b.pair[0]);
        if (!same || !is_u3_on(i + 1, b.pair[0]) || !is_u3_on(i + 2, b.pair[1])) {
          ok = false;
          break;
        }
        b.angles.push_back(gates_[i + 1].params);
        b.angles.push_back(gates_[i + 2].params);
        i += 3;
      }
      const int n_cz = b.cz_count();
      b.layout = n_cz == 2 ? Layout::kStandard : n_cz == 3 ? Layout::kExtended : Layout::kReduced;
      blocks.push_back(std::move(b));
    }
    if (!ok || blocks.empty()) {
      c.gates = gates_;
      c.half_depth = 0;
      return;
    }
    std::set<int> used;
    for (Block& b : blocks) {
      if (c.layers.empty() || used.count(b.pair[0]) || used.count(b.pair[1])) {
        c.layers.emplace_back();
        used.clear();
      }
      used.insert(b.pair[0]);
      used.insert(b.pair[1]);
      c.layers.back().push_back(std::move(b));
    }
    const int total = static_cast<int>(c.layers.size());
    c.half_depth = total / 2;
    if (total % 2 != 0 || !check_brick_structure(c).empty()) {
      c.half_depth = total;
      if (!check_brick_structure(c).empty()) c.half_depth = (total + 1) / 2;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Gate> gates_;
};

}  // namespace

Circuit from_qasm(std::string_view text) {
  Circuit c = QasmReader(text).read();
  validate_circuit(c);
  return c;
}

std::string serialize(const Circuit& c, Format f, bool include_metadata) {
  return f == Format::kJson ? to_json(c, include_metadata) : to_qasm(c);
}

Circuit deserialize(std::string_view text, Format f) {
  return f == Format::kJson ? from_json(text) : from_qasm(text);
}

Format sniff_format(std::string_view text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' ? Format::kJson : Format::kQasm;
  }
  return Format::kQasm;
}

}  // namespace peaked
