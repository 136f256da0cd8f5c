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

#include <numbers>

#include <gtest/gtest.h>

#include "peaked/errors.hpp"
#include "peaked/pipeline.hpp"
#include "peaked/serialize.hpp"

namespace peaked {
namespace {

Circuit sample_circuit() {
  PipelineConfig cfg;
  cfg.n_q = 6;
  cfg.n_l = 2;
  cfg.hidden = "110010";
  cfg.seed = 3;
  return generate_peaked(cfg).circuit;
}

TEST(Serialize, JsonRoundTripIsExact) {
  const Circuit c = sample_circuit();
  const std::string text = to_json(c);
  const Circuit back = from_json(text);
  EXPECT_EQ(to_json(back), text);
  ASSERT_TRUE(back.metadata.has_value());
  EXPECT_EQ(back.metadata->hidden_string.value(), "110010");
  EXPECT_LT((circuit_unitary(back) - circuit_unitary(c)).norm(), 1e-15);
}

TEST(Serialize, ChallengeFormHasNoMetadata) {
  const Circuit c = sample_circuit();
  const std::string text = to_json(c, false);
  EXPECT_EQ(text.find("110010"), std::string::npos);
  EXPECT_FALSE(from_json(text).metadata.has_value());
}

TEST(Serialize, QasmRoundTripUpToPhase) {
  const Circuit c = sample_circuit();
  const std::string q = to_qasm(c);
  EXPECT_EQ(q.rfind("OPENQASM 2.0;", 0), 0u);
  EXPECT_EQ(q.find("110010"), std::string::npos);
  const Circuit back = from_qasm(q);
  EXPECT_FALSE(back.is_flat());
  EXPECT_EQ(back.layers.size(), c.layers.size());
  EXPECT_EQ(back.half_depth, c.half_depth);
  EXPECT_LT(distance_up_to_phase(circuit_unitary(back), circuit_unitary(c)), 1e-12);
}

TEST(Serialize, QasmExpressionsAndCreg) {
  const std::string text =
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\n"
      "u3(pi/2, -pi, 2*(pi-1)/3) q[0];\nx q[1];\ncz q[0],q[1];\n";
  const Circuit c = from_qasm(text);
  EXPECT_EQ(c.n_q, 2);
  EXPECT_TRUE(c.is_flat());
  ASSERT_EQ(c.gates.size(), 3u);
  EXPECT_NEAR(c.gates[0].params.theta, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(c.gates[0].params.lambda, 2 * (std::numbers::pi - 1) / 3, 1e-15);
  EXPECT_EQ(c.gates[1].kind, GateKind::kX);
}

TEST(Serialize, QasmErrors) {
  const std::string head = "OPENQASM 2.0;\nqreg q[2];\n";
  EXPECT_THROW(from_qasm(head + "h q[0];\n"), UnsupportedGate);
  try {
    from_qasm(head + "u3(1,2) q[0];\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(from_qasm(head + "cz q[0],q[5];\n"), Error);
  EXPECT_THROW(from_qasm("qreg q[2];\nu3(1,2,3) q[0]\n"), ParseError);
}

TEST(Serialize, JsonErrors) {
  EXPECT_THROW(from_json("{\"n_q\": 4,"), ParseError);
  EXPECT_THROW(from_json("{\"version\":1,\"n_q\":4,\"half_depth\":0,\"layers\":"
                         "[[{\"pair\":[0,9],\"layout\":\"cz2\",\"angles\":[],\"phase\":0}]]}"),
               Error);
  try {
    from_json("{\n  \"n_q\": 4,\n  oops\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Serialize, ValidateRejectsOverlappingPairs) {
  Circuit c;
  c.n_q = 4;
  c.layers.push_back({identity_block(0, 1), identity_block(1, 2)});
  EXPECT_THROW(validate_circuit(c), InvalidArgument);
}

TEST(Serialize, SniffAndDispatch) {
  const Circuit c = sample_circuit();
  EXPECT_EQ(sniff_format("  {\"a\":1}"), Format::kJson);
  EXPECT_EQ(sniff_format("OPENQASM 2.0;"), Format::kQasm);
  for (Format f : {Format::kJson, Format::kQasm}) {
    const std::string text = serialize(c, f);
    EXPECT_LT(distance_up_to_phase(circuit_unitary(deserialize(text, sniff_format(text))),
                                   circuit_unitary(c)),
              1e-12);
  }
}

}  // namespace
}  // namespace peaked
