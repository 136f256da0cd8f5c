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

#include <string>
#include <string_view>

#include "peaked/circuit.hpp"

namespace peaked {

enum class Format { kJson, kQasm };

/// Circuit JSON (schema version 1). With include_metadata == false the
/// "metadata" member is written as null, which is the challenge form.
std::string to_json(const Circuit& c, bool include_metadata = true);
Circuit from_json(std::string_view text);

/// OpenQASM 2.0 using only u3, cz and x. Block phases are dropped and angles
/// are normalized onto (-pi, pi].
std::string to_qasm(const Circuit& c);

/// Accepts the subset written by to_qasm (plus creg declarations and
/// arithmetic in gate arguments). Blocks are reconstructed when the gate
/// stream groups into U3-pair/CZ blocks; otherwise a flat circuit is returned.
Circuit from_qasm(std::string_view text);

std::string serialize(const Circuit& c, Format f, bool include_metadata = true);
Circuit deserialize(std::string_view text, Format f);

/// Structural validation shared by the readers: pair bounds, disjoint pairs
/// within a layer, angle counts, hidden-string length.
void validate_circuit(const Circuit& c);

/// Guesses the format from content: JSON when the first non-space byte is '{'.
Format sniff_format(std::string_view text);

}  // namespace peaked
