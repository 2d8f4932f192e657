/* Copyright 2026 The ncdp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

// The five coding primitives (split, code, forward, gather, decode). Each runs
// as an action bound to a match-table entry of a switch.

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "ncdp/pipeline.hpp"
#include "ncdp/register_bank.hpp"

namespace ncdp {

/// Egress port plus the primitive the next hop should apply.
struct OutputSpec {
  PortId port = 0;
  Primitive next = Primitive::Forward;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct SplitParams {
  BankId bank = 0;
  std::vector<std::optional<OutputSpec>> assign;  // by generation index; nullopt = store only
  friend bool operator==(const SplitParams&, const SplitParams&) = default;
};

struct CodeRowSpec {
  CoeffVector coeffs;
  OutputSpec out;
  friend bool operator==(const CodeRowSpec&, const CodeRowSpec&) = default;
};

struct CodeParams {
  BankId bank = 0;
  std::vector<CodeRowSpec> rows;
  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

struct ForwardParams {
  std::vector<OutputSpec> outputs;
  friend bool operator==(const ForwardParams&, const ForwardParams&) = default;
};

struct GatherParams {
  BankId bank = 0;
  friend bool operator==(const GatherParams&, const GatherParams&) = default;
};

struct DecodeParams {
  BankId bank = 0;
  PortId deliver_port = 0;
  friend bool operator==(const DecodeParams&, const DecodeParams&) = default;
};

enum class PrimitiveKind { Split, Code, Forward, Gather, Decode };

struct PrimitiveConfig {
  std::variant<SplitParams, CodeParams, ForwardParams, GatherParams, DecodeParams> params;

  PrimitiveKind kind() const { return static_cast<PrimitiveKind>(params.index()); }
  friend bool operator==(const PrimitiveConfig&, const PrimitiveConfig&) = default;
};

enum class GatherOutcome { Stored, Ready, Redundant, Late };

/// State shared by the primitives chained on one table entry during one pass.
struct PassState {
  Packet& packet;
  std::optional<std::uint32_t> ready_batch;  // batch that reached full rank in this pass
  bool stored = false;
  bool emitted_self = false;
  bool consumed = false;
  bool dropped = false;
  bool loop_guarded = false;
};

struct PrimitiveEnv {
  Traversal& traversal;
  std::map<BankId, RegisterBank>& banks;
  DataplaneCounters& counters;

  RegisterBank& bank(BankId id);
};

// A symbol is framed as a 2-byte big-endian (length + 1) prefix and the
// payload; zero padding may follow. A zero prefix marks a filler symbol that
// pads out the last batch of a stream.
Symbol frame_symbol(std::span<const std::uint8_t> payload);
Symbol filler_symbol();
/// Payload carried by a framed symbol; nullopt for fillers. Throws IntegrityError on a bad prefix.
std::optional<Bytes> unframe_symbol(std::span<const std::uint8_t> symbol);

void split(PassState& pass, const SplitParams& params, PrimitiveEnv& env);
void code(PassState& pass, const CodeParams& params, PrimitiveEnv& env);
void forward(PassState& pass, const ForwardParams& params, PrimitiveEnv& env);
GatherOutcome gather(PassState& pass, const GatherParams& params, PrimitiveEnv& env);
void decode(PassState& pass, const DecodeParams& params, PrimitiveEnv& env);

void run_primitive(PassState& pass, const PrimitiveConfig& config, PrimitiveEnv& env);

}  // namespace ncdp
