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

// Emulated programmable switch: a match table keyed by
// (stream_id, next_primitive, optional ingress port), per-stream register
// banks, and clone/recirculate support, all driven one packet at a time.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncdp/pipeline.hpp"
#include "ncdp/primitives.hpp"
#include "ncdp/register_bank.hpp"

namespace ncdp {

struct TableKey {
  StreamId stream = 0;
  Primitive match = Primitive::Forward;
  std::optional<PortId> in_port;  // nullopt matches any ingress port

  friend auto operator<=>(const TableKey&, const TableKey&) = default;
  friend bool operator==(const TableKey&, const TableKey&) = default;
};

/// Actions run in order; each one costs a table lookup.
struct TableEntry {
  TableKey key;
  std::vector<PrimitiveConfig> actions;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

struct BankSpec {
  BankId id = 0;
  StreamId stream = 0;
  std::uint8_t gen_size = 2;
  std::size_t ring = kDefaultRingSize;
  friend bool operator==(const BankSpec&, const BankSpec&) = default;
};

struct SwitchConfig {
  NodeId id = 0;
  CostModel cost;
  int max_recirc = kDefaultMaxRecirc;
  std::vector<BankSpec> banks;
  std::vector<TableEntry> entries;
  friend bool operator==(const SwitchConfig&, const SwitchConfig&) = default;
};

struct TraversalRecord {
  Nanos start = 0;
  PipelineCost cost;
  Nanos latency = 0;
  DecodeBranch branch = DecodeBranch::None;
  bool coded = false;
};

struct IngressResult {
  std::vector<Emission> emissions;
  PipelineCost cost;
  Nanos latency = 0;
  DecodeBranch branch = DecodeBranch::None;
};

inline const PipelineCost& cost_of(const IngressResult& r) { return r.cost; }

class Switch {
 public:
  explicit Switch(SwitchConfig config);

  /// Runs one arriving packet, and every packet it recirculates, to completion.
  IngressResult ingress(Packet packet, PortId port, Nanos now);

  /// Pads the partial last batch of every split on `stream` with filler symbols.
  IngressResult end_stream(StreamId stream, Nanos now);

  NodeId id() const { return config_.id; }
  const SwitchConfig& config() const { return config_; }
  const DataplaneCounters& counters() const { return counters_; }
  std::vector<std::pair<std::string, std::uint64_t>> counter_snapshot() const;
  const std::vector<TraversalRecord>& traversals() const { return traversals_; }
  RegisterBank& bank(BankId id);

 private:
  Disposition run_pass(Packet& packet, PortId port, Traversal& traversal);
  const TableEntry* match(StreamId stream, Primitive next, PortId port) const;

  SwitchConfig config_;
  std::map<TableKey, std::size_t> table_;  // index into config_.entries
  std::map<BankId, RegisterBank> banks_;
  DataplaneCounters counters_;
  std::vector<TraversalRecord> traversals_;
};

}  // namespace ncdp
