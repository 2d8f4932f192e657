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

// Per-packet execution substrate of an emulated switch: deterministic cost
// counters, the latency model derived from them, and the traversal context
// through which primitives emit, clone, and recirculate packets.

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "ncdp/packet.hpp"

namespace ncdp {

/// Egress port that feeds a packet back into the switch's own ingress.
inline constexpr PortId kRecirculatePort = 0xFFFF;
inline constexpr int kDefaultMaxRecirc = 8;

struct PipelineCost {
  std::uint64_t table_lookups = 0;
  std::uint64_t bytes_touched = 0;
  std::uint64_t clones = 0;
  std::uint64_t recirculations = 0;

  PipelineCost& operator+=(const PipelineCost& o) {
    table_lookups += o.table_lookups;
    bytes_touched += o.bytes_touched;
    clones += o.clones;
    recirculations += o.recirculations;
    return *this;
  }
  friend bool operator==(const PipelineCost&, const PipelineCost&) = default;
};

/// latency = lookup_ns*lookups + byte_ps*bytes/1000 + recirc_ns*recirculations
struct CostModel {
  Nanos lookup_ns = 1000;
  Nanos byte_ps = 1000;
  Nanos recirc_ns = 1000;  // also the recirculation latency

  Nanos latency(const PipelineCost& c) const {
    return lookup_ns * static_cast<Nanos>(c.table_lookups) +
           byte_ps * static_cast<Nanos>(c.bytes_touched) / 1000 +
           recirc_ns * static_cast<Nanos>(c.recirculations);
  }
  friend bool operator==(const CostModel&, const CostModel&) = default;
};

enum class DecodeBranch { None, PassThrough, Arithmetic };

/// Where an ingress pass ended up. Every pass gets exactly one.
enum class Disposition { Forwarded, Stored, Consumed, DroppedUnmatched, LoopGuarded };

struct DataplaneCounters {
  std::uint64_t ingress_passes = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t stored = 0;
  std::uint64_t consumed = 0;
  std::uint64_t dropped_unmatched = 0;
  std::uint64_t loop_guarded = 0;

  std::uint64_t empty_port_drops = 0;
  std::uint64_t redundant = 0;
  std::uint64_t late = 0;
  std::uint64_t evicted_undelivered = 0;
  std::uint64_t integrity_errors = 0;
  std::uint64_t batches_coded = 0;
  std::uint64_t batches_decoded = 0;
  std::uint64_t decode_arithmetic = 0;
  std::uint64_t decode_pass_through = 0;
  std::uint64_t emitted = 0;

  void count(Disposition d);
};

struct Emission {
  Packet packet;
  PortId port = 0;
  Nanos ready = 0;  // time the packet is handed to the egress port
};

/// One packet's trip through a switch, including every recirculated pass it causes.
class Traversal {
 public:
  Traversal(std::uint16_t switch_id, Nanos start, const CostModel& model, int max_recirc)
      : switch_id_(switch_id), start_(start), model_(model), max_recirc_(max_recirc) {}

  PipelineCost& cost() { return cost_; }
  const PipelineCost& cost() const { return cost_; }
  Nanos start() const { return start_; }
  /// Simulated time reached so far: start plus the latency of the work done.
  Nanos now() const { return start_ + model_.latency(cost_); }

  /// Queue p for egress on `port`, stamping this switch's telemetry record.
  void emit(Packet p, PortId port);

  /// Copy of p, counted as one clone.
  Packet clone(const Packet& p);

  /// Clone p, apply the mutator, and queue the copy for another ingress pass.
  /// Returns false (and counts a loop-guard hit) once p has already been
  /// recirculated max_recirc times.
  bool clone_and_recirculate(const Packet& p, const std::function<void(Packet&)>& mutator);

  bool has_recirculation() const { return !recirculated_.empty(); }
  Packet pop_recirculation();

  std::vector<Emission>& emissions() { return emissions_; }
  std::uint64_t loop_guard_hits() const { return loop_guard_hits_; }

  DecodeBranch branch = DecodeBranch::None;
  bool coded = false;

 private:
  std::uint16_t switch_id_;
  Nanos start_;
  const CostModel& model_;
  int max_recirc_;
  PipelineCost cost_;
  std::vector<Emission> emissions_;
  std::deque<Packet> recirculated_;
  std::uint64_t loop_guard_hits_ = 0;
};

}  // namespace ncdp
