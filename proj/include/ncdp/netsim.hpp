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

// Discrete-event network simulator. Times are integer nanoseconds; events at
// equal times run in insertion order, so a run is a pure function of its
// scenario and seed.
//
// Scenario file, one directive per line ('#' comments, paths relative to the
// scenario file):
//
//   topology <file>
//   config <file>
//   seed <n>
//   sender <host> stream=<id> packets=<n> payload=<bytes> law=exponential|backtoback [rate=<payload bps>]
//   receiver <host> stream=<id>
//   fail <time_s> <src>:<port>
//   restore <time_s> <src>:<port>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ncdp/config.hpp"
#include "ncdp/switch.hpp"
#include "ncdp/topology.hpp"

namespace ncdp {

enum class SendLaw { Exponential, BackToBack };

struct SenderSpec {
  NodeId host = 0;
  StreamId stream = 0;
  std::size_t packets = 1000;
  std::size_t payload_size = 4096;
  SendLaw law = SendLaw::BackToBack;
  double rate_bps = 0;  // payload bits/s, exponential law only
};

struct ReceiverSpec {
  NodeId host = 0;
  StreamId stream = 0;
};

struct LinkEvent {
  Nanos time = 0;
  LinkIndex link = 0;
  bool fail = true;  // false: restore
};

struct Scenario {
  Topology topology;
  ConfigDocument config;
  std::vector<SenderSpec> senders;
  std::vector<ReceiverSpec> receivers;
  std::vector<LinkEvent> link_events;
  std::uint64_t seed = 1;
  std::uint64_t max_events = 50'000'000;
};

struct SendRecord {
  Nanos ts = 0;
  StreamId stream = 0;
  std::uint64_t seq = 0;
  std::uint16_t payload_len = 0;
};

struct Delivery {
  Nanos ts = 0;
  StreamId stream = 0;
  std::uint32_t batch = 0;
  int index = -1;
  std::uint16_t payload_len = 0;
  std::uint64_t digest = 0;  // FNV-1a of the payload
};

/// Per-stream packet accounting. Every packet put on a link or handed to a
/// switch ends in exactly one bucket:
///   host_sent + switch_emitted == switch_arrivals + host_arrivals
///                                 + lost_to_failure + unroutable + in_flight_at_end
struct PacketAccount {
  std::uint64_t host_sent = 0;
  std::uint64_t switch_emitted = 0;
  std::uint64_t switch_arrivals = 0;
  std::uint64_t host_arrivals = 0;
  std::uint64_t lost_to_failure = 0;
  std::uint64_t unroutable = 0;
  std::uint64_t in_flight_at_end = 0;

  bool balanced() const {
    return host_sent + switch_emitted ==
           switch_arrivals + host_arrivals + lost_to_failure + unroutable + in_flight_at_end;
  }
};

struct SwitchTrace {
  std::vector<std::pair<std::string, std::uint64_t>> counters;
  std::vector<TraversalRecord> traversals;
  std::uint64_t lost_batches = 0;
};

struct EventTrace {
  std::map<NodeId, std::vector<Delivery>> deliveries;  // receiver -> log
  std::map<NodeId, std::vector<SendRecord>> sends;     // sender -> log
  std::map<NodeId, SwitchTrace> switches;
  std::map<StreamId, PacketAccount> accounts;
  std::uint64_t events = 0;
  Nanos end_time = 0;
};

/// Deterministic payload bytes of packet `seq` of `stream`.
Bytes payload_bytes(std::uint64_t seed, StreamId stream, std::uint64_t seq, std::size_t len);
std::uint64_t fnv1a(std::span<const std::uint8_t> data);

/// Runs the scenario to quiescence. Throws SetupError on malformed input.
EventTrace run(const Scenario& scenario);

/// Delivered payload bits / (last - first delivery), in bits/s. Throws
/// DomainError with fewer than two deliveries.
double received_rate(const EventTrace& trace, NodeId receiver);
/// Same measure over a sender's log.
double send_rate(const EventTrace& trace, NodeId sender);

Scenario parse_scenario(std::istream& in, const std::string& base_dir);
Scenario load_scenario(const std::string& path);

/// `timestamp_ns,stream_id,batch,index,payload_len`
std::string deliveries_csv(const std::vector<Delivery>& log);
/// `counter,value`
std::string counters_csv(const SwitchTrace& sw);

}  // namespace ncdp
