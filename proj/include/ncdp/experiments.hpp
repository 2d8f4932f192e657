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

// The three experiment drivers. Each sweep point is an independent
// simulation; points run concurrently and results come back sorted by
// parameter.

#include <cstdint>
#include <string>
#include <vector>

#include "ncdp/netsim.hpp"

namespace ncdp {

enum class ScenarioKind { ButterflyRate, DiversityFailure, DiversityBench };

struct SweepSpec {
  ScenarioKind scenario = ScenarioKind::ButterflyRate;
  std::vector<double> ratios;              // send rate / max-flow, butterfly
  std::vector<std::size_t> payload_sizes;  // diversity-bench
  std::vector<double> fail_fractions;      // failure time as a fraction of the stream, diversity-failure
  std::vector<std::vector<std::size_t>> fail_sets;  // 1-based path numbers failed together
  std::vector<double> delays_ms;           // S1-S4 link delay, diversity-bench
  std::size_t repetitions = 1;
  std::uint64_t seed = 1;
  std::size_t packets = 1000;
  std::size_t payload_size = 4096;
  std::string topology_path;  // empty: built-in fixture

  /// Throws ConfigError unless ratios lie in (0, 1], repetitions >= 1 and
  /// the list the scenario sweeps is non-empty.
  void validate() const;
};

SweepSpec default_sweep(ScenarioKind kind);

/// Fixture topologies shipped with the project.
std::string fixture_path(const std::string& name);
Topology load_or_fixture(const SweepSpec& spec, const std::string& fixture);

/// The lowest-id host is the source, the others receivers.
StreamSpec fixture_stream(const Topology& topo, FunctionKind function, std::size_t receivers);

// ---- butterfly-rate ----

struct ButterflyPoint {
  double ratio = 0;
  std::string mode;  // "coding" or "forwarding"
  NodeId receiver = 0;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double maxflow_bps = 0;
  double send_bps = 0;
  double recv_bps = 0;
  double recv_over_send = 0;
  std::size_t delivered = 0;
};

struct ButterflySummary {
  double ratio = 0;
  std::string mode;
  NodeId receiver = 0;
  double mean = 0;
  double stddev = 0;
};

std::vector<ButterflyPoint> butterfly_rate(const SweepSpec& spec);
std::vector<ButterflySummary> summarize(const std::vector<ButterflyPoint>& points);

// ---- diversity-failure ----

struct FailurePoint {
  std::vector<std::size_t> failed_paths;  // empty: no failure
  double fail_fraction = 0;
  Nanos fail_time = 0;
  std::size_t sent = 0;
  std::size_t delivered = 0;
  std::size_t loss = 0;
  bool byte_exact = true;
  bool in_order = true;
  Nanos max_gap_ns = 0;
  std::uint64_t unmatched_drops = 0;
  std::uint64_t loop_guarded = 0;
};

std::vector<FailurePoint> diversity_failure(const SweepSpec& spec);

// ---- diversity-bench ----

enum class BenchRole { Coding, Forwarding, Decoding };
std::string_view to_string(BenchRole r);

struct BenchPoint {
  std::size_t payload_size = 0;
  double delay_ms = 0;
  double differential_ms = 0;  // S1-S4 delay minus the other first-hop delays
  BenchRole role = BenchRole::Forwarding;
  DecodeBranch branch = DecodeBranch::None;
  std::size_t traversals = 0;
  double mean_lookups = 0;
  double mean_bytes = 0;
  double mean_clones = 0;
  double mean_recirculations = 0;
  double mean_latency_ns = 0;
};

std::vector<BenchPoint> diversity_bench(const SweepSpec& spec);
std::string_view to_string(DecodeBranch b);

/// Scenario used by diversity-failure and diversity-bench: back-to-back
/// sender on the compiled diversity function.
Scenario diversity_scenario(const Topology& topo, const SweepSpec& spec, std::size_t payload_size);
/// The same for butterfly-rate at one send-rate ratio.
Scenario butterfly_scenario(const Topology& topo, FunctionKind function, double ratio, std::uint64_t seed,
                            const SweepSpec& spec);

}  // namespace ncdp
