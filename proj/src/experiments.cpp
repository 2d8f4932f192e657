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


#include "ncdp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <map>

#include "ncdp/compiler.hpp"
#include "ncdp/error.hpp"
#include "ncdp/flow.hpp"

#ifndef NCDP_DATA_DIR
#define NCDP_DATA_DIR "data"
#endif

namespace ncdp {
namespace {

constexpr StreamId kStream = 1;

template <typename T, typename F>
std::vector<T> run_all(std::size_t n, F&& point) {
  std::vector<std::future<T>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, point, i));
  std::vector<T> out;
  out.reserve(n);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

Topology with_link_delay(const Topology& topo, LinkIndex target, Nanos delay) {
  Topology out;
  for (const auto& [id, kind] : topo.nodes()) out.add_node(id, kind);
  for (LinkIndex i = 0; i < topo.links().size(); ++i) {
    Link l = topo.link(i);
    if (i == target) l.delay_ns = delay;
    out.add_link(l);
  }
  return out;
}

std::vector<Path> diversity_paths(const Topology& topo, const StreamSpec& s) {
  return edge_disjoint_paths(topo, topo.attachment_switch(s.source), topo.attachment_switch(s.receivers.front()),
                             s.paths);
}

std::uint64_t counter(const SwitchTrace& sw, const std::string& name) {
  for (const auto& [n, v] : sw.counters)
    if (n == name) return v;
  return 0;
}

}  // namespace

void SweepSpec::validate() const {
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (packets < 2) throw ConfigError("packets must be >= 2");
  if (payload_size == 0 || payload_size > 0xFFFD) throw ConfigError("payload size must be in [1, 65533]");
  switch (scenario) {
    case ScenarioKind::ButterflyRate:
      if (ratios.empty()) throw ConfigError("empty ratio sweep");
      for (double r : ratios)
        if (!(r > 0 && r <= 1)) throw ConfigError("send-rate ratio " + std::to_string(r) + " outside (0, 1]");
      break;
    case ScenarioKind::DiversityFailure:
      if (fail_sets.empty()) throw ConfigError("empty failure sweep");
      for (double f : fail_fractions)
        if (!(f >= 0 && f <= 1)) throw ConfigError("failure fraction outside [0, 1]");
      for (const auto& set : fail_sets)
        if (!set.empty() && fail_fractions.empty()) throw ConfigError("failures need at least one failure time");
      break;
    case ScenarioKind::DiversityBench:
      if (payload_sizes.empty() || delays_ms.empty()) throw ConfigError("empty bench sweep");
      for (auto p : payload_sizes)
        if (p == 0 || p > 0xFFFD) throw ConfigError("payload size must be in [1, 65533]");
      for (double d : delays_ms)
        if (!(d >= 0)) throw ConfigError("delay must be >= 0");
      break;
  }
}

SweepSpec default_sweep(ScenarioKind kind) {
  SweepSpec s;
  s.scenario = kind;
  switch (kind) {
    case ScenarioKind::ButterflyRate:
      s.ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
      s.repetitions = 5;
      break;
    case ScenarioKind::DiversityFailure:
      for (int i = 0; i < 10; ++i) s.fail_fractions.push_back((i + 0.5) / 10.0);
      s.fail_sets = {{}, {1}, {2}, {3}, {1, 2}};
      break;
    case ScenarioKind::DiversityBench:
      s.payload_sizes = {1024, 2048, 4096};
      s.delays_ms = {1, 3, 5, 7, 9};
      break;
  }
  return s;
}

std::string fixture_path(const std::string& name) { return (std::filesystem::path(NCDP_DATA_DIR) / name).string(); }

Topology load_or_fixture(const SweepSpec& spec, const std::string& fixture) {
  return load_topology(spec.topology_path.empty() ? fixture_path(fixture) : spec.topology_path);
}

StreamSpec fixture_stream(const Topology& topo, FunctionKind function, std::size_t receivers) {
  const auto hosts = topo.hosts();
  if (hosts.size() < receivers + 1)
    throw InfeasibleError("topology has " + std::to_string(hosts.size()) + " hosts, need " +
                          std::to_string(receivers + 1));
  StreamSpec s;
  s.id = kStream;
  s.function = function;
  s.source = hosts[0];
  s.receivers.assign(hosts.begin() + 1, hosts.begin() + 1 + static_cast<std::ptrdiff_t>(receivers));
  s.gen_size = 2;
  s.paths = 3;
  return s;
}

Scenario butterfly_scenario(const Topology& topo, FunctionKind function, double ratio, std::uint64_t seed,
                            const SweepSpec& spec) {
  StreamSpec s = fixture_stream(topo, function, 2);
  const double maxflow = static_cast<double>(min_multicast_rate(topo, s.source, s.receivers));
  s.rate_bps = static_cast<std::uint64_t>(std::floor(ratio * maxflow));
  Scenario sc;
  sc.topology = topo;
  sc.config = compile(topo, s);
  sc.seed = seed;
  sc.senders.push_back(SenderSpec{s.source, s.id, spec.packets, spec.payload_size, SendLaw::Exponential, ratio * maxflow});
  for (NodeId r : s.receivers) sc.receivers.push_back(ReceiverSpec{r, s.id});
  return sc;
}

std::vector<ButterflyPoint> butterfly_rate(const SweepSpec& spec) {
  spec.validate();
  const Topology topo = load_or_fixture(spec, "butterfly.topo");
  struct Job {
    double ratio;
    FunctionKind fn;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  for (double r : spec.ratios)
    for (auto fn : {FunctionKind::Butterfly, FunctionKind::Forwarding})
      for (std::size_t rep = 0; rep < spec.repetitions; ++rep) jobs.push_back({r, fn, rep});

  auto results = run_all<std::vector<ButterflyPoint>>(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const std::uint64_t seed = spec.seed + j.rep;
    const Scenario sc = butterfly_scenario(topo, j.fn, j.ratio, seed, spec);
    const EventTrace trace = run(sc);
    const StreamSpec& s = sc.config.streams.front();
    const double maxflow = static_cast<double>(min_multicast_rate(topo, s.source, s.receivers));
    const double sent = send_rate(trace, s.source);
    std::vector<ButterflyPoint> pts;
    for (NodeId r : s.receivers) {
      ButterflyPoint p;
      p.ratio = j.ratio;
      p.mode = j.fn == FunctionKind::Butterfly ? "coding" : "forwarding";
      p.receiver = r;
      p.rep = j.rep;
      p.seed = seed;
      p.maxflow_bps = maxflow;
      p.send_bps = sent;
      p.delivered = trace.deliveries.at(r).size();
      p.recv_bps = p.delivered >= 2 ? received_rate(trace, r) : 0.0;
      p.recv_over_send = p.recv_bps / sent;
      pts.push_back(p);
    }
    return pts;
  });

  std::vector<ButterflyPoint> out;
  for (auto& v : results) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end(), [](const ButterflyPoint& a, const ButterflyPoint& b) {
    return std::tie(a.mode, a.ratio, a.receiver, a.rep) < std::tie(b.mode, b.ratio, b.receiver, b.rep);
  });
  return out;
}

std::vector<ButterflySummary> summarize(const std::vector<ButterflyPoint>& points) {
  std::map<std::tuple<std::string, double, NodeId>, std::vector<double>> groups;
  for (const auto& p : points) groups[{p.mode, p.ratio, p.receiver}].push_back(p.recv_over_send);
  std::vector<ButterflySummary> out;
  for (const auto& [key, v] : groups) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    out.push_back(ButterflySummary{std::get<1>(key), std::get<0>(key), std::get<2>(key), mean, sd});
  }
  return out;
}

Scenario diversity_scenario(const Topology& topo, const SweepSpec& spec, std::size_t payload_size) {
  const StreamSpec s = fixture_stream(topo, FunctionKind::Diversity, 1);
  Scenario sc;
  sc.topology = topo;
  sc.config = compile(topo, s);
  sc.seed = spec.seed;
  sc.senders.push_back(SenderSpec{s.source, s.id, spec.packets, payload_size, SendLaw::BackToBack, 0});
  sc.receivers.push_back(ReceiverSpec{s.receivers.front(), s.id});
  return sc;
}

std::vector<FailurePoint> diversity_failure(const SweepSpec& spec) {
  spec.validate();
  const Topology topo = load_or_fixture(spec, "diversity.topo");
  const Scenario base = diversity_scenario(topo, spec, spec.payload_size);
  const StreamSpec& s = base.config.streams.front();
  const auto paths = diversity_paths(topo, s);
  for (const auto& set : spec.fail_sets)
    for (auto p : set)
      if (p < 1 || p > paths.size())
        throw ConfigError("path " + std::to_string(p) + " outside 1.." + std::to_string(paths.size()));

  // Stream span from an unfailed run sets the failure times.
  const EventTrace clean = run(base);
  const Nanos span = clean.sends.at(s.source).back().ts;

  struct Job {
    std::vector<std::size_t> set;
    double fraction;
  };
  std::vector<Job> jobs;
  for (const auto& set : spec.fail_sets) {
    if (set.empty()) jobs.push_back({set, 0.0});
    else
      for (double f : spec.fail_fractions) jobs.push_back({set, f});
  }

  auto out = run_all<FailurePoint>(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    Scenario sc = base;
    FailurePoint fp;
    fp.failed_paths = j.set;
    fp.fail_fraction = j.fraction;
    fp.fail_time = static_cast<Nanos>(std::llround(j.fraction * static_cast<double>(span)));
    for (auto p : j.set) sc.link_events.push_back(LinkEvent{fp.fail_time, paths[p - 1].front(), true});
    const EventTrace trace = run(sc);

    const auto& sends = trace.sends.at(s.source);
    const auto& log = trace.deliveries.at(s.receivers.front());
    fp.sent = sends.size();
    std::vector<bool> seen(fp.sent, false);
    std::uint64_t prev_seq = 0;
    for (std::size_t n = 0; n < log.size(); ++n) {
      const Delivery& d = log[n];
      const std::uint64_t seq = std::uint64_t{d.batch} * s.gen_size + static_cast<std::uint64_t>(d.index);
      if (d.index < 0 || seq >= fp.sent || seen[seq]) {
        fp.byte_exact = false;
        continue;
      }
      seen[seq] = true;
      ++fp.delivered;
      if (d.digest != fnv1a(payload_bytes(sc.seed, s.id, seq, sends[seq].payload_len))) fp.byte_exact = false;
      if (n > 0 && seq <= prev_seq) fp.in_order = false;
      if (n > 0) fp.max_gap_ns = std::max(fp.max_gap_ns, d.ts - log[n - 1].ts);
      prev_seq = seq;
    }
    fp.loss = fp.sent - fp.delivered;
    for (const auto& [id, sw] : trace.switches) {
      fp.unmatched_drops += counter(sw, "dropped_unmatched");
      fp.loop_guarded += counter(sw, "loop_guarded");
    }
    return fp;
  });
  std::sort(out.begin(), out.end(), [](const FailurePoint& a, const FailurePoint& b) {
    return std::tie(a.failed_paths, a.fail_fraction) < std::tie(b.failed_paths, b.fail_fraction);
  });
  return out;
}

std::string_view to_string(BenchRole r) {
  switch (r) {
    case BenchRole::Coding: return "coding";
    case BenchRole::Forwarding: return "forwarding";
    case BenchRole::Decoding: return "decoding";
  }
  return "?";
}

std::string_view to_string(DecodeBranch b) {
  switch (b) {
    case DecodeBranch::None: return "none";
    case DecodeBranch::PassThrough: return "pass-through";
    case DecodeBranch::Arithmetic: return "arithmetic";
  }
  return "?";
}

std::vector<BenchPoint> diversity_bench(const SweepSpec& spec) {
  spec.validate();
  const Topology topo = load_or_fixture(spec, "diversity.topo");
  const StreamSpec s = fixture_stream(topo, FunctionKind::Diversity, 1);
  const auto paths = diversity_paths(topo, s);
  const LinkIndex parity_hop = paths.back().front();
  const double reference_ms = static_cast<double>(topo.link(paths.front().front()).delay_ns) / 1e6;
  const NodeId coder = topo.attachment_switch(s.source);
  const NodeId decoder = topo.attachment_switch(s.receivers.front());

  struct Job {
    std::size_t payload;
    double delay_ms;
  };
  std::vector<Job> jobs;
  for (auto p : spec.payload_sizes)
    for (double d : spec.delays_ms) jobs.push_back({p, d});

  auto results = run_all<std::vector<BenchPoint>>(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const Topology t = with_link_delay(topo, parity_hop, static_cast<Nanos>(std::llround(j.delay_ms * 1e6)));
    const EventTrace trace = run(diversity_scenario(t, spec, j.payload));

    std::map<std::pair<BenchRole, DecodeBranch>, std::vector<const TraversalRecord*>> groups;
    for (const auto& [id, sw] : trace.switches) {
      if (sw.traversals.empty()) continue;
      const BenchRole role = id == coder ? BenchRole::Coding : id == decoder ? BenchRole::Decoding : BenchRole::Forwarding;
      for (const auto& rec : sw.traversals)
        groups[{role, role == BenchRole::Decoding ? rec.branch : DecodeBranch::None}].push_back(&rec);
    }
    std::vector<BenchPoint> pts;
    for (const auto& [key, recs] : groups) {
      BenchPoint bp;
      bp.payload_size = j.payload;
      bp.delay_ms = j.delay_ms;
      bp.differential_ms = j.delay_ms - reference_ms;
      bp.role = key.first;
      bp.branch = key.second;
      bp.traversals = recs.size();
      for (const auto* r : recs) {
        bp.mean_lookups += static_cast<double>(r->cost.table_lookups);
        bp.mean_bytes += static_cast<double>(r->cost.bytes_touched);
        bp.mean_clones += static_cast<double>(r->cost.clones);
        bp.mean_recirculations += static_cast<double>(r->cost.recirculations);
        bp.mean_latency_ns += static_cast<double>(r->latency);
      }
      const double n = static_cast<double>(recs.size());
      bp.mean_lookups /= n;
      bp.mean_bytes /= n;
      bp.mean_clones /= n;
      bp.mean_recirculations /= n;
      bp.mean_latency_ns /= n;
      pts.push_back(bp);
    }
    return pts;
  });

  std::vector<BenchPoint> out;
  for (auto& v : results) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end(), [](const BenchPoint& a, const BenchPoint& b) {
    return std::tie(a.payload_size, a.delay_ms, a.role, a.branch) < std::tie(b.payload_size, b.delay_ms, b.role, b.branch);
  });
  return out;
}

}  // namespace ncdp
