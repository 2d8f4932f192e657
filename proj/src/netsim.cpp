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


#include "ncdp/netsim.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct HostSend {
  std::size_t sender;
  std::uint64_t seq;
};
struct LinkArrive {
  LinkIndex link;
  std::uint64_t epoch;
  Packet packet;
};
struct SwitchEgress {
  NodeId node;
  PortId port;
  Packet packet;
};
struct LinkChange {
  LinkIndex link;
  bool fail;
};
struct StreamEnd {
  NodeId node;
  StreamId stream;
};
using EventBody = std::variant<HostSend, LinkArrive, SwitchEgress, LinkChange, StreamEnd>;

struct LinkState {
  bool up = true;
  Nanos busy_until = 0;
  std::uint64_t epoch = 0;
};

struct SenderState {
  SenderSpec spec;
  std::uint8_t k = 1;
  PortId port = 0;
  Primitive first = Primitive::Forward;
  std::mt19937_64 rng;
};

class Simulator {
 public:
  explicit Simulator(const Scenario& sc) : sc_(sc), links_(sc.topology.links().size()) {
    for (NodeId id : sc.topology.switches()) {
      auto it = sc.config.switches.find(id);
      SwitchConfig cfg = it != sc.config.switches.end() ? it->second : SwitchConfig{};
      cfg.id = id;
      switches_.emplace(id, Switch(std::move(cfg)));
    }
    for (const auto& r : sc.receivers) {
      if (!sc.topology.has_node(r.host) || sc.topology.kind(r.host) != NodeKind::Host)
        throw SetupError("receiver " + std::to_string(r.host) + " is not a host");
      receiving_.insert({r.host, r.stream});
      trace_.deliveries[r.host];
    }
    for (std::size_t i = 0; i < sc.senders.size(); ++i) {
      const SenderSpec& s = sc.senders[i];
      if (!sc.topology.has_node(s.host) || sc.topology.kind(s.host) != NodeKind::Host)
        throw SetupError("sender " + std::to_string(s.host) + " is not a host");
      if (s.payload_size > 0xFFFD) throw SetupError("payload size exceeds 65533 bytes");
      if (s.law == SendLaw::Exponential && !(s.rate_bps > 0))
        throw SetupError("exponential sender needs rate > 0");
      SenderState st{s, 1, 0, Primitive::Forward, std::mt19937_64(sc.seed ^ (0x9E3779B97F4A7C15ULL * (s.stream + 1ULL)) ^ s.host)};
      bool found = false;
      for (const auto& h : sc.config.hosts) {
        if (h.host == s.host && h.stream == s.stream && h.sender) {
          st.port = h.port;
          st.first = h.first;
          found = true;
        }
      }
      if (!found) throw SetupError("no sender role for host " + std::to_string(s.host) + " stream " +
                                   std::to_string(s.stream));
      for (const auto& spec : sc.config.streams)
        if (spec.id == s.stream) st.k = spec.gen_size;
      senders_.push_back(std::move(st));
      trace_.sends[s.host];
      if (s.packets > 0) schedule(0, HostSend{i, 0});
    }
    for (const auto& le : sc.link_events) {
      if (le.link >= links_.size()) throw SetupError("link event names unknown link");
      schedule(le.time, LinkChange{le.link, le.fail});
    }
  }

  EventTrace run() {
    while (!queue_.empty()) {
      if (trace_.events >= sc_.max_events) throw SetupError("event budget exhausted");
      auto node = queue_.extract(queue_.begin());
      now_ = node.key().first;
      ++trace_.events;
      std::visit([this](auto& ev) { handle(ev); }, node.mapped());
    }
    trace_.end_time = now_;
    for (auto& [id, sw] : switches_) {
      SwitchTrace st;
      st.counters = sw.counter_snapshot();
      st.traversals = sw.traversals();
      for (const auto& b : sw.config().banks) st.lost_batches += sw.bank(b.id).lost_batches().size();
      trace_.switches.emplace(id, std::move(st));
    }
    return std::move(trace_);
  }

 private:
  void schedule(Nanos t, EventBody body) { queue_.emplace(std::pair{t, next_seq_++}, std::move(body)); }

  /// Puts a packet on the link behind (node, port); returns when the link is free again.
  Nanos transmit(NodeId node, PortId port, Packet packet) {
    PacketAccount& acct = trace_.accounts[packet.header.stream_id];
    const auto li = sc_.topology.link_from_port(node, port);
    if (!li) {
      ++acct.unroutable;
      return now_;
    }
    const Link& l = sc_.topology.link(*li);
    LinkState& ls = links_[*li];
    const auto bits = static_cast<std::uint64_t>(packet.wire_size()) * 8ULL;
    const auto ser = static_cast<Nanos>((bits * 1'000'000'000ULL + l.bandwidth_bps - 1) / l.bandwidth_bps);
    if (!ls.up) {
      ++acct.lost_to_failure;
      return now_ + ser;
    }
    const Nanos start = std::max(now_, ls.busy_until);
    ls.busy_until = start + ser;
    schedule(ls.busy_until + l.delay_ns, LinkArrive{*li, ls.epoch, std::move(packet)});
    return ls.busy_until;
  }

  void handle(HostSend& ev) {
    SenderState& s = senders_[ev.sender];
    const std::size_t len = s.spec.payload_size;
    Packet p;
    p.header.stream_id = s.spec.stream;
    p.header.batch_number = static_cast<std::uint32_t>(ev.seq / s.k);
    p.header.next_primitive = s.first;
    p.header.gen_size = s.k;
    p.header.coeffs = unit_vector(s.k, static_cast<std::size_t>(ev.seq % s.k));
    p.header.orig_len = static_cast<std::uint16_t>(len);
    p.payload = payload_bytes(sc_.seed, s.spec.stream, ev.seq, len);
    p.meta.sequence = ev.seq;
    p.meta.end_of_stream = ev.seq + 1 == s.spec.packets;

    trace_.sends[s.spec.host].push_back(SendRecord{now_, s.spec.stream, ev.seq, static_cast<std::uint16_t>(len)});
    ++trace_.accounts[s.spec.stream].host_sent;
    const Nanos free_at = transmit(s.spec.host, s.port, std::move(p));

    if (ev.seq + 1 == s.spec.packets) return;
    Nanos next = free_at;
    if (s.spec.law == SendLaw::Exponential) {
      const double u = static_cast<double>(s.rng() >> 11) * 0x1.0p-53;
      const double mean_ns = static_cast<double>(len) * 8.0 * 1e9 / s.spec.rate_bps;
      next = now_ + static_cast<Nanos>(std::llround(-std::log1p(-u) * mean_ns));
    }
    schedule(std::max(next, now_), HostSend{ev.sender, ev.seq + 1});
  }

  void handle(LinkArrive& ev) {
    PacketAccount& acct = trace_.accounts[ev.packet.header.stream_id];
    if (links_[ev.link].epoch != ev.epoch) {
      ++acct.lost_to_failure;
      return;
    }
    const Link& l = sc_.topology.link(ev.link);
    if (sc_.topology.kind(l.dst) == NodeKind::Host) {
      ++acct.host_arrivals;
      const auto& h = ev.packet.header;
      if (h.next_primitive == Primitive::Deliver && receiving_.count({l.dst, h.stream_id})) {
        trace_.deliveries[l.dst].push_back(Delivery{now_, h.stream_id, h.batch_number, basis_index(h.coeffs),
                                                    static_cast<std::uint16_t>(ev.packet.payload.size()),
                                                    fnv1a(ev.packet.payload)});
      }
      return;
    }
    ++acct.switch_arrivals;
    const bool eos = ev.packet.meta.end_of_stream;
    const StreamId stream = ev.packet.header.stream_id;
    ev.packet.meta.ingress_ts = now_;
    Switch& sw = switches_.at(l.dst);
    absorb(sw.id(), sw.ingress(std::move(ev.packet), l.dst_port, now_));
    if (eos) schedule(now_, StreamEnd{l.dst, stream});
  }

  void handle(SwitchEgress& ev) { transmit(ev.node, ev.port, std::move(ev.packet)); }

  void handle(LinkChange& ev) {
    LinkState& ls = links_[ev.link];
    if (ev.fail) {
      if (!ls.up) return;
      ls.up = false;
      ++ls.epoch;
      ls.busy_until = now_;
    } else {
      ls.up = true;
    }
  }

  void handle(StreamEnd& ev) { absorb(ev.node, switches_.at(ev.node).end_stream(ev.stream, now_)); }

  void absorb(NodeId node, IngressResult result) {
    for (auto& e : result.emissions) {
      e.packet.meta.end_of_stream = false;
      ++trace_.accounts[e.packet.header.stream_id].switch_emitted;
      schedule(e.ready, SwitchEgress{node, e.port, std::move(e.packet)});
    }
  }

  const Scenario& sc_;
  std::vector<LinkState> links_;
  std::map<NodeId, Switch> switches_;
  std::vector<SenderState> senders_;
  std::set<std::pair<NodeId, StreamId>> receiving_;
  std::map<std::pair<Nanos, std::uint64_t>, EventBody> queue_;
  std::uint64_t next_seq_ = 0;
  Nanos now_ = 0;
  EventTrace trace_;
};

[[noreturn]] void scenario_fail(int line, const std::string& msg) {
  throw SetupError("scenario line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Bytes payload_bytes(std::uint64_t seed, StreamId stream, std::uint64_t seq, std::size_t len) {
  std::uint64_t state = seed ^ (std::uint64_t{stream} << 48) ^ (seq * 0xD1B54A32D192ED03ULL);
  Bytes out(len);
  for (std::size_t i = 0; i < len; i += 8) {
    const std::uint64_t w = splitmix64(state);
    for (std::size_t b = 0; b < 8 && i + b < len; ++b) out[i + b] = static_cast<std::uint8_t>(w >> (8 * b));
  }
  return out;
}

std::uint64_t fnv1a(std::span<const std::uint8_t> data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (auto b : data) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  return h;
}

EventTrace run(const Scenario& scenario) { return Simulator(scenario).run(); }

double received_rate(const EventTrace& trace, NodeId receiver) {
  auto it = trace.deliveries.find(receiver);
  if (it == trace.deliveries.end() || it->second.size() < 2)
    throw DomainError("received rate undefined: fewer than two deliveries at " + std::to_string(receiver));
  const auto& log = it->second;
  double bits = 0;
  for (const auto& d : log) bits += 8.0 * d.payload_len;
  const Nanos window = log.back().ts - log.front().ts;
  if (window <= 0) throw DomainError("received rate undefined: zero-length window");
  return bits * 1e9 / static_cast<double>(window);
}

double send_rate(const EventTrace& trace, NodeId sender) {
  auto it = trace.sends.find(sender);
  if (it == trace.sends.end() || it->second.size() < 2)
    throw DomainError("send rate undefined: fewer than two sends at " + std::to_string(sender));
  const auto& log = it->second;
  double bits = 0;
  for (const auto& s : log) bits += 8.0 * s.payload_len;
  const Nanos window = log.back().ts - log.front().ts;
  if (window <= 0) throw DomainError("send rate undefined: zero-length window");
  return bits * 1e9 / static_cast<double>(window);
}

Scenario parse_scenario(std::istream& in, const std::string& base_dir) {
  Scenario sc;
  bool have_topo = false, have_config = false;
  std::vector<std::tuple<int, Nanos, std::string, bool>> pending_links;
  auto resolve = [&](const std::string& f) {
    std::filesystem::path p(f);
    return (p.is_absolute() ? p : std::filesystem::path(base_dir) / p).string();
  };

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string word;
    if (!(ls >> word)) continue;
    std::vector<std::string> pos;
    std::map<std::string, std::string> kv;
    for (std::string tok; ls >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) pos.push_back(tok);
      else kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
      auto it = kv.find(key);
      if (it == kv.end()) scenario_fail(line_no, "missing '" + key + "='");
      return it->second;
    };
    auto number = [&](const std::string& text) {
      try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return static_cast<std::uint64_t>(v);
      } catch (const std::logic_error&) {
        scenario_fail(line_no, "bad number '" + text + "'");
      }
    };
    auto real = [&](const std::string& text) {
      try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v) || v < 0) throw std::invalid_argument(text);
        return v;
      } catch (const std::logic_error&) {
        scenario_fail(line_no, "bad number '" + text + "'");
      }
    };

    if (word == "topology" || word == "config") {
      if (pos.size() != 1) scenario_fail(line_no, word + " takes one file name");
      if (word == "topology") {
        sc.topology = load_topology(resolve(pos[0]));
        have_topo = true;
      } else {
        sc.config = load_config(resolve(pos[0]));
        have_config = true;
      }
    } else if (word == "seed") {
      if (pos.size() != 1) scenario_fail(line_no, "seed takes one value");
      sc.seed = number(pos[0]);
    } else if (word == "sender") {
      if (pos.size() != 1) scenario_fail(line_no, "sender takes one host id");
      SenderSpec s;
      s.host = static_cast<NodeId>(number(pos[0]));
      s.stream = static_cast<StreamId>(number(need("stream")));
      s.packets = number(need("packets"));
      s.payload_size = number(need("payload"));
      const std::string& law = need("law");
      if (law == "exponential") {
        s.law = SendLaw::Exponential;
        s.rate_bps = real(need("rate"));
      } else if (law == "backtoback") {
        s.law = SendLaw::BackToBack;
      } else {
        scenario_fail(line_no, "unknown law '" + law + "'");
      }
      sc.senders.push_back(s);
    } else if (word == "receiver") {
      if (pos.size() != 1) scenario_fail(line_no, "receiver takes one host id");
      sc.receivers.push_back(ReceiverSpec{static_cast<NodeId>(number(pos[0])),
                                          static_cast<StreamId>(number(need("stream")))});
    } else if (word == "fail" || word == "restore") {
      if (pos.size() != 2) scenario_fail(line_no, word + " takes <time_s> <src>:<port>");
      pending_links.emplace_back(line_no, static_cast<Nanos>(std::llround(real(pos[0]) * 1e9)), pos[1],
                                 word == "fail");
    } else {
      scenario_fail(line_no, "unknown directive '" + word + "'");
    }
  }
  if (!have_topo) throw SetupError("scenario has no topology");
  if (!have_config) throw SetupError("scenario has no config");
  for (const auto& [line, t, name, fail] : pending_links) {
    try {
      sc.link_events.push_back(LinkEvent{t, resolve_link(sc.topology, name), fail});
    } catch (const SetupError& e) {
      scenario_fail(line, e.what());
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, std::filesystem::path(path).parent_path().string());
}

std::string deliveries_csv(const std::vector<Delivery>& log) {
  std::ostringstream os;
  os << "timestamp_ns,stream_id,batch,index,payload_len\n";
  for (const auto& d : log) os << d.ts << ',' << d.stream << ',' << d.batch << ',' << d.index << ',' << d.payload_len << '\n';
  return os.str();
}

std::string counters_csv(const SwitchTrace& sw) {
  std::ostringstream os;
  os << "counter,value\n";
  for (const auto& [name, v] : sw.counters) os << name << ',' << v << '\n';
  os << "lost_batches," << sw.lost_batches << '\n';
  return os.str();
}

}  // namespace ncdp
