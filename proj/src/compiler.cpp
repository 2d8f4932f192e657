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


#include "ncdp/compiler.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

constexpr BankId kStreamBank = 0;

SwitchConfig& switch_of(ConfigDocument& doc, NodeId id) {
  SwitchConfig& sw = doc.switches[id];
  sw.id = id;
  return sw;
}

void add_bank(ConfigDocument& doc, NodeId sw, const StreamSpec& spec) {
  switch_of(doc, sw).banks.push_back(BankSpec{kStreamBank, spec.id, spec.gen_size, kDefaultRingSize});
}

void add_action(ConfigDocument& doc, NodeId sw, TableKey key, PrimitiveConfig action) {
  auto& entries = switch_of(doc, sw).entries;
  for (auto& e : entries) {
    if (e.key == key) {
      e.actions.push_back(std::move(action));
      return;
    }
  }
  entries.push_back(TableEntry{key, {std::move(action)}});
}

const Link& direct_link(const Topology& topo, NodeId src, NodeId dst) {
  auto li = topo.find_link(src, dst);
  if (!li) throw InfeasibleError("no link " + std::to_string(src) + "->" + std::to_string(dst));
  return topo.link(*li);
}

void add_sender(ConfigDocument& doc, const Topology& topo, const StreamSpec& spec, Primitive first) {
  const auto outs = topo.out_links(spec.source);
  if (outs.empty()) throw InfeasibleError("source host " + std::to_string(spec.source) + " has no links");
  PortId port = topo.link(outs.front()).src_port;
  for (LinkIndex li : outs) port = std::min(port, topo.link(li).src_port);
  doc.hosts.push_back(HostRole{spec.source, spec.id, true, port, first});
  for (NodeId r : spec.receivers) doc.hosts.push_back(HostRole{r, spec.id, false, 0, Primitive::Deliver});
}

void check_hosts(const Topology& topo, const StreamSpec& spec) {
  auto is_host = [&](NodeId n) { return topo.has_node(n) && topo.kind(n) == NodeKind::Host; };
  if (!is_host(spec.source)) throw ConfigError("stream source " + std::to_string(spec.source) + " is not a host");
  if (spec.receivers.empty()) throw ConfigError("stream has no receivers");
  for (NodeId r : spec.receivers)
    if (!is_host(r)) throw ConfigError("stream receiver " + std::to_string(r) + " is not a host");
}

/// Forward entries along the switch-to-switch links of `path` after its first
/// link; the hop entering `egress` carries `last_next`.
void add_path_forwards(ConfigDocument& doc, const Topology& topo, StreamId stream, const Path& path,
                       Primitive last_next) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Link& in = topo.link(path[i - 1]);
    const Link& out = topo.link(path[i]);
    const Primitive next = (i + 1 == path.size()) ? last_next : Primitive::Forward;
    add_action(doc, in.dst, TableKey{stream, Primitive::Forward, in.dst_port},
               PrimitiveConfig{ForwardParams{{OutputSpec{out.src_port, next}}}});
  }
}

}  // namespace

void check_admission(const Topology& topo, const StreamSpec& spec) {
  if (spec.rate_bps == 0) return;
  const std::uint64_t cap = min_multicast_rate(topo, spec.source, spec.receivers);
  if (spec.rate_bps > cap)
    throw InfeasibleError("requested rate " + std::to_string(spec.rate_bps) + " bps exceeds min max-flow " +
                          std::to_string(cap) + " bps");
}

ConfigDocument compile_diversity(const Topology& topo, const StreamSpec& spec) {
  check_hosts(topo, spec);
  if (spec.receivers.size() != 1) throw ConfigError("diversity streams are unicast");
  if (spec.paths < 2 || spec.paths != std::size_t{spec.gen_size} + 1)
    throw ConfigError("diversity needs paths = k + 1 (k=" + std::to_string(spec.gen_size) +
                      ", paths=" + std::to_string(spec.paths) + ")");
  check_admission(topo, spec);

  const NodeId src = topo.attachment_switch(spec.source);
  const NodeId dst = topo.attachment_switch(spec.receivers.front());
  if (src == dst) throw InfeasibleError("source and receiver share switch " + std::to_string(src));
  const auto paths = edge_disjoint_paths(topo, src, dst, spec.paths);
  const Link& deliver = direct_link(topo, dst, spec.receivers.front());

  ConfigDocument doc;
  doc.streams.push_back(spec);
  add_sender(doc, topo, spec, Primitive::Split);

  add_bank(doc, src, spec);
  const std::size_t k = spec.gen_size;
  auto first_hop = [&](const Path& p) {
    const Link& l = topo.link(p.front());
    return OutputSpec{l.src_port, p.size() == 1 ? Primitive::Gather : Primitive::Forward};
  };
  SplitParams sp{kStreamBank, {}};
  for (std::size_t i = 0; i < k; ++i) sp.assign.emplace_back(first_hop(paths[i]));
  CodeParams cp{kStreamBank, {}};
  cp.rows.push_back(CodeRowSpec{CoeffVector(k, Gf256{1}), first_hop(paths[k])});

  const TableKey ingress{spec.id, Primitive::Split, std::nullopt};
  add_action(doc, src, ingress, PrimitiveConfig{std::move(sp)});
  add_action(doc, src, ingress, PrimitiveConfig{std::move(cp)});

  for (const auto& p : paths) add_path_forwards(doc, topo, spec.id, p, Primitive::Gather);

  add_bank(doc, dst, spec);
  const TableKey egress{spec.id, Primitive::Gather, std::nullopt};
  add_action(doc, dst, egress, PrimitiveConfig{GatherParams{kStreamBank}});
  add_action(doc, dst, egress, PrimitiveConfig{DecodeParams{kStreamBank, deliver.src_port}});
  return doc;
}

ButterflyEmbedding find_butterfly(const Topology& topo, NodeId source, NodeId t1, NodeId t2) {
  ButterflyEmbedding emb;
  emb.s = topo.attachment_switch(source);
  emb.e1 = topo.attachment_switch(t1);
  emb.e2 = topo.attachment_switch(t2);
  auto linked = [&](NodeId u, NodeId v) { return topo.find_link(u, v).has_value(); };
  auto is_switch = [&](NodeId n) { return topo.kind(n) == NodeKind::Switch; };

  std::vector<NodeId> heads;
  for (LinkIndex li : topo.out_links(emb.s))
    if (is_switch(topo.link(li).dst)) heads.push_back(topo.link(li).dst);
  const auto sw = topo.switches();

  for (NodeId a : heads) {
    for (NodeId b : heads) {
      if (a == b || !linked(a, emb.e1) || !linked(b, emb.e2)) continue;
      for (NodeId c : sw) {
        if (!linked(a, c) || !linked(b, c)) continue;
        for (NodeId d : sw) {
          if (!linked(c, d) || !linked(d, emb.e1) || !linked(d, emb.e2)) continue;
          const std::set<NodeId> distinct{emb.s, a, b, c, d, emb.e1, emb.e2};
          if (distinct.size() != 7) continue;
          emb.a = a;
          emb.b = b;
          emb.c = c;
          emb.d = d;
          return emb;
        }
      }
    }
  }
  throw InfeasibleError("no butterfly embedding from " + std::to_string(source) + " to {" + std::to_string(t1) +
                        ", " + std::to_string(t2) + "}");
}

ConfigDocument compile_butterfly(const Topology& topo, const StreamSpec& spec) {
  check_hosts(topo, spec);
  if (spec.receivers.size() != 2) throw ConfigError("butterfly multicast needs exactly two receivers");
  if (spec.gen_size != 2) throw ConfigError("butterfly multicast codes batches of k=2");
  check_admission(topo, spec);
  const NodeId t1 = spec.receivers[0];
  const NodeId t2 = spec.receivers[1];
  const ButterflyEmbedding e = find_butterfly(topo, spec.source, t1, t2);

  ConfigDocument doc;
  doc.streams.push_back(spec);
  add_sender(doc, topo, spec, Primitive::Split);

  auto out = [&](NodeId u, NodeId v, Primitive next) { return OutputSpec{direct_link(topo, u, v).src_port, next}; };
  auto in_port = [&](NodeId u, NodeId v) { return direct_link(topo, u, v).dst_port; };

  add_bank(doc, e.s, spec);
  add_action(doc, e.s, TableKey{spec.id, Primitive::Split, std::nullopt},
             PrimitiveConfig{SplitParams{kStreamBank,
                                         {out(e.s, e.a, Primitive::Forward), out(e.s, e.b, Primitive::Forward)}}});

  add_action(doc, e.a, TableKey{spec.id, Primitive::Forward, in_port(e.s, e.a)},
             PrimitiveConfig{ForwardParams{{out(e.a, e.c, Primitive::Gather), out(e.a, e.e1, Primitive::Gather)}}});
  add_action(doc, e.b, TableKey{spec.id, Primitive::Forward, in_port(e.s, e.b)},
             PrimitiveConfig{ForwardParams{{out(e.b, e.c, Primitive::Gather), out(e.b, e.e2, Primitive::Gather)}}});

  add_bank(doc, e.c, spec);
  const TableKey relay{spec.id, Primitive::Gather, std::nullopt};
  add_action(doc, e.c, relay, PrimitiveConfig{GatherParams{kStreamBank}});
  add_action(doc, e.c, relay,
             PrimitiveConfig{CodeParams{kStreamBank, {CodeRowSpec{CoeffVector(2, Gf256{1}),
                                                                  out(e.c, e.d, Primitive::Forward)}}}});

  add_action(doc, e.d, TableKey{spec.id, Primitive::Forward, in_port(e.c, e.d)},
             PrimitiveConfig{ForwardParams{{out(e.d, e.e1, Primitive::Gather), out(e.d, e.e2, Primitive::Gather)}}});

  for (auto [sw, host] : {std::pair{e.e1, t1}, std::pair{e.e2, t2}}) {
    add_bank(doc, sw, spec);
    const TableKey key{spec.id, Primitive::Gather, std::nullopt};
    add_action(doc, sw, key, PrimitiveConfig{GatherParams{kStreamBank}});
    add_action(doc, sw, key, PrimitiveConfig{DecodeParams{kStreamBank, direct_link(topo, sw, host).src_port}});
  }
  return doc;
}

ConfigDocument compile_forwarding_baseline(const Topology& topo, const StreamSpec& spec) {
  check_hosts(topo, spec);
  check_admission(topo, spec);

  // BFS depth from the source; hosts other than the source carry no transit.
  std::map<NodeId, std::size_t> depth{{spec.source, 0}};
  std::deque<NodeId> queue{spec.source};
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (u != spec.source && topo.kind(u) == NodeKind::Host) continue;
    for (LinkIndex li : topo.out_links(u)) {
      const NodeId v = topo.link(li).dst;
      if (depth.emplace(v, depth[u] + 1).second) queue.push_back(v);
    }
  }

  // Parent link of v: from the lowest-id node one level up, then lowest port.
  auto parent_link = [&](NodeId v) {
    std::optional<LinkIndex> best;
    for (LinkIndex li : topo.in_links(v)) {
      const Link& l = topo.link(li);
      auto it = depth.find(l.src);
      if (it == depth.end() || it->second + 1 != depth.at(v)) continue;
      if (l.src != spec.source && topo.kind(l.src) == NodeKind::Host) continue;
      if (!best || std::pair{l.src, l.src_port} < std::pair{topo.link(*best).src, topo.link(*best).src_port})
        best = li;
    }
    return *best;
  };

  std::set<LinkIndex> tree;
  for (NodeId r : spec.receivers) {
    if (!depth.count(r)) throw InfeasibleError("receiver " + std::to_string(r) + " unreachable from source");
    for (NodeId v = r; v != spec.source;) {
      const LinkIndex li = parent_link(v);
      tree.insert(li);
      v = topo.link(li).src;
    }
  }

  ConfigDocument doc;
  doc.streams.push_back(spec);
  add_sender(doc, topo, spec, Primitive::Forward);

  const std::set<NodeId> receivers(spec.receivers.begin(), spec.receivers.end());
  for (LinkIndex in_li : tree) {
    const Link& in = topo.link(in_li);
    if (topo.kind(in.dst) != NodeKind::Switch) continue;
    ForwardParams fp;
    for (LinkIndex out_li : topo.out_links(in.dst)) {
      if (!tree.count(out_li)) continue;
      const Link& out = topo.link(out_li);
      fp.outputs.push_back(OutputSpec{out.src_port, receivers.count(out.dst) ? Primitive::Deliver : Primitive::Forward});
    }
    add_action(doc, in.dst, TableKey{spec.id, Primitive::Forward, in.dst_port}, PrimitiveConfig{std::move(fp)});
  }
  return doc;
}

ConfigDocument compile(const Topology& topo, const StreamSpec& spec) {
  switch (spec.function) {
    case FunctionKind::Diversity: return compile_diversity(topo, spec);
    case FunctionKind::Butterfly: return compile_butterfly(topo, spec);
    case FunctionKind::Forwarding: return compile_forwarding_baseline(topo, spec);
  }
  throw ConfigError("unknown function kind");
}

}  // namespace ncdp
