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


#include "ncdp/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

struct Residual {
  struct Edge {
    NodeId to;
    std::uint64_t cap;
    std::size_t rev;
    std::optional<LinkIndex> link;  // forward edges only
  };
  std::map<NodeId, std::vector<Edge>> adj;

  Residual(const Topology& topo, NodeId s, NodeId t, bool unit) {
    for (const auto& [id, kind] : topo.nodes()) adj[id];
    for (const auto& [id, kind] : topo.nodes()) {
      for (LinkIndex li : topo.out_links(id)) {
        const Link& l = topo.link(li);
        // Hosts only originate or terminate flow.
        if (l.src != s && topo.kind(l.src) == NodeKind::Host) continue;
        if (l.dst != t && topo.kind(l.dst) == NodeKind::Host) continue;
        auto& fwd = adj[l.src];
        auto& back = adj[l.dst];
        fwd.push_back(Edge{l.dst, unit ? 1 : l.bandwidth_bps, back.size(), li});
        back.push_back(Edge{l.src, 0, fwd.size() - 1, std::nullopt});
      }
    }
  }

  // One BFS augmentation; returns the bottleneck pushed (0 when t is unreachable).
  std::uint64_t augment(NodeId s, NodeId t, std::uint64_t limit) {
    std::map<NodeId, std::pair<NodeId, std::size_t>> parent;
    std::deque<NodeId> queue{s};
    parent[s] = {s, 0};
    while (!queue.empty() && !parent.count(t)) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < adj[u].size(); ++i) {
        const Edge& e = adj[u][i];
        if (e.cap == 0 || parent.count(e.to)) continue;
        parent[e.to] = {u, i};
        queue.push_back(e.to);
      }
    }
    if (!parent.count(t)) return 0;
    std::uint64_t bottleneck = limit;
    for (NodeId v = t; v != s; v = parent[v].first)
      bottleneck = std::min(bottleneck, adj[parent[v].first][parent[v].second].cap);
    for (NodeId v = t; v != s; v = parent[v].first) {
      Edge& e = adj[parent[v].first][parent[v].second];
      e.cap -= bottleneck;
      adj[e.to][e.rev].cap += bottleneck;
    }
    return bottleneck;
  }

  std::set<NodeId> reachable(NodeId s) {
    std::set<NodeId> seen{s};
    std::deque<NodeId> queue{s};
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (const Edge& e : adj[u])
        if (e.cap > 0 && seen.insert(e.to).second) queue.push_back(e.to);
    }
    return seen;
  }
};

void check_endpoints(const Topology& topo, NodeId s, NodeId t) {
  if (!topo.has_node(s)) throw InfeasibleError("unknown node " + std::to_string(s));
  if (!topo.has_node(t)) throw InfeasibleError("unknown node " + std::to_string(t));
  if (s == t) throw InfeasibleError("source and sink are the same node");
}

}  // namespace

std::uint64_t max_flow(const Topology& topo, NodeId s, NodeId t) {
  check_endpoints(topo, s, t);
  Residual r(topo, s, t, false);
  std::uint64_t total = 0;
  while (auto pushed = r.augment(s, t, std::numeric_limits<std::uint64_t>::max())) total += pushed;
  return total;
}

std::uint64_t min_multicast_rate(const Topology& topo, NodeId s, std::span<const NodeId> receivers) {
  if (receivers.empty()) throw InfeasibleError("multicast needs at least one receiver");
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (NodeId t : std::set<NodeId>(receivers.begin(), receivers.end())) best = std::min(best, max_flow(topo, s, t));
  return best;
}

std::vector<Path> edge_disjoint_paths(const Topology& topo, NodeId s, NodeId t, std::size_t n) {
  check_endpoints(topo, s, t);
  Residual r(topo, s, t, true);
  std::size_t flow = 0;
  while (flow < n && r.augment(s, t, 1) > 0) ++flow;
  if (flow < n) {
    const auto side = r.reachable(s);
    std::string cut;
    for (const auto& l : topo.links())
      if (side.count(l.src) && !side.count(l.dst)) cut += (cut.empty() ? "" : ",") + link_name(l);
    throw InfeasibleError("only " + std::to_string(flow) + " edge-disjoint paths from " + std::to_string(s) +
                          " to " + std::to_string(t) + " (need " + std::to_string(n) + "); bottleneck cut {" +
                          cut + "}");
  }

  // Links carrying one unit of flow, grouped by source node in (dst, port) order.
  std::map<NodeId, std::vector<LinkIndex>> used;
  for (const auto& [u, edges] : r.adj)
    for (const auto& e : edges)
      if (e.link && e.cap == 0) used[u].push_back(*e.link);
  for (auto& [u, v] : used)
    std::sort(v.begin(), v.end(), [&](LinkIndex a, LinkIndex b) {
      return std::tie(topo.link(a).dst, topo.link(a).src_port) < std::tie(topo.link(b).dst, topo.link(b).src_port);
    });

  std::vector<Path> paths;
  for (std::size_t i = 0; i < n; ++i) {
    Path path;
    std::vector<NodeId> visited{s};
    NodeId u = s;
    while (u != t) {
      auto& out = used[u];
      const LinkIndex li = out.front();
      out.erase(out.begin());
      const NodeId v = topo.link(li).dst;
      if (auto it = std::find(visited.begin(), visited.end(), v); it != visited.end()) {
        // Drop the cycle that returned to v.
        const auto keep = static_cast<std::size_t>(it - visited.begin());
        path.resize(keep);
        visited.resize(keep + 1);
      } else {
        path.push_back(li);
        visited.push_back(v);
      }
      u = v;
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

std::vector<NodeId> path_nodes(const Topology& topo, const Path& path) {
  std::vector<NodeId> nodes;
  if (path.empty()) return nodes;
  nodes.push_back(topo.link(path.front()).src);
  for (LinkIndex li : path) nodes.push_back(topo.link(li).dst);
  return nodes;
}

}  // namespace ncdp
