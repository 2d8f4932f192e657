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


#include "ncdp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

std::pair<NodeId, PortId> parse_endpoint(const std::string& s, int line) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw ConfigError("topology line " + std::to_string(line) + ": endpoint '" + s + "' is not <id>:<port>");
  try {
    const unsigned long id = std::stoul(s.substr(0, colon));
    const unsigned long port = std::stoul(s.substr(colon + 1));
    if (port >= kRecirculatePort) throw std::out_of_range("port");
    return {static_cast<NodeId>(id), static_cast<PortId>(port)};
  } catch (const std::logic_error&) {
    throw ConfigError("topology line " + std::to_string(line) + ": bad endpoint '" + s + "'");
  }
}

}  // namespace

void Topology::add_node(NodeId id, NodeKind kind) {
  if (!nodes_.emplace(id, kind).second) throw ConfigError("duplicate node " + std::to_string(id));
}

LinkIndex Topology::add_link(const Link& l) {
  if (!has_node(l.src) || !has_node(l.dst))
    throw ConfigError("link " + link_name(l) + " references an unknown node");
  if (l.src == l.dst) throw ConfigError("link " + link_name(l) + " is a self loop");
  if (l.bandwidth_bps == 0) throw ConfigError("link " + link_name(l) + " has zero bandwidth");
  if (l.delay_ns < 0) throw ConfigError("link " + link_name(l) + " has negative delay");
  for (const auto& o : links_) {
    if (o.src == l.src && o.src_port == l.src_port)
      throw ConfigError("node " + std::to_string(l.src) + " already uses egress port " + std::to_string(l.src_port));
    if (o.dst == l.dst && o.dst_port == l.dst_port)
      throw ConfigError("node " + std::to_string(l.dst) + " already uses ingress port " + std::to_string(l.dst_port));
  }
  links_.push_back(l);
  return links_.size() - 1;
}

NodeKind Topology::kind(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw ConfigError("unknown node " + std::to_string(id));
  return it->second;
}

std::vector<NodeId> Topology::hosts() const {
  std::vector<NodeId> out;
  for (const auto& [id, k] : nodes_)
    if (k == NodeKind::Host) out.push_back(id);
  return out;
}

std::vector<NodeId> Topology::switches() const {
  std::vector<NodeId> out;
  for (const auto& [id, k] : nodes_)
    if (k == NodeKind::Switch) out.push_back(id);
  return out;
}

std::vector<LinkIndex> Topology::out_links(NodeId id) const {
  std::vector<LinkIndex> out;
  for (LinkIndex i = 0; i < links_.size(); ++i)
    if (links_[i].src == id) out.push_back(i);
  std::sort(out.begin(), out.end(), [&](LinkIndex a, LinkIndex b) {
    return std::tie(links_[a].dst, links_[a].src_port) < std::tie(links_[b].dst, links_[b].src_port);
  });
  return out;
}

std::vector<LinkIndex> Topology::in_links(NodeId id) const {
  std::vector<LinkIndex> out;
  for (LinkIndex i = 0; i < links_.size(); ++i)
    if (links_[i].dst == id) out.push_back(i);
  std::sort(out.begin(), out.end(), [&](LinkIndex a, LinkIndex b) {
    return std::tie(links_[a].src, links_[a].dst_port) < std::tie(links_[b].src, links_[b].dst_port);
  });
  return out;
}

std::optional<LinkIndex> Topology::link_from_port(NodeId node, PortId port) const {
  for (LinkIndex i = 0; i < links_.size(); ++i)
    if (links_[i].src == node && links_[i].src_port == port) return i;
  return std::nullopt;
}

std::optional<LinkIndex> Topology::find_link(NodeId src, NodeId dst) const {
  for (LinkIndex i : out_links(src))
    if (links_[i].dst == dst) return i;
  return std::nullopt;
}

NodeId Topology::attachment_switch(NodeId host) const {
  std::optional<LinkIndex> best;
  for (LinkIndex i = 0; i < links_.size(); ++i)
    if (links_[i].src == host && (!best || links_[i].src_port < links_[*best].src_port)) best = i;
  if (best) return links_[*best].dst;
  for (LinkIndex i = 0; i < links_.size(); ++i)
    if (links_[i].dst == host && (!best || links_[i].dst_port < links_[*best].dst_port)) best = i;
  if (!best) throw InfeasibleError("host " + std::to_string(host) + " has no links");
  return links_[*best].src;
}

Topology parse_topology(std::istream& in) {
  Topology topo;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string word;
    if (!(ls >> word)) continue;
    const std::string where = "topology line " + std::to_string(line_no) + ": ";
    if (word == "node") {
      unsigned long id;
      std::string kind;
      if (!(ls >> id >> kind)) throw ConfigError(where + "expected 'node <id> host|switch'");
      if (kind == "host") topo.add_node(static_cast<NodeId>(id), NodeKind::Host);
      else if (kind == "switch") topo.add_node(static_cast<NodeId>(id), NodeKind::Switch);
      else throw ConfigError(where + "unknown node kind '" + kind + "'");
    } else if (word == "link") {
      std::string a, b;
      double bw, delay_s;
      if (!(ls >> a >> b >> bw >> delay_s))
        throw ConfigError(where + "expected 'link <id:port> <id:port> <bandwidth_bps> <delay_s>'");
      if (bw <= 0 || delay_s < 0) throw ConfigError(where + "bandwidth must be > 0 and delay >= 0");
      const auto [src, sp] = parse_endpoint(a, line_no);
      const auto [dst, dp] = parse_endpoint(b, line_no);
      topo.add_link(Link{src, sp, dst, dp, static_cast<std::uint64_t>(std::llround(bw)),
                         static_cast<Nanos>(std::llround(delay_s * 1e9))});
    } else {
      throw ConfigError(where + "unknown directive '" + word + "'");
    }
    if (std::string extra; ls >> extra) throw ConfigError(where + "unexpected token '" + extra + "'");
  }
  return topo;
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topology file '" + path + "'");
  return parse_topology(in);
}

std::string format_topology(const Topology& topo) {
  std::ostringstream os;
  for (const auto& [id, k] : topo.nodes()) os << "node " << id << (k == NodeKind::Host ? " host" : " switch") << '\n';
  for (const auto& l : topo.links()) {
    std::ostringstream delay;
    delay << std::setprecision(12) << static_cast<double>(l.delay_ns) / 1e9;
    os << "link " << l.src << ':' << l.src_port << ' ' << l.dst << ':' << l.dst_port << ' ' << l.bandwidth_bps
       << ' ' << delay.str() << '\n';
  }
  return os.str();
}

std::string link_name(const Link& link) { return std::to_string(link.src) + ":" + std::to_string(link.src_port); }

LinkIndex resolve_link(const Topology& topo, const std::string& name) {
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    try {
      const auto node = static_cast<NodeId>(std::stoul(name.substr(0, colon)));
      const auto port = static_cast<PortId>(std::stoul(name.substr(colon + 1)));
      if (auto l = topo.link_from_port(node, port)) return *l;
    } catch (const std::logic_error&) {
    }
  }
  throw SetupError("unknown link '" + name + "'");
}

}  // namespace ncdp
