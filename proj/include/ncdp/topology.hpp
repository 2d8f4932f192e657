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

// Directed multigraph of hosts and switches. Text form, one item per line:
//
//   node <id> host|switch
//   link <src>:<port> <dst>:<port> <bandwidth_bps> <delay_s>
//
// '#' starts a comment. Each link line is one direction.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncdp/packet.hpp"
#include "ncdp/pipeline.hpp"

namespace ncdp {

enum class NodeKind { Host, Switch };

struct Link {
  NodeId src = 0;
  PortId src_port = 0;
  NodeId dst = 0;
  PortId dst_port = 0;
  std::uint64_t bandwidth_bps = 0;
  Nanos delay_ns = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

using LinkIndex = std::size_t;

class Topology {
 public:
  void add_node(NodeId id, NodeKind kind);
  LinkIndex add_link(const Link& link);

  bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
  NodeKind kind(NodeId id) const;
  const std::map<NodeId, NodeKind>& nodes() const { return nodes_; }
  std::vector<NodeId> hosts() const;
  std::vector<NodeId> switches() const;

  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkIndex i) const { return links_.at(i); }
  /// Outgoing links of a node ordered by (dst id, src port).
  std::vector<LinkIndex> out_links(NodeId id) const;
  std::vector<LinkIndex> in_links(NodeId id) const;
  std::optional<LinkIndex> link_from_port(NodeId node, PortId port) const;
  std::optional<LinkIndex> find_link(NodeId src, NodeId dst) const;

  /// The switch a host is attached to: the far end of its lowest-port outgoing
  /// link, or of its lowest-port incoming link when it has no outgoing ones.
  NodeId attachment_switch(NodeId host) const;

 private:
  std::map<NodeId, NodeKind> nodes_;
  std::vector<Link> links_;
};

Topology parse_topology(std::istream& in);
Topology load_topology(const std::string& path);
std::string format_topology(const Topology& topo);

/// "src:port", the unique identifier of a directed link.
std::string link_name(const Link& link);
/// Resolves "src:port" to a link; throws SetupError when it names no link.
LinkIndex resolve_link(const Topology& topo, const std::string& name);

}  // namespace ncdp
