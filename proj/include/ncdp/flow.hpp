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

// Max-flow computations over a Topology. Link bandwidth is the capacity;
// hosts never carry transit traffic.

#include <cstdint>
#include <span>
#include <vector>

#include "ncdp/topology.hpp"

namespace ncdp {

using Path = std::vector<LinkIndex>;

/// Value of a maximum s->t flow in bits/s (augmenting shortest paths). 0 when disconnected.
std::uint64_t max_flow(const Topology& topo, NodeId s, NodeId t);

/// Minimum over receivers of max_flow(s, receiver): the achievable coded multicast rate.
std::uint64_t min_multicast_rate(const Topology& topo, NodeId s, std::span<const NodeId> receivers);

/// n pairwise edge-disjoint s->t paths from a unit-capacity flow decomposition.
/// Ties are broken by lowest node id, then lowest port. Throws InfeasibleError
/// naming the links of a minimum cut when fewer than n exist.
std::vector<Path> edge_disjoint_paths(const Topology& topo, NodeId s, NodeId t, std::size_t n);

/// Nodes visited by a path, starting at its source.
std::vector<NodeId> path_nodes(const Topology& topo, const Path& path);

}  // namespace ncdp
