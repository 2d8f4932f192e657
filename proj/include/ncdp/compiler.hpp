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

// Compiles a coding function for one stream into switch table entries and
// host roles. Every choice is deterministic: ties go to the lowest node id,
// then the lowest port.

#include "ncdp/config.hpp"
#include "ncdp/flow.hpp"
#include "ncdp/topology.hpp"

namespace ncdp {

/// Nodes of a butterfly embedding: source switch S, branch heads A and B,
/// relay head C, relay tail D, and the receivers' egress switches E1, E2.
struct ButterflyEmbedding {
  NodeId s = 0, a = 0, b = 0, c = 0, d = 0, e1 = 0, e2 = 0;
};

/// Throws InfeasibleError when spec.rate_bps exceeds the minimum max-flow
/// from the source to its receivers. A rate of 0 is always admitted.
void check_admission(const Topology& topo, const StreamSpec& spec);

ConfigDocument compile_diversity(const Topology& topo, const StreamSpec& spec);
ButterflyEmbedding find_butterfly(const Topology& topo, NodeId source, NodeId t1, NodeId t2);
ConfigDocument compile_butterfly(const Topology& topo, const StreamSpec& spec);
ConfigDocument compile_forwarding_baseline(const Topology& topo, const StreamSpec& spec);

/// Dispatches on spec.function.
ConfigDocument compile(const Topology& topo, const StreamSpec& spec);

}  // namespace ncdp
