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


#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "ncdp/error.hpp"
#include "ncdp/experiments.hpp"
#include "ncdp/flow.hpp"

using namespace ncdp;

namespace {

Topology parse(const std::string& text) {
  std::istringstream in(text);
  return parse_topology(in);
}

// Minimum over all s-side sets of the capacity leaving the set. Hosts other
// than s and t never carry transit, so their incident links are dropped.
std::uint64_t brute_min_cut(const Topology& topo, NodeId s, NodeId t) {
  std::vector<NodeId> ids;
  for (const auto& [id, k] : topo.nodes()) ids.push_back(id);
  const std::size_t n = ids.size();
  std::uint64_t best = ~std::uint64_t{0};
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::set<NodeId> side;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) side.insert(ids[i]);
    if (!side.count(s) || side.count(t)) continue;
    std::uint64_t cut = 0;
    for (const auto& l : topo.links()) {
      auto transit_host = [&](NodeId v) { return v != s && v != t && topo.kind(v) == NodeKind::Host; };
      if (transit_host(l.src) || transit_host(l.dst)) continue;
      if (side.count(l.src) && !side.count(l.dst)) cut += l.bandwidth_bps;
    }
    best = std::min(best, cut);
  }
  return best;
}

Topology random_graph(std::mt19937& rng, std::size_t n, bool unit) {
  std::uniform_int_distribution<int> cap(1, 5), edges(0, 3 * static_cast<int>(n));
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  Topology topo;
  for (std::size_t i = 0; i < n; ++i) topo.add_node(static_cast<NodeId>(i + 1), NodeKind::Switch);
  std::vector<PortId> out_port(n + 1, 1), in_port(n + 1, 1);
  const int m = edges(rng);
  for (int e = 0; e < m; ++e) {
    const auto a = static_cast<NodeId>(node(rng) + 1), b = static_cast<NodeId>(node(rng) + 1);
    if (a == b) continue;
    topo.add_link(Link{a, out_port[a]++, b, in_port[b]++, static_cast<std::uint64_t>(unit ? 1 : cap(rng)), 0});
  }
  return topo;
}

}  // namespace

TEST_CASE("topology text round trip and validation") {
  const Topology topo = load_topology(fixture_path("butterfly.topo"));
  CHECK(topo.hosts() == std::vector<NodeId>{101, 102, 103});
  CHECK(topo.switches().size() == 7);
  CHECK(topo.links().size() == 12);
  const std::string text = format_topology(topo);
  const Topology again = parse(text);
  CHECK(format_topology(again) == text);
  CHECK(again.links() == topo.links());

  CHECK_THROWS_AS(parse("node 1 switch\nnode 1 host\n"), ConfigError);
  CHECK_THROWS_AS(parse("node 1 router\n"), ConfigError);
  CHECK_THROWS_AS(parse("node 1 switch\nlink 1:1 2:1 10 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("node 1 switch\nnode 2 switch\nlink 1:1 2:1 0 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("node 1 switch\nnode 2 switch\nlink 1:1 2:1 10 -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("node 1 switch\nnode 2 switch\nnode 3 switch\nlink 1:1 2:1 10 0\nlink 1:1 3:1 10 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("node 1 switch\nlink 1:1 1:2 10 0\n"), ConfigError);
  CHECK_THROWS_AS(load_topology("/nonexistent/file.topo"), IoError);
}

TEST_CASE("link lookup helpers") {
  const Topology topo = load_topology(fixture_path("diversity.topo"));
  CHECK(topo.attachment_switch(101) == 1);
  CHECK(topo.attachment_switch(102) == 5);
  const LinkIndex li = resolve_link(topo, "1:4");
  CHECK(topo.link(li).dst == 4);
  CHECK(link_name(topo.link(li)) == "1:4");
  CHECK_THROWS_AS(resolve_link(topo, "1:9"), SetupError);
  CHECK_THROWS_AS(resolve_link(topo, "garbage"), SetupError);
  CHECK(topo.find_link(2, 5).has_value());
  CHECK_FALSE(topo.find_link(5, 2).has_value());
}

TEST_CASE("max-flow examples") {
  const Topology bf = load_topology(fixture_path("butterfly.topo"));
  CHECK(max_flow(bf, 101, 102) == 20000);
  CHECK(max_flow(bf, 101, 103) == 20000);
  CHECK(max_flow(bf, 1, 6) == 20000);
  const std::vector<NodeId> both{102, 103};
  CHECK(min_multicast_rate(bf, 101, both) == 20000);
  const std::vector<NodeId> twice{102, 102};
  CHECK(min_multicast_rate(bf, 101, twice) == max_flow(bf, 101, 102));
  CHECK(max_flow(bf, 102, 101) == 0);

  const Topology single = parse("node 1 switch\nnode 2 switch\nlink 1:1 2:1 777 0\n");
  CHECK(max_flow(single, 1, 2) == 777);
  CHECK(max_flow(single, 2, 1) == 0);
}

TEST_CASE("hosts carry no transit") {
  const Topology topo = parse(
      "node 1 switch\nnode 2 switch\nnode 9 host\n"
      "link 1:1 9:1 100 0\nlink 9:1 2:1 100 0\nlink 1:2 2:2 5 0\n");
  CHECK(max_flow(topo, 1, 2) == 5);
}

TEST_CASE("max-flow equals brute-force min cut on 100 random graphs") {
  std::mt19937 rng(8);
  std::uniform_int_distribution<std::size_t> size(2, 8);
  for (int g = 0; g < 100; ++g) {
    const std::size_t n = size(rng);
    const Topology topo = random_graph(rng, n, false);
    for (NodeId s = 1; s <= n; ++s)
      for (NodeId t = 1; t <= n; ++t)
        if (s != t) REQUIRE(max_flow(topo, s, t) == brute_min_cut(topo, s, t));
  }
}

TEST_CASE("edge-disjoint paths on the diversity fixture") {
  const Topology topo = load_topology(fixture_path("diversity.topo"));
  const auto paths = edge_disjoint_paths(topo, 1, 5, 3);
  REQUIRE(paths.size() == 3);
  CHECK(path_nodes(topo, paths[0]) == std::vector<NodeId>{1, 2, 5});
  CHECK(path_nodes(topo, paths[1]) == std::vector<NodeId>{1, 3, 5});
  CHECK(path_nodes(topo, paths[2]) == std::vector<NodeId>{1, 4, 5});
  CHECK(edge_disjoint_paths(topo, 1, 5, 1).size() == 1);

  try {
    edge_disjoint_paths(topo, 1, 5, 4);
    FAIL("expected infeasibility");
  } catch (const InfeasibleError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("only 3") != std::string::npos);
    CHECK(msg.find("cut") != std::string::npos);
  }
}

TEST_CASE("disjoint paths are valid, pairwise disjoint and as many as the unit min cut") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<std::size_t> size(2, 8);
  for (int g = 0; g < 100; ++g) {
    const std::size_t n = size(rng);
    const Topology topo = random_graph(rng, n, true);
    const NodeId s = 1, t = static_cast<NodeId>(n);
    const std::uint64_t want = brute_min_cut(topo, s, t);
    if (want == 0) {
      CHECK_THROWS_AS(edge_disjoint_paths(topo, s, t, 1), InfeasibleError);
      continue;
    }
    const auto paths = edge_disjoint_paths(topo, s, t, want);
    REQUIRE(paths.size() == want);
    std::set<LinkIndex> used;
    for (const auto& p : paths) {
      const auto nodes = path_nodes(topo, p);
      REQUIRE(nodes.front() == s);
      REQUIRE(nodes.back() == t);
      for (std::size_t i = 1; i < p.size(); ++i) REQUIRE(topo.link(p[i - 1]).dst == topo.link(p[i]).src);
      for (LinkIndex li : p) REQUIRE(used.insert(li).second);
    }
    CHECK_THROWS_AS(edge_disjoint_paths(topo, s, t, want + 1), InfeasibleError);
  }
}
