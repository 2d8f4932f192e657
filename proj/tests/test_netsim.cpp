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

#include <sstream>

#include "ncdp/compiler.hpp"
#include "ncdp/error.hpp"
#include "ncdp/experiments.hpp"
#include "ncdp/netsim.hpp"

using namespace ncdp;

namespace {

constexpr Nanos kDelay = 2'000'000;

// 101 -> S1 -> S2 -> 102
Topology line_topology() {
  Topology t;
  t.add_node(101, NodeKind::Host);
  t.add_node(102, NodeKind::Host);
  t.add_node(1, NodeKind::Switch);
  t.add_node(2, NodeKind::Switch);
  t.add_link(Link{101, 1, 1, 1, 100'000'000, kDelay});
  t.add_link(Link{1, 2, 2, 1, 100'000'000, kDelay});
  t.add_link(Link{2, 2, 102, 1, 100'000'000, kDelay});
  return t;
}

Scenario line_scenario(std::size_t packets) {
  Scenario s;
  s.topology = line_topology();
  s.config = compile(s.topology, fixture_stream(s.topology, FunctionKind::Forwarding, 1));
  s.senders.push_back(SenderSpec{101, 1, packets, 512, SendLaw::BackToBack, 0});
  s.receivers.push_back(ReceiverSpec{102, 1});
  return s;
}

std::uint64_t counter(const EventTrace& t, NodeId sw, const std::string& name) {
  for (const auto& [n, v] : t.switches.at(sw).counters)
    if (n == name) return v;
  FAIL("no counter " << name);
  return 0;
}

void check_closed(const EventTrace& t) {
  for (const auto& [id, sw] : t.switches) {
    CHECK(counter(t, id, "dropped_unmatched") == 0);
    CHECK(counter(t, id, "loop_guarded") == 0);
  }
  for (const auto& [stream, acct] : t.accounts) CHECK(acct.balanced());
}

}  // namespace

TEST_CASE("forward-only line delivers every packet in order") {
  const EventTrace t = run(line_scenario(10));
  const auto& log = t.deliveries.at(102);
  REQUIRE(log.size() == 10);
  const auto& sends = t.sends.at(101);
  REQUIRE(sends.size() == 10);
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(log[i].payload_len == 512);
    CHECK(log[i].digest == fnv1a(payload_bytes(1, 1, i, 512)));
    // Three hops of propagation at least.
    CHECK(log[i].ts >= sends[i].ts + 3 * kDelay);
    if (i) CHECK(log[i].ts > log[i - 1].ts);
  }
  check_closed(t);
  const PacketAccount& a = t.accounts.at(1);
  CHECK(a.host_sent == 10);
  CHECK(a.host_arrivals == 10);
  CHECK(a.lost_to_failure == 0);
  CHECK(a.in_flight_at_end == 0);
}

TEST_CASE("payload bytes and digest are deterministic") {
  CHECK(payload_bytes(3, 1, 5, 64) == payload_bytes(3, 1, 5, 64));
  CHECK(payload_bytes(3, 1, 5, 64) != payload_bytes(3, 1, 6, 64));
  CHECK(payload_bytes(3, 1, 5, 64) != payload_bytes(4, 1, 5, 64));
  // Reference FNV-1a 64 values.
  const Bytes empty;
  CHECK(fnv1a(empty) == 0xcbf29ce484222325ull);
  const Bytes a{'a'};
  CHECK(fnv1a(a) == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("same seed gives identical traces, different seed changes the exponential schedule") {
  const Scenario s = load_scenario(fixture_path("butterfly.scenario"));
  const EventTrace a = run(s);
  const EventTrace b = run(s);
  for (NodeId r : {102u, 103u}) CHECK(deliveries_csv(a.deliveries.at(r)) == deliveries_csv(b.deliveries.at(r)));
  for (const auto& [id, sw] : a.switches) CHECK(counters_csv(sw) == counters_csv(b.switches.at(id)));

  Scenario other = s;
  other.seed += 1;
  const EventTrace c = run(other);
  CHECK(deliveries_csv(a.deliveries.at(102)) != deliveries_csv(c.deliveries.at(102)));
  check_closed(a);
}

TEST_CASE("failure before the first packet") {
  Scenario s = line_scenario(5);
  s.link_events.push_back(LinkEvent{0, resolve_link(s.topology, "1:2"), true});
  const EventTrace t = run(s);
  CHECK((t.deliveries.count(102) == 0 || t.deliveries.at(102).empty()));
  CHECK(t.accounts.at(1).lost_to_failure == 5);
  CHECK(t.accounts.at(1).balanced());
}

TEST_CASE("a packet already on a link is lost when the link fails, restored links carry traffic") {
  Scenario s = line_scenario(3);
  const LinkIndex l = resolve_link(s.topology, "1:2");
  // The first packet is on S1->S2 between roughly 2 ms and 4 ms.
  s.link_events.push_back(LinkEvent{3'000'000, l, true});
  s.link_events.push_back(LinkEvent{3'000'001, l, false});
  const EventTrace t = run(s);
  const PacketAccount& a = t.accounts.at(1);
  CHECK(a.lost_to_failure >= 1);
  CHECK(a.balanced());
  CHECK(t.deliveries.at(102).size() + a.lost_to_failure == 3);
}

TEST_CASE("diversity survives one cut path and loses with two") {
  const Scenario base = load_scenario(fixture_path("diversity.scenario"));
  const EventTrace one = run(base);
  const auto& log = one.deliveries.at(102);
  REQUIRE(log.size() == 200);
  for (std::size_t i = 0; i < log.size(); ++i) CHECK(log[i].digest == fnv1a(payload_bytes(7, 1, i, 1024)));
  check_closed(one);

  Scenario two = base;
  two.link_events.push_back(LinkEvent{0, resolve_link(two.topology, "1:2"), true});
  two.link_events.push_back(LinkEvent{0, resolve_link(two.topology, "1:3"), true});
  const EventTrace lossy = run(two);
  const std::size_t got = lossy.deliveries.count(102) ? lossy.deliveries.at(102).size() : 0;
  CHECK(got < 200);
  for (const auto& [stream, acct] : lossy.accounts) CHECK(acct.balanced());
}

TEST_CASE("nothing crosses a failed link") {
  Scenario s = load_scenario(fixture_path("diversity.scenario"));
  s.link_events.clear();
  s.link_events.push_back(LinkEvent{0, resolve_link(s.topology, "1:3"), true});
  const EventTrace t = run(s);
  CHECK(counter(t, 3, "ingress_passes") == 0);
  CHECK(t.deliveries.at(102).size() == 200);
}

TEST_CASE("compiled fixtures never miss the table or hit the loop guard") {
  check_closed(run(load_scenario(fixture_path("diversity.scenario"))));
  check_closed(run(load_scenario(fixture_path("butterfly.scenario"))));
}

TEST_CASE("received rate arithmetic") {
  EventTrace t;
  auto& log = t.deliveries[7];
  for (std::size_t i = 0; i < 1000; ++i) {
    Delivery d;
    d.ts = static_cast<Nanos>(i) * 100'000'000'000 / 999;
    d.payload_len = 4096;
    log.push_back(d);
  }
  log.back().ts = 100'000'000'000;
  CHECK(received_rate(t, 7) == doctest::Approx(327'680.0));

  log.resize(1);
  CHECK_THROWS_AS(received_rate(t, 7), DomainError);
  CHECK_THROWS_AS(received_rate(t, 8), DomainError);
  CHECK_THROWS_AS(send_rate(t, 7), DomainError);
}

TEST_CASE("scenario parsing") {
  const std::string dir = fixture_path("");
  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, dir);
  };
  const Scenario ok = parse(
      "topology diversity.topo\nconfig diversity.config\nseed 3\n"
      "sender 101 stream=1 packets=4 payload=100 law=exponential rate=5000\n"
      "receiver 102 stream=1\nfail 0.5 1:2\nrestore 1.5 1:2\n");
  CHECK(ok.seed == 3);
  REQUIRE(ok.senders.size() == 1);
  CHECK(ok.senders[0].law == SendLaw::Exponential);
  CHECK(ok.senders[0].rate_bps == 5000);
  REQUIRE(ok.link_events.size() == 2);
  CHECK(ok.link_events[0].time == 500'000'000);
  CHECK_FALSE(ok.link_events[1].fail);

  const std::string head = "topology diversity.topo\nconfig diversity.config\n";
  CHECK_THROWS_AS(parse(head + "fail 1 9:9\n"), SetupError);
  CHECK_THROWS_AS(parse(head + "sender 101 stream=1 law=sometimes\n"), SetupError);
  CHECK_THROWS_AS(parse(head + "sender 101 stream=1 law=exponential\n"), SetupError);
  CHECK_THROWS_AS(parse(head + "warp 9\n"), SetupError);
  CHECK_THROWS_AS(parse("config diversity.config\n"), SetupError);
  CHECK_THROWS_AS(load_scenario("/nonexistent.scenario"), IoError);
}

TEST_CASE("csv layouts") {
  std::vector<Delivery> log{{1500, 1, 2, 0, 8, 0}};
  CHECK(deliveries_csv(log) == "timestamp_ns,stream_id,batch,index,payload_len\n1500,1,2,0,8\n");
  SwitchTrace sw;
  sw.counters = {{"forwarded", 4}};
  sw.lost_batches = 1;
  const std::string csv = counters_csv(sw);
  CHECK(csv.rfind("counter,value\nforwarded,4\n", 0) == 0);
  CHECK(csv.find("lost_batches,1") != std::string::npos);
}
