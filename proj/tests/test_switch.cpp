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

#include "ncdp/error.hpp"
#include "ncdp/switch.hpp"

using namespace ncdp;

namespace {

Packet pkt(StreamId stream, Primitive next, Bytes payload = {1, 2, 3}) {
  Packet p;
  p.header.stream_id = stream;
  p.header.next_primitive = next;
  p.payload = std::move(payload);
  return p;
}

std::uint64_t sum_dispositions(const DataplaneCounters& c) {
  return c.forwarded + c.stored + c.consumed + c.dropped_unmatched + c.loop_guarded;
}

}  // namespace

TEST_CASE("unmatched packets drop with a counter") {
  Switch sw(SwitchConfig{});
  auto r = sw.ingress(pkt(42, Primitive::Forward), 1, 0);
  CHECK(r.emissions.empty());
  CHECK(sw.counters().dropped_unmatched == 1);
  CHECK(sw.counters().ingress_passes == 1);
}

TEST_CASE("port-qualified entries win over wildcards") {
  SwitchConfig c;
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, std::nullopt}, {PrimitiveConfig{ForwardParams{{OutputSpec{7, Primitive::Forward}}}}}});
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, 3}, {PrimitiveConfig{ForwardParams{{OutputSpec{8, Primitive::Forward}}}}}});
  Switch sw(c);
  CHECK(sw.ingress(pkt(1, Primitive::Forward), 3, 0).emissions.at(0).port == 8);
  CHECK(sw.ingress(pkt(1, Primitive::Forward), 4, 0).emissions.at(0).port == 7);
  CHECK(sw.ingress(pkt(1, Primitive::Gather), 3, 0).emissions.empty());
}

TEST_CASE("duplicate keys and banks are rejected") {
  SwitchConfig c;
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, std::nullopt}, {}});
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, std::nullopt}, {}});
  CHECK_THROWS_AS(Switch{c}, ConfigError);
  SwitchConfig d;
  d.banks = {BankSpec{0, 1, 2, 4}, BankSpec{0, 1, 2, 4}};
  CHECK_THROWS_AS(Switch{d}, ConfigError);
}

TEST_CASE("latency follows the cost model and telemetry is stamped") {
  SwitchConfig c;
  c.id = 12;
  c.cost = CostModel{500, 2000, 3000};
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, std::nullopt},
                                 {PrimitiveConfig{ForwardParams{{OutputSpec{2, Primitive::Forward}, OutputSpec{3, Primitive::Forward}}}}}});
  Switch sw(c);
  auto r = sw.ingress(pkt(1, Primitive::Forward, Bytes(100, 0)), 1, 10'000);
  CHECK(r.cost.table_lookups == 1);
  CHECK(r.cost.clones == 1);
  CHECK(r.cost.bytes_touched == 100);
  CHECK(r.latency == 500 * 1 + 2000 * 100 / 1000);
  REQUIRE(r.emissions.size() == 2);
  for (const auto& e : r.emissions) {
    REQUIRE(e.packet.header.telemetry.size() == 1);
    const auto& t = e.packet.header.telemetry.back();
    CHECK(t.switch_id == 12);
    CHECK(t.ingress_ts == 10'000);
    CHECK(t.egress_ts >= t.ingress_ts);
    CHECK(e.ready >= 10'000);
    CHECK(e.ready <= 10'000 + r.latency);
  }
  CHECK(sw.traversals().size() == 1);
  CHECK(sw.traversals().back().latency == r.latency);
}

TEST_CASE("a recirculation cycle halts at depth 8 with one loop-guard hit") {
  SwitchConfig c;
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, std::nullopt},
                                 {PrimitiveConfig{ForwardParams{{OutputSpec{kRecirculatePort, Primitive::Forward}}}}}});
  Switch sw(c);
  auto r = sw.ingress(pkt(1, Primitive::Forward), 1, 0);
  CHECK(r.emissions.empty());
  CHECK(r.cost.recirculations == 8);
  CHECK(sw.counters().loop_guarded == 1);
  CHECK(sw.counters().ingress_passes == 9);
  CHECK(sum_dispositions(sw.counters()) == sw.counters().ingress_passes);
}

TEST_CASE("a lower recirculation bound is honoured") {
  SwitchConfig c;
  c.max_recirc = 2;
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, std::nullopt},
                                 {PrimitiveConfig{ForwardParams{{OutputSpec{kRecirculatePort, Primitive::Forward}}}}}});
  Switch sw(c);
  CHECK(sw.ingress(pkt(1, Primitive::Forward), 1, 0).cost.recirculations == 2);
  CHECK(sw.counters().loop_guarded == 1);
}

TEST_CASE("dispositions always sum to ingress passes") {
  SwitchConfig c;
  c.banks.push_back(BankSpec{0, 1, 2, 2});
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Gather, std::nullopt},
                                 {PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 9}}}});
  c.entries.push_back(TableEntry{TableKey{1, Primitive::Forward, std::nullopt},
                                 {PrimitiveConfig{ForwardParams{{OutputSpec{2, Primitive::Forward}}}}}});
  Switch sw(c);
  for (std::uint32_t i = 0; i < 60; ++i) {
    Packet p = pkt(static_cast<StreamId>(i % 7 == 0 ? 5 : 1), i % 3 == 0 ? Primitive::Forward : Primitive::Gather);
    p.header.gen_size = 2;
    p.header.batch_number = i / 3;
    p.header.coeffs = (i % 4 == 0) ? CoeffVector{Gf256(1), Gf256(1)} : unit_vector(2, i % 2);
    p.payload = Symbol{0x00, 0x02, static_cast<std::uint8_t>(i)};
    sw.ingress(p, 1, i);
    REQUIRE(sum_dispositions(sw.counters()) == sw.counters().ingress_passes);
  }
}

TEST_CASE("identical inputs give identical outputs") {
  auto drive = [] {
    SwitchConfig c;
    c.id = 4;
    c.banks.push_back(BankSpec{0, 1, 2, 8});
    c.entries.push_back(TableEntry{TableKey{1, Primitive::Gather, std::nullopt},
                                   {PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 9}}}});
    Switch sw(c);
    std::vector<Bytes> out;
    for (std::uint32_t i = 0; i < 20; ++i) {
      Packet p = pkt(1, Primitive::Gather);
      p.header.gen_size = 2;
      p.header.batch_number = i / 2;
      p.header.coeffs = (i % 2) ? CoeffVector{Gf256(1), Gf256(1)} : unit_vector(2, 0);
      p.payload = Symbol{0x00, static_cast<std::uint8_t>(i % 2 ? 0x00 : 0x02), static_cast<std::uint8_t>(i)};
      for (auto& e : sw.ingress(p, 1, i * 10).emissions) {
        Bytes img = serialize(e.packet.header, e.packet.payload);
        img.push_back(static_cast<std::uint8_t>(e.port));
        out.push_back(img);
      }
    }
    return out;
  };
  CHECK(drive() == drive());
}
