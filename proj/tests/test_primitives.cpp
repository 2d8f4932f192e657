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
#include "ncdp/linalg.hpp"
#include "ncdp/switch.hpp"

using namespace ncdp;

namespace {

constexpr StreamId kS = 1;

Packet host_packet(std::uint64_t seq, Bytes payload, Primitive next = Primitive::Split) {
  Packet p;
  p.header.stream_id = kS;
  p.header.next_primitive = next;
  p.header.gen_size = 2;
  p.header.coeffs = unit_vector(2, seq % 2);
  p.header.batch_number = static_cast<std::uint32_t>(seq / 2);
  p.header.orig_len = static_cast<std::uint16_t>(payload.size());
  p.payload = std::move(payload);
  p.meta.sequence = seq;
  return p;
}

Packet coded(std::uint32_t batch, CoeffVector c, Symbol s, Primitive next = Primitive::Gather) {
  Packet p;
  p.header.stream_id = kS;
  p.header.next_primitive = next;
  p.header.gen_size = static_cast<std::uint8_t>(c.size());
  p.header.coeffs = std::move(c);
  p.header.batch_number = batch;
  p.payload = std::move(s);
  return p;
}

SwitchConfig single(std::vector<PrimitiveConfig> actions, Primitive match, std::uint8_t k = 2) {
  SwitchConfig c;
  c.id = 9;
  c.banks.push_back(BankSpec{0, kS, k, kDefaultRingSize});
  c.entries.push_back(TableEntry{TableKey{kS, match, std::nullopt}, std::move(actions)});
  return c;
}

const CoeffVector kOnes{Gf256(1), Gf256(1)};

}  // namespace

TEST_CASE("symbol framing") {
  const Bytes payload{1, 2, 3};
  const Symbol s = frame_symbol(payload);
  CHECK(s == Symbol{0x00, 0x04, 1, 2, 3});
  CHECK(unframe_symbol(s) == payload);
  Symbol padded = s;
  padded.resize(12, 0);
  CHECK(unframe_symbol(padded) == payload);
  CHECK_FALSE(unframe_symbol(filler_symbol()).has_value());
  CHECK(unframe_symbol(frame_symbol(Bytes{})) == Bytes{});
  CHECK_THROWS_AS(unframe_symbol(Symbol{0x00, 0x09, 1}), IntegrityError);
  CHECK_THROWS_AS(unframe_symbol(Symbol{0x00}), IntegrityError);
}

TEST_CASE("split numbers batches from its own counter and follows the assignment") {
  Switch sw(single({PrimitiveConfig{SplitParams{0, {OutputSpec{2, Primitive::Forward}, OutputSpec{3, Primitive::Gather}}}}},
                   Primitive::Split));
  std::vector<Emission> out;
  for (std::uint64_t seq = 0; seq < 4; ++seq) {
    Packet p = host_packet(seq, Bytes{static_cast<std::uint8_t>(seq)});
    p.header.batch_number = 77;  // ignored by split
    auto r = sw.ingress(p, 1, 0);
    REQUIRE(r.emissions.size() == 1);
    out.push_back(r.emissions.front());
  }
  CHECK(out[0].packet.header.batch_number == 0);
  CHECK(out[1].packet.header.batch_number == 0);
  CHECK(out[2].packet.header.batch_number == 1);
  CHECK(out[3].packet.header.batch_number == 1);
  CHECK(out[0].port == 2);
  CHECK(out[1].port == 3);
  CHECK(out[0].packet.header.next_primitive == Primitive::Forward);
  CHECK(out[1].packet.header.next_primitive == Primitive::Gather);
  CHECK(out[2].packet.header.coeffs == unit_vector(2, 0));
  CHECK(out[3].packet.header.coeffs == unit_vector(2, 1));
  CHECK(unframe_symbol(out[3].packet.payload) == Bytes{3});
}

TEST_CASE("split pads the last partial batch with a filler at stream end") {
  Switch sw(single({PrimitiveConfig{SplitParams{0, {OutputSpec{2, Primitive::Gather}, OutputSpec{3, Primitive::Gather}}}}},
                   Primitive::Split));
  for (std::uint64_t seq = 0; seq < 5; ++seq) sw.ingress(host_packet(seq, Bytes(4, static_cast<std::uint8_t>(seq))), 1, 0);
  const auto r = sw.end_stream(kS, 100);
  REQUIRE(r.emissions.size() == 1);
  const Packet& f = r.emissions.front().packet;
  CHECK(f.header.batch_number == 2);
  CHECK(f.header.coeffs == unit_vector(2, 1));
  CHECK(f.header.orig_len == 0);
  CHECK_FALSE(unframe_symbol(f.payload).has_value());
  CHECK(sw.end_stream(kS, 200).emissions.empty());

  // The real original in batch 2 keeps its length.
  const RegisterBank& b = sw.bank(0);
  CHECK(unframe_symbol(b.find(2)->rows.front().symbol) == Bytes(4, 4));
}

TEST_CASE("code emits the configured combinations when the batch is complete") {
  Switch sw(single({PrimitiveConfig{GatherParams{0}},
                    PrimitiveConfig{CodeParams{0, {CodeRowSpec{kOnes, OutputSpec{5, Primitive::Forward}},
                                                   CodeRowSpec{unit_vector(2, 0), OutputSpec{6, Primitive::Gather}}}}}},
                   Primitive::Gather));
  const Symbol a = frame_symbol(Bytes{'a', 'a', 'a'});
  const Symbol b = frame_symbol(Bytes{'b', 'b', 'b'});

  auto first = sw.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  CHECK(first.emissions.empty());
  CHECK(first.cost.recirculations == 0);

  auto second = sw.ingress(coded(0, unit_vector(2, 1), b), 2, 0);
  REQUIRE(second.emissions.size() == 2);
  CHECK(second.cost.clones == 2);
  CHECK(second.cost.recirculations == 2);
  CHECK(second.cost.bytes_touched >= 2 * a.size());

  const Packet& x = second.emissions[0].packet;
  CHECK(second.emissions[0].port == 5);
  CHECK(x.header.coeffs == kOnes);
  CHECK(x.header.next_primitive == Primitive::Forward);
  CHECK(x.payload == combine(kOnes, std::vector<Symbol>{a, b}));
  CHECK(x.header.orig_len == 0);

  const Packet& proj = second.emissions[1].packet;
  CHECK(second.emissions[1].port == 6);
  CHECK(proj.payload == a);
  CHECK(proj.header.orig_len == 3);
  CHECK(sw.counters().batches_coded == 1);

  // A late third row is not coded again.
  auto third = sw.ingress(coded(0, kOnes, x.payload), 3, 0);
  CHECK(third.emissions.empty());
  CHECK(sw.counters().late == 1);
}

TEST_CASE("forward unicast, multicast and empty port set") {
  SwitchConfig c;
  c.id = 3;
  c.entries.push_back(TableEntry{TableKey{kS, Primitive::Forward, 1}, {PrimitiveConfig{ForwardParams{{OutputSpec{2, Primitive::Forward}}}}}});
  c.entries.push_back(TableEntry{TableKey{kS, Primitive::Forward, 2},
                                 {PrimitiveConfig{ForwardParams{{OutputSpec{3, Primitive::Gather}, OutputSpec{4, Primitive::Deliver}}}}}});
  c.entries.push_back(TableEntry{TableKey{kS, Primitive::Forward, 5}, {PrimitiveConfig{ForwardParams{}}}});
  Switch sw(c);
  const Packet p = host_packet(0, Bytes{1, 2}, Primitive::Forward);

  auto uni = sw.ingress(p, 1, 0);
  REQUIRE(uni.emissions.size() == 1);
  CHECK(uni.emissions[0].port == 2);
  CHECK(uni.cost.table_lookups == 1);
  CHECK(uni.cost.clones == 0);
  CHECK(uni.cost.recirculations == 0);

  auto multi = sw.ingress(p, 2, 0);
  REQUIRE(multi.emissions.size() == 2);
  CHECK(multi.cost.clones == 1);
  CHECK(multi.emissions[0].packet.payload == multi.emissions[1].packet.payload);
  CHECK(multi.emissions[0].packet.header.next_primitive == Primitive::Gather);
  CHECK(multi.emissions[1].packet.header.next_primitive == Primitive::Deliver);

  CHECK(sw.ingress(p, 5, 0).emissions.empty());
  CHECK(sw.counters().empty_port_drops == 1);
}

TEST_CASE("gather outcomes") {
  Switch sw(single({PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 4}}}, Primitive::Gather));
  const Symbol a = frame_symbol(Bytes{'a'});
  const Symbol b = frame_symbol(Bytes{'b'});
  sw.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  sw.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  CHECK(sw.counters().redundant == 1);
  auto ready = sw.ingress(coded(0, unit_vector(2, 1), b), 2, 0);
  CHECK(ready.emissions.size() == 2);
  sw.ingress(coded(0, kOnes, combine(kOnes, std::vector<Symbol>{a, b})), 3, 0);
  CHECK(sw.counters().late == 1);
}

TEST_CASE("decode with the parity row recovers the missing original through one recirculation") {
  Switch sw(single({PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 4}}}, Primitive::Gather));
  const Bytes pa{'a', 'a', 'a', 'a'}, pb{'b', 'b'};
  const Symbol a = frame_symbol(pa);
  Symbol b = frame_symbol(pb);
  b.resize(a.size(), 0);

  sw.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  auto r = sw.ingress(coded(0, kOnes, combine(kOnes, std::vector<Symbol>{a, b})), 3, 0);
  REQUIRE(r.emissions.size() == 2);
  CHECK(r.branch == DecodeBranch::Arithmetic);
  CHECK(r.cost.recirculations == 1);
  CHECK(r.emissions[0].packet.payload == pa);
  CHECK(r.emissions[1].packet.payload == pb);
  CHECK(r.emissions[0].packet.header.orig_len == 4);
  CHECK(r.emissions[1].packet.header.orig_len == 2);
  for (const auto& e : r.emissions) {
    CHECK(e.port == 4);
    CHECK(e.packet.header.next_primitive == Primitive::Deliver);
  }
  CHECK(sw.counters().decode_arithmetic == 1);
}

TEST_CASE("decode of two originals is pass-through with no recirculation") {
  Switch sw(single({PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 4}}}, Primitive::Gather));
  const Bytes pa{'a'}, pb{'b'};
  sw.ingress(coded(0, unit_vector(2, 1), frame_symbol(pb)), 1, 0);
  auto r = sw.ingress(coded(0, unit_vector(2, 0), frame_symbol(pa)), 2, 0);
  REQUIRE(r.emissions.size() == 2);
  CHECK(r.branch == DecodeBranch::PassThrough);
  CHECK(r.cost.recirculations == 0);
  // Generation order, not arrival order.
  CHECK(r.emissions[0].packet.payload == pa);
  CHECK(r.emissions[1].packet.payload == pb);
  CHECK(sw.counters().decode_pass_through == 1);
}

TEST_CASE("a lone parity row leaves the batch undelivered") {
  Switch sw(single({PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 4}}}, Primitive::Gather));
  auto r = sw.ingress(coded(0, kOnes, frame_symbol(Bytes{1})), 3, 0);
  CHECK(r.emissions.empty());
  CHECK(sw.bank(0).find(0)->rank() == 1);
  CHECK(sw.counters().batches_decoded == 0);
}

TEST_CASE("a corrupt length prefix skips only that original and counts an integrity error") {
  Switch sw(single({PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 4}}}, Primitive::Gather));
  const Symbol a = frame_symbol(Bytes{'a'});
  sw.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  auto r = sw.ingress(coded(0, unit_vector(2, 1), Symbol{0x00, 0x40, 1}), 2, 0);
  CHECK(sw.counters().integrity_errors == 1);
  CHECK(r.emissions.size() == 1);  // a is still delivered
}

TEST_CASE("cost ordering: code and arithmetic decode cost more than forward and pass-through") {
  const Bytes payload(1024, 7);
  const Symbol a = frame_symbol(payload), b = frame_symbol(Bytes(1024, 9));

  Switch fwd([] {
    SwitchConfig c;
    c.entries.push_back(TableEntry{TableKey{kS, Primitive::Forward, std::nullopt}, {PrimitiveConfig{ForwardParams{{OutputSpec{2, Primitive::Forward}}}}}});
    return c;
  }());
  const auto fwd_cost = fwd.ingress(coded(0, unit_vector(2, 0), a, Primitive::Forward), 1, 0).latency;

  Switch coder(single({PrimitiveConfig{GatherParams{0}},
                       PrimitiveConfig{CodeParams{0, {CodeRowSpec{kOnes, OutputSpec{5, Primitive::Forward}}}}}},
                      Primitive::Gather));
  coder.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  const auto code_cost = coder.ingress(coded(0, unit_vector(2, 1), b), 1, 0).latency;
  CHECK(code_cost > fwd_cost);

  Switch dec_pt(single({PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 4}}}, Primitive::Gather));
  dec_pt.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  const auto pt = dec_pt.ingress(coded(0, unit_vector(2, 1), b), 2, 0);

  Switch dec_ar(single({PrimitiveConfig{GatherParams{0}}, PrimitiveConfig{DecodeParams{0, 4}}}, Primitive::Gather));
  dec_ar.ingress(coded(0, unit_vector(2, 0), a), 1, 0);
  const auto ar = dec_ar.ingress(coded(0, kOnes, combine(kOnes, std::vector<Symbol>{a, b})), 3, 0);
  CHECK(ar.latency > pt.latency);
  CHECK(ar.cost.table_lookups > pt.cost.table_lookups);
}
