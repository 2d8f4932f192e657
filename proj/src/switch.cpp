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


#include "ncdp/switch.hpp"

#include "ncdp/error.hpp"

namespace ncdp {

Switch::Switch(SwitchConfig config) : config_(std::move(config)) {
  for (const auto& b : config_.banks) {
    if (!banks_.try_emplace(b.id, b.stream, b.gen_size, b.ring).second)
      throw ConfigError("switch " + std::to_string(config_.id) + ": duplicate bank " + std::to_string(b.id));
  }
  for (std::size_t i = 0; i < config_.entries.size(); ++i) {
    const auto& e = config_.entries[i];
    if (!table_.emplace(e.key, i).second)
      throw ConfigError("switch " + std::to_string(config_.id) + ": duplicate table key for stream " +
                        std::to_string(e.key.stream));
  }
}

RegisterBank& Switch::bank(BankId id) {
  auto it = banks_.find(id);
  if (it == banks_.end()) throw ConfigError("no register bank " + std::to_string(id));
  return it->second;
}

const TableEntry* Switch::match(StreamId stream, Primitive next, PortId port) const {
  if (auto it = table_.find(TableKey{stream, next, port}); it != table_.end()) return &config_.entries[it->second];
  if (auto it = table_.find(TableKey{stream, next, std::nullopt}); it != table_.end())
    return &config_.entries[it->second];
  return nullptr;
}

Disposition Switch::run_pass(Packet& packet, PortId port, Traversal& t) {
  // Packets generated by clone+recirculate already know their egress port.
  if (packet.meta.generated_port) {
    ++t.cost().table_lookups;
    const PortId out = *packet.meta.generated_port;
    t.emit(packet, out);
    return Disposition::Forwarded;
  }
  const TableEntry* entry = match(packet.header.stream_id, packet.header.next_primitive, port);
  if (entry == nullptr) return Disposition::DroppedUnmatched;

  PassState pass{packet, std::nullopt};
  PrimitiveEnv env{t, banks_, counters_};
  try {
    for (const auto& action : entry->actions) {
      ++t.cost().table_lookups;
      run_primitive(pass, action, env);
    }
  } catch (const IntegrityError&) {
    ++counters_.integrity_errors;
    return Disposition::Consumed;
  }
  if (pass.loop_guarded) return Disposition::LoopGuarded;
  if (pass.emitted_self) return Disposition::Forwarded;
  if (pass.dropped) return Disposition::DroppedUnmatched;
  if (pass.consumed) return Disposition::Consumed;
  if (pass.stored) return Disposition::Stored;
  return Disposition::DroppedUnmatched;
}

IngressResult Switch::ingress(Packet packet, PortId port, Nanos now) {
  Traversal t(static_cast<std::uint16_t>(config_.id), now, config_.cost, config_.max_recirc);
  packet.meta.ingress_port = port;
  packet.meta.ingress_ts = now;
  packet.meta.recirc_depth = 0;
  packet.meta.generated_port.reset();
  counters_.count(run_pass(packet, port, t));
  while (t.has_recirculation()) {
    Packet r = t.pop_recirculation();
    counters_.count(run_pass(r, kRecirculatePort, t));
  }

  IngressResult result;
  result.emissions = std::move(t.emissions());
  result.cost = t.cost();
  result.latency = config_.cost.latency(t.cost());
  result.branch = t.branch;
  counters_.emitted += result.emissions.size();
  traversals_.push_back(TraversalRecord{now, result.cost, result.latency, t.branch, t.coded});
  return result;
}

IngressResult Switch::end_stream(StreamId stream, Nanos now) {
  IngressResult all;
  for (const auto& entry : config_.entries) {
    if (entry.key.stream != stream) continue;
    for (const auto& action : entry.actions) {
      const auto* sp = std::get_if<SplitParams>(&action.params);
      if (sp == nullptr) continue;
      RegisterBank& b = bank(sp->bank);
      const std::size_t k = b.gen_size();
      const std::size_t partial = static_cast<std::size_t>(b.next_sequence() % k);
      if (partial == 0) continue;
      for (std::size_t i = partial; i < k; ++i) {
        Packet filler;
        filler.header.stream_id = stream;
        filler.header.next_primitive = entry.key.match;
        filler.header.gen_size = static_cast<std::uint8_t>(k);
        filler.header.coeffs = unit_vector(k, 0);
        filler.meta.filler = true;
        IngressResult r = ingress(std::move(filler), entry.key.in_port.value_or(0), now);
        for (auto& e : r.emissions) all.emissions.push_back(std::move(e));
        all.cost += r.cost;
      }
    }
  }
  all.latency = config_.cost.latency(all.cost);
  return all;
}

std::vector<std::pair<std::string, std::uint64_t>> Switch::counter_snapshot() const {
  const auto& c = counters_;
  return {
      {"ingress_passes", c.ingress_passes},
      {"forwarded", c.forwarded},
      {"stored", c.stored},
      {"consumed", c.consumed},
      {"dropped_unmatched", c.dropped_unmatched},
      {"loop_guarded", c.loop_guarded},
      {"empty_port_drops", c.empty_port_drops},
      {"redundant", c.redundant},
      {"late", c.late},
      {"evicted_undelivered", c.evicted_undelivered},
      {"integrity_errors", c.integrity_errors},
      {"batches_coded", c.batches_coded},
      {"batches_decoded", c.batches_decoded},
      {"decode_arithmetic", c.decode_arithmetic},
      {"decode_pass_through", c.decode_pass_through},
      {"emitted", c.emitted},
  };
}

}  // namespace ncdp
