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


#include "ncdp/primitives.hpp"

#include <algorithm>
#include <string>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

std::size_t nonzero_count(std::span<const Gf256> v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Gf256 e) { return !e.is_zero(); }));
}

StoreResult store_into_bank(PassState& pass, RegisterBank& bank, PrimitiveEnv& env) {
  Packet& p = pass.packet;
  if (p.header.coeffs.size() != bank.gen_size())
    throw IntegrityError("packet gen_size " + std::to_string(p.header.coeffs.size()) +
                         " differs from bank gen_size " + std::to_string(bank.gen_size()));
  env.traversal.cost().bytes_touched += p.payload.size();
  StoreResult r = bank.store_row(p.header.batch_number, p.header.coeffs, p.payload);
  if (r.evicted_undelivered) ++env.counters.evicted_undelivered;
  pass.stored = true;
  if ((r.outcome == StoreOutcome::NewRow || r.outcome == StoreOutcome::Evicted) && r.rank == bank.gen_size())
    pass.ready_batch = p.header.batch_number;
  return r;
}

// The k originals of a full-rank slot, padded to a common length. Uses the
// stored basis rows directly when every original arrived uncoded.
std::vector<Symbol> recover_originals(const BatchSlot& slot, std::size_t k, PrimitiveEnv& env, bool& arithmetic) {
  std::vector<Symbol> direct(k);
  std::vector<bool> have(k, false);
  for (const auto& row : slot.rows) {
    const int idx = basis_index(row.coeffs);
    if (idx >= 0) {
      direct[static_cast<std::size_t>(idx)] = row.symbol;
      have[static_cast<std::size_t>(idx)] = true;
    }
  }
  if (std::all_of(have.begin(), have.end(), [](bool b) { return b; })) {
    arithmetic = false;
    return pad_to_common_length(std::move(direct));
  }
  arithmetic = true;
  std::vector<Symbol> symbols;
  for (const auto& row : slot.rows) symbols.push_back(row.symbol);
  symbols = pad_to_common_length(std::move(symbols));
  std::vector<CodedRow> rows;
  for (std::size_t i = 0; i < slot.rows.size(); ++i) rows.push_back(CodedRow{slot.rows[i].coeffs, std::move(symbols[i])});
  const std::size_t len = rows.empty() ? 0 : rows.front().symbol.size();
  env.traversal.cost().bytes_touched += k * rows.size() * len;
  return solve(rows, k);
}

}  // namespace

RegisterBank& PrimitiveEnv::bank(BankId id) {
  auto it = banks.find(id);
  if (it == banks.end()) throw ConfigError("no register bank " + std::to_string(id));
  return it->second;
}

Symbol frame_symbol(std::span<const std::uint8_t> payload) {
  if (payload.size() > 0xFFFD) throw EncodeError("payload too long to frame");
  const auto prefix = static_cast<std::uint16_t>(payload.size() + 1);
  Symbol s;
  s.reserve(payload.size() + 2);
  s.push_back(static_cast<std::uint8_t>(prefix >> 8));
  s.push_back(static_cast<std::uint8_t>(prefix & 0xFF));
  s.insert(s.end(), payload.begin(), payload.end());
  return s;
}

Symbol filler_symbol() { return Symbol(2, 0); }

std::optional<Bytes> unframe_symbol(std::span<const std::uint8_t> symbol) {
  if (symbol.size() < 2) throw IntegrityError("symbol shorter than its length prefix");
  const std::size_t prefix = static_cast<std::size_t>(symbol[0]) << 8 | symbol[1];
  if (prefix == 0) return std::nullopt;
  if (prefix - 1 > symbol.size() - 2) throw IntegrityError("symbol length prefix exceeds symbol");
  return Bytes(symbol.begin() + 2, symbol.begin() + 2 + static_cast<std::ptrdiff_t>(prefix - 1));
}

void split(PassState& pass, const SplitParams& params, PrimitiveEnv& env) {
  RegisterBank& bank = env.bank(params.bank);
  Packet& p = pass.packet;
  const std::size_t k = bank.gen_size();
  const std::uint64_t seq = bank.take_sequence();
  const auto idx = static_cast<std::size_t>(seq % k);

  Symbol sym = p.meta.filler ? filler_symbol() : frame_symbol(p.payload);
  p.header.orig_len = p.meta.filler ? 0 : static_cast<std::uint16_t>(p.payload.size());
  p.header.batch_number = static_cast<std::uint32_t>(seq / k);
  p.header.gen_size = static_cast<std::uint8_t>(k);
  p.header.coeffs = unit_vector(k, idx);
  p.payload = std::move(sym);

  store_into_bank(pass, bank, env);

  if (idx < params.assign.size() && params.assign[idx]) {
    Packet out = p;
    out.header.next_primitive = params.assign[idx]->next;
    env.traversal.emit(std::move(out), params.assign[idx]->port);
    pass.emitted_self = true;
  }
}

void code(PassState& pass, const CodeParams& params, PrimitiveEnv& env) {
  RegisterBank& bank = env.bank(params.bank);
  Packet& p = pass.packet;
  if (!pass.stored) store_into_bank(pass, bank, env);
  if (!pass.ready_batch) return;
  const std::uint32_t batch = *pass.ready_batch;
  BatchSlot* slot = bank.find(batch);
  if (slot == nullptr || slot->delivered) return;

  const std::size_t k = bank.gen_size();
  bool arithmetic = false;
  std::vector<Symbol> originals;
  try {
    originals = recover_originals(*slot, k, env, arithmetic);
  } catch (const IntegrityError&) {
    ++env.counters.integrity_errors;
    bank.mark_delivered(batch);
    pass.consumed = true;
    return;
  }
  const std::size_t len = originals.empty() ? 0 : originals.front().size();

  for (const auto& row : params.rows) {
    Symbol sym = combine(row.coeffs, originals);
    env.traversal.cost().bytes_touched += (nonzero_count(row.coeffs) + 1) * len;
    std::uint16_t orig_len = 0;
    if (const int idx = basis_index(row.coeffs); idx >= 0) {
      if (auto payload = unframe_symbol(sym)) orig_len = static_cast<std::uint16_t>(payload->size());
    }
    env.traversal.clone_and_recirculate(p, [&](Packet& g) {
      g.header.batch_number = batch;
      g.header.gen_size = static_cast<std::uint8_t>(k);
      g.header.coeffs = row.coeffs;
      g.header.orig_len = orig_len;
      g.header.next_primitive = row.out.next;
      g.payload = sym;
      g.meta.generated_port = row.out.port;
      g.meta.end_of_stream = false;
      g.meta.filler = false;
    });
  }
  bank.mark_delivered(batch);
  ++env.counters.batches_coded;
  env.traversal.coded = true;
  pass.consumed = true;
}

void forward(PassState& pass, const ForwardParams& params, PrimitiveEnv& env) {
  Packet& p = pass.packet;
  if (params.outputs.empty()) {
    ++env.counters.empty_port_drops;
    pass.dropped = true;
    return;
  }
  bool used_original = false;
  bool guarded = false;
  for (const auto& out : params.outputs) {
    if (out.port == kRecirculatePort) {
      const Primitive next = out.next;
      if (!env.traversal.clone_and_recirculate(p, [next](Packet& g) { g.header.next_primitive = next; }))
        guarded = true;
      continue;
    }
    Packet copy = used_original ? env.traversal.clone(p) : p;
    used_original = true;
    copy.header.next_primitive = out.next;
    env.traversal.emit(std::move(copy), out.port);
  }
  if (used_original) {
    pass.emitted_self = true;
  } else if (guarded) {
    pass.loop_guarded = true;
  } else {
    pass.consumed = true;
  }
}

GatherOutcome gather(PassState& pass, const GatherParams& params, PrimitiveEnv& env) {
  RegisterBank& bank = env.bank(params.bank);
  const StoreResult r = store_into_bank(pass, bank, env);
  switch (r.outcome) {
    case StoreOutcome::DuplicateRank:
      ++env.counters.redundant;
      pass.consumed = true;
      return GatherOutcome::Redundant;
    case StoreOutcome::AlreadyDelivered:
      ++env.counters.late;
      pass.consumed = true;
      return GatherOutcome::Late;
    case StoreOutcome::NewRow:
    case StoreOutcome::Evicted:
      break;
  }
  return pass.ready_batch ? GatherOutcome::Ready : GatherOutcome::Stored;
}

void decode(PassState& pass, const DecodeParams& params, PrimitiveEnv& env) {
  RegisterBank& bank = env.bank(params.bank);
  Packet& p = pass.packet;
  if (!pass.stored) {
    const StoreResult r = store_into_bank(pass, bank, env);
    if (r.outcome == StoreOutcome::DuplicateRank) ++env.counters.redundant;
    if (r.outcome == StoreOutcome::AlreadyDelivered) ++env.counters.late;
    if (r.outcome == StoreOutcome::DuplicateRank || r.outcome == StoreOutcome::AlreadyDelivered) {
      pass.consumed = true;
      return;
    }
  }
  if (!pass.ready_batch) return;
  const std::uint32_t batch = *pass.ready_batch;
  BatchSlot* slot = bank.find(batch);
  if (slot == nullptr || slot->delivered) return;

  const std::size_t k = bank.gen_size();
  std::vector<bool> present(k, false);
  for (const auto& row : slot->rows)
    if (const int idx = basis_index(row.coeffs); idx >= 0) present[static_cast<std::size_t>(idx)] = true;

  bool arithmetic = false;
  std::vector<Symbol> originals;
  try {
    originals = recover_originals(*slot, k, env, arithmetic);
  } catch (const IntegrityError&) {
    ++env.counters.integrity_errors;
    bank.mark_delivered(batch);
    pass.consumed = true;
    return;
  }
  env.traversal.branch = arithmetic ? DecodeBranch::Arithmetic : DecodeBranch::PassThrough;
  ++(arithmetic ? env.counters.decode_arithmetic : env.counters.decode_pass_through);
  ++env.counters.batches_decoded;

  const int self_idx = basis_index(p.header.coeffs);
  // Deliveries leave in generation order: once one original has to be
  // materialised through recirculation, every later one follows it through
  // the recirculation queue.
  bool pending = false;
  for (std::size_t i = 0; i < k; ++i) {
    std::optional<Bytes> payload;
    try {
      payload = unframe_symbol(originals[i]);
    } catch (const IntegrityError&) {
      ++env.counters.integrity_errors;
      continue;
    }
    if (!payload) continue;
    auto fill = [&, i](Packet& d) {
      d.header.batch_number = batch;
      d.header.gen_size = static_cast<std::uint8_t>(k);
      d.header.coeffs = unit_vector(k, i);
      d.header.orig_len = static_cast<std::uint16_t>(payload->size());
      d.header.next_primitive = Primitive::Deliver;
      d.payload = *payload;
      d.meta.end_of_stream = false;
    };
    if (present[i] && !pending) {
      Packet d = (self_idx == static_cast<int>(i)) ? p : env.traversal.clone(p);
      if (self_idx == static_cast<int>(i)) pass.emitted_self = true;
      fill(d);
      env.traversal.emit(std::move(d), params.deliver_port);
    } else {
      pending = true;
      const PortId port = params.deliver_port;
      env.traversal.clone_and_recirculate(p, [&](Packet& d) {
        fill(d);
        d.meta.generated_port = port;
      });
    }
  }
  bank.mark_delivered(batch);
  if (!pass.emitted_self) pass.consumed = true;
}

void run_primitive(PassState& pass, const PrimitiveConfig& config, PrimitiveEnv& env) {
  std::visit(
      [&](const auto& params) {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, SplitParams>) split(pass, params, env);
        else if constexpr (std::is_same_v<T, CodeParams>) code(pass, params, env);
        else if constexpr (std::is_same_v<T, ForwardParams>) forward(pass, params, env);
        else if constexpr (std::is_same_v<T, GatherParams>) gather(pass, params, env);
        else decode(pass, params, env);
      },
      config.params);
}

}  // namespace ncdp
