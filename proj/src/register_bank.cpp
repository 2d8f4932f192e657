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


#include "ncdp/register_bank.hpp"

#include "ncdp/error.hpp"

namespace ncdp {

RegisterBank::RegisterBank(StreamId stream, std::size_t k, std::size_t ring) : stream_(stream), k_(k) {
  if (k == 0) throw ConfigError("register bank needs gen_size >= 1");
  if (ring == 0) throw ConfigError("register bank needs at least one slot");
  slots_.assign(ring, BatchSlot(k));
}

StoreResult RegisterBank::store_row(std::uint32_t batch, CoeffVector coeffs, Symbol symbol) {
  if (coeffs.size() != k_) throw ShapeError("store_row: coefficient vector length != gen_size");
  BatchSlot& slot = slots_[batch % slots_.size()];
  StoreResult result;
  result.outcome = StoreOutcome::NewRow;

  if (slot.batch && *slot.batch != batch) {
    if (*slot.batch > batch) {
      result.outcome = StoreOutcome::AlreadyDelivered;
      result.rank = 0;
      return result;
    }
    result.outcome = StoreOutcome::Evicted;
    result.evicted_batch = *slot.batch;
    result.evicted_undelivered = !slot.delivered;
    ++evictions_;
    if (!slot.delivered) lost_batches_.push_back(*slot.batch);
    slot = BatchSlot(k_);
  }
  if (!slot.batch) slot.batch = batch;

  if (slot.delivered) {
    result.outcome = StoreOutcome::AlreadyDelivered;
    result.rank = slot.rank();
    return result;
  }
  if (!slot.basis.insert(coeffs)) {
    result.outcome = StoreOutcome::DuplicateRank;
    result.rank = slot.rank();
    return result;
  }
  slot.rows.push_back(CodedRow{std::move(coeffs), std::move(symbol)});
  result.rank = slot.rank();
  return result;
}

BatchSlot* RegisterBank::find(std::uint32_t batch) {
  BatchSlot& slot = slots_[batch % slots_.size()];
  return slot.batch == batch ? &slot : nullptr;
}

const BatchSlot* RegisterBank::find(std::uint32_t batch) const {
  const BatchSlot& slot = slots_[batch % slots_.size()];
  return slot.batch == batch ? &slot : nullptr;
}

void RegisterBank::mark_delivered(std::uint32_t batch) {
  if (BatchSlot* slot = find(batch)) slot->delivered = true;
}

}  // namespace ncdp
