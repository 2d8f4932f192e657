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

#include <cstdint>
#include <optional>
#include <vector>

#include "ncdp/linalg.hpp"
#include "ncdp/packet.hpp"

namespace ncdp {

using BankId = std::uint16_t;

inline constexpr std::size_t kDefaultRingSize = 64;

/// Rows of one batch held in a ring slot.
struct BatchSlot {
  std::optional<std::uint32_t> batch;
  std::vector<CodedRow> rows;
  RowEchelon basis;
  bool delivered = false;

  explicit BatchSlot(std::size_t k) : basis(k) {}
  std::size_t received_count() const { return rows.size(); }
  std::size_t rank() const { return basis.rank(); }
};

enum class StoreOutcome {
  NewRow,
  DuplicateRank,
  Evicted,           // an older batch was evicted from the slot, then the row was stored
  AlreadyDelivered,  // the batch is closed: delivered, or aged out of the ring
};

struct StoreResult {
  StoreOutcome outcome = StoreOutcome::NewRow;
  std::size_t rank = 0;  // rank of the row's batch after the call
  std::optional<std::uint32_t> evicted_batch;
  bool evicted_undelivered = false;
};

/// Per-stream ring buffer of R batch slots, indexed by batch_number mod R.
class RegisterBank {
 public:
  RegisterBank(StreamId stream, std::size_t k, std::size_t ring = kDefaultRingSize);

  StoreResult store_row(std::uint32_t batch, CoeffVector coeffs, Symbol symbol);

  /// Slot currently holding `batch`, or nullptr.
  BatchSlot* find(std::uint32_t batch);
  const BatchSlot* find(std::uint32_t batch) const;
  void mark_delivered(std::uint32_t batch);

  StreamId stream() const { return stream_; }
  std::size_t gen_size() const { return k_; }
  std::size_t ring_size() const { return slots_.size(); }

  /// Per-stream sequence counter used by the split primitive.
  std::uint64_t take_sequence() { return next_sequence_++; }
  std::uint64_t next_sequence() const { return next_sequence_; }

  std::uint64_t evictions() const { return evictions_; }
  const std::vector<std::uint32_t>& lost_batches() const { return lost_batches_; }

 private:
  StreamId stream_;
  std::size_t k_;
  std::vector<BatchSlot> slots_;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t evictions_ = 0;
  std::vector<std::uint32_t> lost_batches_;  // evicted before delivery
};

}  // namespace ncdp
