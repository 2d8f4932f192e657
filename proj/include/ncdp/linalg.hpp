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

// Encoding and decoding over GF(2^8): linear combination of symbols and
// Gaussian elimination on coded rows.

#include <cstddef>
#include <span>
#include <vector>

#include "ncdp/gf256.hpp"

namespace ncdp {

/// A coded packet's algebraic content: its coefficient row and symbol.
struct CodedRow {
  CoeffVector coeffs;
  Symbol symbol;

  friend bool operator==(const CodedRow&, const CodedRow&) = default;
};

/// Byte-wise sum of coeffs[i] * symbols[i]. All symbols must share one length.
Symbol combine(std::span<const Gf256> coeffs, std::span<const Symbol> symbols);

/// Recover the k originals (in generation order) from coded rows.
/// Throws InsufficientRank when the rows span fewer than k dimensions and
/// IntegrityError when a dependent row contradicts the others.
std::vector<Symbol> solve(std::span<const CodedRow> received, std::size_t k);

/// Rank of the matrix whose rows are `vectors`.
std::size_t rank(std::span<const CoeffVector> vectors);

/// Incrementally maintained row-echelon basis of coefficient vectors.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t k) : k_(k) {}

  /// Adds v if it is independent of the rows seen so far; returns whether it was.
  bool insert(std::span<const Gf256> v);
  bool is_independent(std::span<const Gf256> v) const;

  std::size_t rank() const { return rows_.size(); }
  std::size_t width() const { return k_; }
  void clear() { rows_.clear(); pivots_.clear(); }

 private:
  CoeffVector reduce(std::span<const Gf256> v) const;

  std::size_t k_;
  std::vector<CoeffVector> rows_;     // each normalised so rows_[r][pivots_[r]] == 1
  std::vector<std::size_t> pivots_;
};

/// Zero-pads every symbol to the longest one.
std::vector<Symbol> pad_to_common_length(std::vector<Symbol> symbols);

}  // namespace ncdp
