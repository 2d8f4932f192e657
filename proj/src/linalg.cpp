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


#include "ncdp/linalg.hpp"

#include <algorithm>
#include <string>

#include "ncdp/error.hpp"

namespace ncdp {

Symbol combine(std::span<const Gf256> coeffs, std::span<const Symbol> symbols) {
  if (coeffs.size() != symbols.size())
    throw ShapeError("combine: " + std::to_string(coeffs.size()) + " coefficients for " +
                     std::to_string(symbols.size()) + " symbols");
  if (symbols.empty()) return {};
  const std::size_t len = symbols.front().size();
  for (const auto& s : symbols)
    if (s.size() != len) throw ShapeError("combine: symbols differ in length");
  Symbol out(len, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) gf::mul_add_region(out, symbols[i], coeffs[i]);
  return out;
}

std::vector<Symbol> solve(std::span<const CodedRow> received, std::size_t k) {
  if (received.empty()) throw InsufficientRank(0, k);
  const std::size_t len = received.front().symbol.size();
  for (const auto& r : received) {
    if (r.coeffs.size() != k) throw ShapeError("solve: coefficient vector length != k");
    if (r.symbol.size() != len) throw ShapeError("solve: symbols differ in length");
  }

  // Reduced row echelon form on the augmented matrix [coeffs | symbol].
  std::vector<CodedRow> basis;
  std::vector<std::size_t> pivot_of;
  for (const auto& in : received) {
    CodedRow row = in;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Gf256 f = row.coeffs[pivot_of[b]];
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c < k; ++c) row.coeffs[c] += f * basis[b].coeffs[c];
      gf::mul_add_region(row.symbol, basis[b].symbol, f);
    }
    auto nz = std::find_if(row.coeffs.begin(), row.coeffs.end(), [](Gf256 e) { return !e.is_zero(); });
    if (nz == row.coeffs.end()) {
      if (std::any_of(row.symbol.begin(), row.symbol.end(), [](std::uint8_t b) { return b != 0; }))
        throw IntegrityError("solve: dependent coded row carries an inconsistent symbol");
      continue;
    }
    const std::size_t pivot = static_cast<std::size_t>(nz - row.coeffs.begin());
    const Gf256 scale = gf::inv(row.coeffs[pivot]);
    for (auto& c : row.coeffs) c *= scale;
    gf::scale_region(row.symbol, scale);
    for (auto& other : basis) {
      const Gf256 f = other.coeffs[pivot];
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c < k; ++c) other.coeffs[c] += f * row.coeffs[c];
      gf::mul_add_region(other.symbol, row.symbol, f);
    }
    basis.push_back(std::move(row));
    pivot_of.push_back(pivot);
  }
  if (basis.size() < k) throw InsufficientRank(basis.size(), k);

  std::vector<Symbol> out(k);
  for (std::size_t b = 0; b < basis.size(); ++b) out[pivot_of[b]] = std::move(basis[b].symbol);
  return out;
}

std::size_t rank(std::span<const CoeffVector> vectors) {
  if (vectors.empty()) return 0;
  RowEchelon ech(vectors.front().size());
  for (const auto& v : vectors) {
    if (v.size() != ech.width()) throw ShapeError("rank: vectors differ in length");
    ech.insert(v);
  }
  return ech.rank();
}

CoeffVector RowEchelon::reduce(std::span<const Gf256> v) const {
  if (v.size() != k_) throw ShapeError("RowEchelon: vector length != k");
  CoeffVector row(v.begin(), v.end());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Gf256 f = row[pivots_[r]];
    if (f.is_zero()) continue;
    for (std::size_t c = 0; c < k_; ++c) row[c] += f * rows_[r][c];
  }
  return row;
}

bool RowEchelon::is_independent(std::span<const Gf256> v) const { return !is_zero(reduce(v)); }

bool RowEchelon::insert(std::span<const Gf256> v) {
  CoeffVector row = reduce(v);
  auto nz = std::find_if(row.begin(), row.end(), [](Gf256 e) { return !e.is_zero(); });
  if (nz == row.end()) return false;
  const std::size_t pivot = static_cast<std::size_t>(nz - row.begin());
  const Gf256 scale = gf::inv(row[pivot]);
  for (auto& c : row) c *= scale;
  // Keep earlier rows reduced in the new pivot column so reduce() stays a single pass.
  for (auto& other : rows_) {
    const Gf256 f = other[pivot];
    if (f.is_zero()) continue;
    for (std::size_t c = 0; c < k_; ++c) other[c] += f * row[c];
  }
  rows_.push_back(std::move(row));
  pivots_.push_back(pivot);
  return true;
}

std::vector<Symbol> pad_to_common_length(std::vector<Symbol> symbols) {
  std::size_t len = 0;
  for (const auto& s : symbols) len = std::max(len, s.size());
  for (auto& s : symbols) s.resize(len, 0);
  return symbols;
}

}  // namespace ncdp
