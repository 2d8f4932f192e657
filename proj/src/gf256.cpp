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


#include "ncdp/gf256.hpp"

#include <array>
#include <iomanip>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

constexpr std::uint8_t xtime_mul(std::uint8_t a, std::uint8_t b) {
  unsigned acc = 0;
  unsigned x = a;
  for (unsigned y = b; y != 0; y >>= 1) {
    if (y & 1U) acc ^= x;
    x <<= 1;
    if (x & 0x100U) x ^= kFieldPolynomial;
  }
  return static_cast<std::uint8_t>(acc);
}

struct LogTables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

// 0x03 generates the multiplicative group for 0x11B (0x02 does not).
constexpr LogTables make_log_tables() {
  LogTables t;
  std::uint8_t x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[i] = x;
    t.exp[i + 255] = x;
    t.log[x] = static_cast<std::uint8_t>(i);
    x = xtime_mul(x, 0x03);
  }
  t.exp[510] = t.exp[0];
  t.exp[511] = t.exp[1];
  return t;
}

constexpr LogTables kLog = make_log_tables();

using MulTable = std::array<std::array<std::uint8_t, 256>, 256>;

const MulTable& mul_tables() {
  static const MulTable table = [] {
    MulTable t{};
    for (unsigned a = 0; a < 256; ++a)
      for (unsigned b = 0; b < 256; ++b)
        t[a][b] = xtime_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
    return t;
  }();
  return table;
}

}  // namespace

std::ostream& operator<<(std::ostream& os, Gf256 e) {
  const auto flags = os.flags();
  os << "0x" << std::hex << std::setw(2) << std::setfill('0') << unsigned{e.value};
  os.flags(flags);
  return os;
}

namespace gf {

Gf256 mul_log(Gf256 a, Gf256 b) {
  if (a.is_zero() || b.is_zero()) return Gf256{};
  return Gf256(kLog.exp[kLog.log[a.value] + kLog.log[b.value]]);
}

Gf256 mul_table(Gf256 a, Gf256 b) { return Gf256(mul_tables()[a.value][b.value]); }

Gf256 mul(Gf256 a, Gf256 b) {
#if defined(NCDP_GF_FULL_TABLE)
  return mul_table(a, b);
#else
  return mul_log(a, b);
#endif
}

Gf256 inv(Gf256 a) {
  if (a.is_zero()) throw DomainError("zero has no multiplicative inverse in GF(2^8)");
  return Gf256(kLog.exp[255 - kLog.log[a.value]]);
}

Gf256 div(Gf256 a, Gf256 b) { return mul(a, inv(b)); }

void mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, Gf256 c) {
  if (dst.size() < src.size()) throw ShapeError("mul_add_region: destination shorter than source");
  if (c.is_zero()) return;
  if (c.value == 1) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const auto& row = mul_tables()[c.value];
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= row[src[i]];
}

void scale_region(std::span<std::uint8_t> buf, Gf256 c) {
  if (c.value == 1) return;
  const auto& row = mul_tables()[c.value];
  for (auto& b : buf) b = row[b];
}

}  // namespace gf

CoeffVector unit_vector(std::size_t k, std::size_t i) {
  CoeffVector v(k);
  if (i >= k) throw ShapeError("unit_vector: index out of range");
  v[i] = Gf256(1);
  return v;
}

bool is_zero(std::span<const Gf256> v) {
  for (auto e : v)
    if (!e.is_zero()) return false;
  return true;
}

int basis_index(std::span<const Gf256> v) {
  int idx = -1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    if (v[i].value != 1 || idx >= 0) return -1;
    idx = static_cast<int>(i);
  }
  return idx;
}

}  // namespace ncdp
