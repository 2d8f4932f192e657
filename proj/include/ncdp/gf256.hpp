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

// Arithmetic in GF(2^8) with reduction polynomial x^8+x^4+x^3+x+1 (0x11B).

#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace ncdp {

inline constexpr unsigned kFieldPolynomial = 0x11B;

/// One element of GF(2^8).
struct Gf256 {
  std::uint8_t value = 0;

  constexpr Gf256() = default;
  constexpr explicit Gf256(std::uint8_t v) : value(v) {}

  constexpr bool is_zero() const { return value == 0; }
  friend constexpr bool operator==(Gf256, Gf256) = default;
  friend constexpr auto operator<=>(Gf256, Gf256) = default;
};

std::ostream& operator<<(std::ostream& os, Gf256 e);

namespace gf {

constexpr Gf256 add(Gf256 a, Gf256 b) { return Gf256(static_cast<std::uint8_t>(a.value ^ b.value)); }
constexpr Gf256 sub(Gf256 a, Gf256 b) { return add(a, b); }

Gf256 mul(Gf256 a, Gf256 b);
/// Throws DomainError for zero.
Gf256 inv(Gf256 a);
Gf256 div(Gf256 a, Gf256 b);

// Both multiplication backends are always available; mul() uses one of them.
Gf256 mul_log(Gf256 a, Gf256 b);
Gf256 mul_table(Gf256 a, Gf256 b);

/// dst[i] ^= c * src[i] over the common prefix; dst.size() must be >= src.size().
void mul_add_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, Gf256 c);
/// buf[i] = c * buf[i]
void scale_region(std::span<std::uint8_t> buf, Gf256 c);

}  // namespace gf

inline Gf256 operator+(Gf256 a, Gf256 b) { return gf::add(a, b); }
inline Gf256 operator-(Gf256 a, Gf256 b) { return gf::sub(a, b); }
inline Gf256 operator*(Gf256 a, Gf256 b) { return gf::mul(a, b); }
inline Gf256 operator/(Gf256 a, Gf256 b) { return gf::div(a, b); }
inline Gf256& operator+=(Gf256& a, Gf256 b) { return a = a + b; }
inline Gf256& operator*=(Gf256& a, Gf256 b) { return a = a * b; }

/// Coefficients of one coded packet over its batch's originals.
using CoeffVector = std::vector<Gf256>;
/// One payload viewed as a vector over GF(2^8).
using Symbol = std::vector<std::uint8_t>;

CoeffVector unit_vector(std::size_t k, std::size_t i);
bool is_zero(std::span<const Gf256> v);
/// Index i when v == e_i, otherwise -1.
int basis_index(std::span<const Gf256> v);

}  // namespace ncdp
