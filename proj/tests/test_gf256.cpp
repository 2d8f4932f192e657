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

#include <random>

#include "ncdp/error.hpp"
#include "ncdp/gf256.hpp"

using namespace ncdp;

namespace {

// Carry-less 16-bit product, then long division by x^8+x^4+x^3+x+1.
std::uint8_t clmul_reduce(std::uint8_t a, std::uint8_t b) {
  std::uint16_t p = 0;
  for (int i = 0; i < 8; ++i)
    if (b & (1 << i)) p ^= static_cast<std::uint16_t>(a << i);
  for (int bit = 15; bit >= 8; --bit)
    if (p & (1 << bit)) p ^= static_cast<std::uint16_t>(0x11B << (bit - 8));
  return static_cast<std::uint8_t>(p);
}

Gf256 g(unsigned v) { return Gf256(static_cast<std::uint8_t>(v)); }

}  // namespace

TEST_CASE("add and sub are xor") {
  CHECK(gf::add(g(0x57), g(0x57)) == g(0x00));
  CHECK(gf::add(g(0xAB), g(0x00)) == g(0xAB));
  CHECK(gf::add(g(0x57), g(0x83)) == g(0xD4));
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b) {
      REQUIRE(gf::add(g(a), g(b)).value == (a ^ b));
      REQUIRE(gf::sub(g(a), g(b)) == gf::add(g(a), g(b)));
      REQUIRE(gf::add(gf::add(g(a), g(b)), g(b)) == g(a));
    }
}

TEST_CASE("mul examples") {
  CHECK(gf::mul(g(0x01), g(0x9C)) == g(0x9C));
  CHECK(gf::mul(g(0x00), g(0x9C)) == g(0x00));
  CHECK(gf::mul(g(0x02), g(0x80)) == g(0x1B));
  CHECK(gf::mul(g(0x57), g(0x83)) == g(0xC1));
}

TEST_CASE("both multiplication backends agree with clmul oracle on all pairs") {
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b) {
      const std::uint8_t want = clmul_reduce(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
      REQUIRE(gf::mul_log(g(a), g(b)).value == want);
      REQUIRE(gf::mul_table(g(a), g(b)).value == want);
      REQUIRE(gf::mul(g(a), g(b)).value == want);
    }
}

TEST_CASE("inverse matches exhaustive search") {
  CHECK(gf::inv(g(0x01)) == g(0x01));
  CHECK(gf::inv(g(0x02)) == g(0x8D));
  CHECK_THROWS_AS(gf::inv(g(0)), DomainError);
  CHECK_THROWS_AS(gf::div(g(5), g(0)), DomainError);
  for (unsigned a = 1; a < 256; ++a) {
    unsigned found = 0;
    int hits = 0;
    for (unsigned b = 1; b < 256; ++b)
      if (clmul_reduce(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)) == 1) {
        found = b;
        ++hits;
      }
    REQUIRE(hits == 1);
    REQUIRE(gf::inv(g(a)).value == found);
    REQUIRE(gf::div(g(1), g(a)).value == found);
  }
}

TEST_CASE("field axioms on 10000 random triples") {
  std::mt19937 rng(20261018);
  std::uniform_int_distribution<unsigned> byte(0, 255);
  for (int i = 0; i < 10000; ++i) {
    const Gf256 a = g(byte(rng)), b = g(byte(rng)), c = g(byte(rng));
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a + b == b + a);
    REQUIRE(a * b == b * a);
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE(a + g(0) == a);
    REQUIRE(a * g(1) == a);
    REQUIRE(a + a == g(0));
    if (!a.is_zero()) {
      REQUIRE(a * gf::inv(a) == g(1));
      REQUIRE((b / a) * a == b);
    }
  }
}

TEST_CASE("region operations match scalar loops") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<unsigned> byte(0, 255);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> dst(37), src(29);
    for (auto& x : dst) x = static_cast<std::uint8_t>(byte(rng));
    for (auto& x : src) x = static_cast<std::uint8_t>(byte(rng));
    const Gf256 c = g(byte(rng));
    auto want = dst;
    for (std::size_t i = 0; i < src.size(); ++i) want[i] ^= clmul_reduce(c.value, src[i]);
    gf::mul_add_region(dst, src, c);
    REQUIRE(dst == want);

    auto scaled = dst;
    for (auto& x : want) x = clmul_reduce(c.value, x);
    gf::scale_region(scaled, c);
    REQUIRE(scaled == want);
  }
}

TEST_CASE("unit vectors and basis index") {
  CHECK(unit_vector(3, 1) == CoeffVector{g(0), g(1), g(0)});
  CHECK(basis_index(unit_vector(4, 3)) == 3);
  CHECK(basis_index(CoeffVector{g(1), g(1)}) == -1);
  CHECK(basis_index(CoeffVector{g(0), g(2)}) == -1);
  CHECK(basis_index(CoeffVector{g(0), g(0)}) == -1);
  CHECK(is_zero(CoeffVector{g(0), g(0)}));
  CHECK_FALSE(is_zero(CoeffVector{g(0), g(9)}));
}
