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


#include "ncdp/packet.hpp"

#include <array>
#include <cctype>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

constexpr std::array<std::string_view, 7> kPrimitiveNames = {
    "", "FORWARD", "SPLIT", "CODE", "GATHER", "DECODE", "DELIVER"};

template <typename T>
void put_be(Bytes& out, T v) {
  for (int shift = static_cast<int>(sizeof(T) * 8) - 8; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(v >> shift));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  template <typename T>
  T take(const char* field) {
    need(sizeof(T), field);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v = static_cast<T>((v << 8) | data_[pos_ + i]);
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::uint8_t> take_bytes(std::size_t n, const char* field) {
    need(n, field);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n, const char* field) const {
    if (data_.size() - pos_ < n)
      throw ParseError(field, "truncated image: need " + std::to_string(n) + " bytes at offset " +
                                  std::to_string(pos_) + ", have " + std::to_string(data_.size() - pos_));
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(Primitive p) {
  const auto v = static_cast<std::uint8_t>(p);
  return is_defined_primitive(v) ? kPrimitiveNames[v] : std::string_view("UNDEFINED");
}

std::optional<Primitive> primitive_from_string(std::string_view s) {
  for (std::uint8_t v = 1; v < kPrimitiveNames.size(); ++v)
    if (kPrimitiveNames[v] == s) return static_cast<Primitive>(v);
  return std::nullopt;
}

bool is_defined_primitive(std::uint8_t v) { return v >= 1 && v <= 6; }

Bytes serialize(const CodingHeader& h, std::span<const std::uint8_t> payload) {
  if (h.version != kHeaderVersion) throw EncodeError("version must be 1");
  if (!is_defined_primitive(static_cast<std::uint8_t>(h.next_primitive)))
    throw EncodeError("next_primitive is not a defined primitive");
  if (h.gen_size == 0) throw EncodeError("gen_size must be >= 1");
  if (h.coeffs.size() != h.gen_size) throw EncodeError("coeffs length differs from gen_size");
  if (h.telemetry.size() > 0xFF) throw EncodeError("more than 255 telemetry records");
  for (std::size_t i = 1; i < h.telemetry.size(); ++i)
    if (h.telemetry[i].ingress_ts < h.telemetry[i - 1].ingress_ts)
      throw EncodeError("telemetry records not ordered by ingress_ts");
  if (payload.size() > 0xFFFF) throw EncodeError("payload longer than 65535 bytes");

  Bytes out;
  out.reserve(wire_size(h.coeffs.size(), h.telemetry.size(), payload.size()));
  out.push_back(h.version);
  put_be<std::uint16_t>(out, h.stream_id);
  put_be<std::uint32_t>(out, h.batch_number);
  out.push_back(static_cast<std::uint8_t>(h.next_primitive));
  out.push_back(h.gen_size);
  for (auto c : h.coeffs) out.push_back(c.value);
  put_be<std::uint16_t>(out, h.orig_len);
  out.push_back(static_cast<std::uint8_t>(h.telemetry.size()));
  for (const auto& t : h.telemetry) {
    put_be<std::uint16_t>(out, t.switch_id);
    put_be<std::uint64_t>(out, t.ingress_ts);
    put_be<std::uint64_t>(out, t.egress_ts);
  }
  put_be<std::uint16_t>(out, static_cast<std::uint16_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

ParsedPacket parse(std::span<const std::uint8_t> image) {
  Reader r(image);
  ParsedPacket p;
  CodingHeader& h = p.header;
  h.version = r.take<std::uint8_t>("version");
  if (h.version != kHeaderVersion)
    throw ParseError("version", "unknown version " + std::to_string(h.version));
  h.stream_id = r.take<std::uint16_t>("stream_id");
  h.batch_number = r.take<std::uint32_t>("batch_number");
  const auto np = r.take<std::uint8_t>("next_primitive");
  if (!is_defined_primitive(np))
    throw ParseError("next_primitive", "undefined primitive " + std::to_string(np));
  h.next_primitive = static_cast<Primitive>(np);
  h.gen_size = r.take<std::uint8_t>("gen_size");
  if (h.gen_size == 0) throw ParseError("gen_size", "gen_size must be >= 1");
  const auto coeffs = r.take_bytes(h.gen_size, "coeffs");
  h.coeffs.clear();
  for (auto b : coeffs) h.coeffs.emplace_back(b);
  h.orig_len = r.take<std::uint16_t>("orig_len");
  const auto count = r.take<std::uint8_t>("telemetry_count");
  h.telemetry.resize(count);
  for (auto& t : h.telemetry) {
    t.switch_id = r.take<std::uint16_t>("telemetry");
    t.ingress_ts = r.take<std::uint64_t>("telemetry");
    t.egress_ts = r.take<std::uint64_t>("telemetry");
  }
  for (std::size_t i = 1; i < h.telemetry.size(); ++i)
    if (h.telemetry[i].ingress_ts < h.telemetry[i - 1].ingress_ts)
      throw ParseError("telemetry", "records not ordered by ingress_ts");
  const auto payload_len = r.take<std::uint16_t>("payload_len");
  const auto payload = r.take_bytes(payload_len, "payload");
  if (r.remaining() != 0)
    throw ParseError("payload", std::to_string(r.remaining()) + " trailing bytes after payload");
  p.payload.assign(payload.begin(), payload.end());
  return p;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

Bytes from_hex(std::string_view text) {
  Bytes out;
  int hi = -1;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ParseError("hex", std::string("invalid hex digit '") + c + "'");
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<std::uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  if (hi >= 0) throw ParseError("hex", "odd number of hex digits");
  return out;
}

}  // namespace ncdp
