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

// Coding header and its big-endian wire image:
//
//   off  size  field
//   0    1     version (=1)
//   1    2     stream_id
//   3    4     batch_number
//   7    1     next_primitive
//   8    1     gen_size k
//   9    k     coeffs
//   9+k  2     orig_len
//   11+k 1     telemetry_count t
//   12+k 18*t  telemetry (switch_id:2, ingress_ts:8, egress_ts:8)
//   ..   2     payload_len
//   ..   n     payload

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ncdp/gf256.hpp"

namespace ncdp {

using Bytes = std::vector<std::uint8_t>;
using Nanos = std::int64_t;
using PortId = std::uint16_t;
using NodeId = std::uint32_t;
using StreamId = std::uint16_t;

inline constexpr std::uint8_t kHeaderVersion = 1;
inline constexpr std::size_t kTelemetryRecordSize = 18;
inline constexpr std::size_t kFixedHeaderSize = 14;  // every field except coeffs, telemetry, payload

enum class Primitive : std::uint8_t {
  Forward = 1,
  Split = 2,
  Code = 3,
  Gather = 4,
  Decode = 5,
  Deliver = 6,
};

std::string_view to_string(Primitive p);
std::optional<Primitive> primitive_from_string(std::string_view s);
bool is_defined_primitive(std::uint8_t v);

struct TelemetryRecord {
  std::uint16_t switch_id = 0;
  std::uint64_t ingress_ts = 0;
  std::uint64_t egress_ts = 0;

  friend bool operator==(const TelemetryRecord&, const TelemetryRecord&) = default;
};

struct CodingHeader {
  std::uint8_t version = kHeaderVersion;
  StreamId stream_id = 0;
  std::uint32_t batch_number = 0;
  Primitive next_primitive = Primitive::Forward;
  std::uint8_t gen_size = 1;
  CoeffVector coeffs{Gf256(1)};
  std::uint16_t orig_len = 0;
  std::vector<TelemetryRecord> telemetry;

  friend bool operator==(const CodingHeader&, const CodingHeader&) = default;
};

/// Size of the wire image for a header with k coefficients and t telemetry records.
constexpr std::size_t wire_size(std::size_t k, std::size_t telemetry, std::size_t payload) {
  return kFixedHeaderSize + k + kTelemetryRecordSize * telemetry + payload;
}

/// Throws EncodeError if the header violates its invariants or the payload
/// does not fit the 16-bit length field.
Bytes serialize(const CodingHeader& header, std::span<const std::uint8_t> payload);

struct ParsedPacket {
  CodingHeader header;
  Bytes payload;
};

/// Exact inverse of serialize(). Throws ParseError naming the offending field
/// on truncated, over-long, or otherwise malformed images.
ParsedPacket parse(std::span<const std::uint8_t> image);

/// State that travels with a packet inside the emulation but is not on the wire.
struct PacketMeta {
  PortId ingress_port = 0;
  Nanos ingress_ts = 0;
  int recirc_depth = 0;
  std::optional<PortId> generated_port;  // set on packets produced by clone+recirculate
  bool end_of_stream = false;            // last packet of a sender's stream
  bool filler = false;                   // zero symbol padding out a stream's last batch
  std::uint64_t sequence = 0;            // sender-side sequence number (diagnostics only)
};

struct Packet {
  CodingHeader header;
  Bytes payload;
  PacketMeta meta;

  std::size_t wire_size() const {
    return ncdp::wire_size(header.coeffs.size(), header.telemetry.size(), payload.size());
  }
};

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Accepts hex digits with optional whitespace; throws ParseError("hex") otherwise.
Bytes from_hex(std::string_view text);

}  // namespace ncdp
