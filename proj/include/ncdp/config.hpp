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

// Configuration document emitted by the control plane and loaded by switches
// and hosts. Line-oriented text, one primitive table entry per line:
//
//   stream <id> function=<diversity|butterfly|forwarding> k=<k> paths=<p> source=<host> receivers=<h,..> rate=<bps>
//   host <id> sender stream=<id> port=<egress> first=<PRIMITIVE>
//   host <id> receiver stream=<id>
//   switch <id> max_recirc=<n> lookup_ns=<ns> byte_ps=<ps> recirc_ns=<ns>
//   bank <switch> <bank> stream=<id> k=<k> ring=<R>
//   entry <switch> stream=<id> match=<PRIMITIVE> [in=<port>] <primitive> <params...>
//
// with primitive params
//   split   bank=<b> assign=<port>/<NEXT>|-,...        (by generation index)
//   code    bank=<b> row=<hex coeffs>@<port>/<NEXT> ...
//   forward out=<port>/<NEXT>,...
//   gather  bank=<b>
//   decode  bank=<b> port=<delivery port>
//
// Consecutive entry lines with the same key form one table entry whose
// actions run in order.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ncdp/switch.hpp"
#include "ncdp/topology.hpp"

namespace ncdp {

enum class FunctionKind { Diversity, Butterfly, Forwarding };

std::string_view to_string(FunctionKind k);

struct StreamSpec {
  StreamId id = 1;
  NodeId source = 0;
  std::vector<NodeId> receivers;
  std::uint64_t rate_bps = 0;  // 0: no admission check
  std::uint8_t gen_size = 2;
  FunctionKind function = FunctionKind::Diversity;
  std::size_t paths = 3;  // diversity only: k data paths + 1 parity path

  friend bool operator==(const StreamSpec&, const StreamSpec&) = default;
};

struct HostRole {
  NodeId host = 0;
  StreamId stream = 0;
  bool sender = false;
  PortId port = 0;                         // sender egress port
  Primitive first = Primitive::Forward;    // next_primitive stamped on sent packets

  friend bool operator==(const HostRole&, const HostRole&) = default;
};

struct ConfigDocument {
  std::vector<StreamSpec> streams;
  std::vector<HostRole> hosts;
  std::map<NodeId, SwitchConfig> switches;

  const StreamSpec& stream(StreamId id) const;
  friend bool operator==(const ConfigDocument&, const ConfigDocument&) = default;
};

std::string format_config(const ConfigDocument& doc);
ConfigDocument parse_config(std::istream& in);
ConfigDocument parse_config_text(const std::string& text);
ConfigDocument load_config(const std::string& path);

/// Throws ConfigError unless every port the document references is an
/// egress port of its node (or the recirculation port) and every bank
/// referenced by an action exists.
void validate_config(const Topology& topo, const ConfigDocument& doc);

}  // namespace ncdp
