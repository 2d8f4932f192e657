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


#include "ncdp/config.hpp"

#include <fstream>
#include <sstream>

#include "ncdp/error.hpp"
#include "ncdp/topology.hpp"

namespace ncdp {
namespace {

struct LineParser {
  int line_no;
  std::map<std::string, std::vector<std::string>> kv;
  std::vector<std::string> positional;

  explicit LineParser(int n, std::istringstream& ls) : line_no(n) {
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) positional.push_back(tok);
      else kv[tok.substr(0, eq)].push_back(tok.substr(eq + 1));
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line_no) + ": " + msg);
  }

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  const std::string& get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) fail("missing '" + key + "='");
    if (it->second.size() != 1) fail("'" + key + "=' given more than once");
    return it->second.front();
  }

  std::uint64_t num(const std::string& text, std::uint64_t max) const {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(text, &used);
      if (used != text.size() || v > max) throw std::out_of_range(text);
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + text + "'");
    }
  }

  std::uint64_t get_num(const std::string& key, std::uint64_t max) const { return num(get(key), max); }

  std::uint64_t pos_num(std::size_t i, std::uint64_t max) const {
    if (i >= positional.size()) fail("missing positional argument " + std::to_string(i));
    return num(positional[i], max);
  }

  Primitive primitive(const std::string& text) const {
    auto p = primitive_from_string(text);
    if (!p) fail("unknown primitive '" + text + "'");
    return *p;
  }

  OutputSpec output(const std::string& text) const {
    const auto slash = text.find('/');
    if (slash == std::string::npos) fail("output '" + text + "' is not <port>/<NEXT>");
    return OutputSpec{static_cast<PortId>(num(text.substr(0, slash), 0xFFFF)), primitive(text.substr(slash + 1))};
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string fmt_output(const OutputSpec& o) { return std::to_string(o.port) + "/" + std::string(to_string(o.next)); }

std::string fmt_coeffs(const CoeffVector& c) {
  Bytes b;
  for (auto e : c) b.push_back(e.value);
  return to_hex(b);
}

std::string fmt_action(const PrimitiveConfig& a) {
  std::ostringstream os;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SplitParams>) {
          os << "split bank=" << p.bank << " assign=";
          for (std::size_t i = 0; i < p.assign.size(); ++i)
            os << (i ? "," : "") << (p.assign[i] ? fmt_output(*p.assign[i]) : "-");
        } else if constexpr (std::is_same_v<T, CodeParams>) {
          os << "code bank=" << p.bank;
          for (const auto& r : p.rows) os << " row=" << fmt_coeffs(r.coeffs) << '@' << fmt_output(r.out);
        } else if constexpr (std::is_same_v<T, ForwardParams>) {
          os << "forward out=";
          for (std::size_t i = 0; i < p.outputs.size(); ++i) os << (i ? "," : "") << fmt_output(p.outputs[i]);
        } else if constexpr (std::is_same_v<T, GatherParams>) {
          os << "gather bank=" << p.bank;
        } else {
          os << "decode bank=" << p.bank << " port=" << p.deliver_port;
        }
      },
      a.params);
  return os.str();
}

std::optional<FunctionKind> function_from_string(const std::string& s) {
  if (s == "diversity") return FunctionKind::Diversity;
  if (s == "butterfly") return FunctionKind::Butterfly;
  if (s == "forwarding") return FunctionKind::Forwarding;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::Diversity: return "diversity";
    case FunctionKind::Butterfly: return "butterfly";
    case FunctionKind::Forwarding: return "forwarding";
  }
  return "?";
}

const StreamSpec& ConfigDocument::stream(StreamId id) const {
  for (const auto& s : streams)
    if (s.id == id) return s;
  throw ConfigError("no stream " + std::to_string(id));
}

std::string format_config(const ConfigDocument& doc) {
  std::ostringstream os;
  os << "# ncdp config v1\n";
  for (const auto& s : doc.streams) {
    os << "stream " << s.id << " function=" << to_string(s.function) << " k=" << unsigned{s.gen_size}
       << " paths=" << s.paths << " source=" << s.source << " receivers=";
    for (std::size_t i = 0; i < s.receivers.size(); ++i) os << (i ? "," : "") << s.receivers[i];
    os << " rate=" << s.rate_bps << '\n';
  }
  for (const auto& h : doc.hosts) {
    os << "host " << h.host;
    if (h.sender) os << " sender stream=" << h.stream << " port=" << h.port << " first=" << to_string(h.first);
    else os << " receiver stream=" << h.stream;
    os << '\n';
  }
  for (const auto& [id, sw] : doc.switches) {
    os << "switch " << id << " max_recirc=" << sw.max_recirc << " lookup_ns=" << sw.cost.lookup_ns
       << " byte_ps=" << sw.cost.byte_ps << " recirc_ns=" << sw.cost.recirc_ns << '\n';
    for (const auto& b : sw.banks)
      os << "bank " << id << ' ' << b.id << " stream=" << b.stream << " k=" << unsigned{b.gen_size}
         << " ring=" << b.ring << '\n';
    for (const auto& e : sw.entries) {
      for (const auto& a : e.actions) {
        os << "entry " << id << " stream=" << e.key.stream << " match=" << to_string(e.key.match);
        if (e.key.in_port) os << " in=" << *e.key.in_port;
        os << ' ' << fmt_action(a) << '\n';
      }
    }
  }
  return os.str();
}

ConfigDocument parse_config(std::istream& in) {
  ConfigDocument doc;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string word;
    if (!(ls >> word)) continue;
    LineParser lp(line_no, ls);

    if (word == "stream") {
      StreamSpec s;
      s.id = static_cast<StreamId>(lp.pos_num(0, 0xFFFF));
      auto fn = function_from_string(lp.get("function"));
      if (!fn) lp.fail("unknown function '" + lp.get("function") + "'");
      s.function = *fn;
      s.gen_size = static_cast<std::uint8_t>(lp.get_num("k", 255));
      if (s.gen_size == 0) lp.fail("k must be >= 1");
      s.paths = lp.get_num("paths", 255);
      s.source = static_cast<NodeId>(lp.get_num("source", 0xFFFFFFFF));
      for (const auto& r : split_list(lp.get("receivers"))) s.receivers.push_back(static_cast<NodeId>(lp.num(r, 0xFFFFFFFF)));
      s.rate_bps = lp.get_num("rate", ~0ULL);
      doc.streams.push_back(std::move(s));
    } else if (word == "host") {
      HostRole h;
      h.host = static_cast<NodeId>(lp.pos_num(0, 0xFFFFFFFF));
      if (lp.positional.size() < 2) lp.fail("expected 'sender' or 'receiver'");
      h.stream = static_cast<StreamId>(lp.get_num("stream", 0xFFFF));
      if (lp.positional[1] == "sender") {
        h.sender = true;
        h.port = static_cast<PortId>(lp.get_num("port", 0xFFFF));
        h.first = lp.primitive(lp.get("first"));
      } else if (lp.positional[1] != "receiver") {
        lp.fail("expected 'sender' or 'receiver'");
      }
      doc.hosts.push_back(h);
    } else if (word == "switch") {
      const auto id = static_cast<NodeId>(lp.pos_num(0, 0xFFFF));
      SwitchConfig& sw = doc.switches[id];
      sw.id = id;
      if (lp.has("max_recirc")) sw.max_recirc = static_cast<int>(lp.get_num("max_recirc", 1000));
      if (lp.has("lookup_ns")) sw.cost.lookup_ns = static_cast<Nanos>(lp.get_num("lookup_ns", 1ULL << 40));
      if (lp.has("byte_ps")) sw.cost.byte_ps = static_cast<Nanos>(lp.get_num("byte_ps", 1ULL << 40));
      if (lp.has("recirc_ns")) sw.cost.recirc_ns = static_cast<Nanos>(lp.get_num("recirc_ns", 1ULL << 40));
    } else if (word == "bank") {
      const auto id = static_cast<NodeId>(lp.pos_num(0, 0xFFFF));
      auto it = doc.switches.find(id);
      if (it == doc.switches.end()) lp.fail("bank for undeclared switch " + std::to_string(id));
      BankSpec b;
      b.id = static_cast<BankId>(lp.pos_num(1, 0xFFFF));
      b.stream = static_cast<StreamId>(lp.get_num("stream", 0xFFFF));
      b.gen_size = static_cast<std::uint8_t>(lp.get_num("k", 255));
      b.ring = lp.get_num("ring", 1 << 20);
      if (b.gen_size == 0 || b.ring == 0) lp.fail("bank needs k >= 1 and ring >= 1");
      it->second.banks.push_back(b);
    } else if (word == "entry") {
      const auto id = static_cast<NodeId>(lp.pos_num(0, 0xFFFF));
      auto it = doc.switches.find(id);
      if (it == doc.switches.end()) lp.fail("entry for undeclared switch " + std::to_string(id));
      if (lp.positional.size() != 2) lp.fail("expected exactly one primitive name");
      TableKey key;
      key.stream = static_cast<StreamId>(lp.get_num("stream", 0xFFFF));
      key.match = lp.primitive(lp.get("match"));
      if (lp.has("in")) key.in_port = static_cast<PortId>(lp.get_num("in", 0xFFFF));

      const std::string& kind = lp.positional[1];
      PrimitiveConfig action;
      if (kind == "split") {
        SplitParams p;
        p.bank = static_cast<BankId>(lp.get_num("bank", 0xFFFF));
        for (const auto& a : split_list(lp.get("assign"))) {
          if (a == "-") p.assign.emplace_back(std::nullopt);
          else p.assign.emplace_back(lp.output(a));
        }
        action.params = std::move(p);
      } else if (kind == "code") {
        CodeParams p;
        p.bank = static_cast<BankId>(lp.get_num("bank", 0xFFFF));
        if (!lp.has("row")) lp.fail("code needs at least one row=");
        for (const auto& r : lp.kv.at("row")) {
          const auto at = r.find('@');
          if (at == std::string::npos) lp.fail("row '" + r + "' is not <hex>@<port>/<NEXT>");
          CodeRowSpec row;
          Bytes coeffs;
          try {
            coeffs = from_hex(r.substr(0, at));
          } catch (const Error&) {
            lp.fail("bad coefficient hex in row '" + r + "'");
          }
          for (auto c : coeffs) row.coeffs.emplace_back(c);
          row.out = lp.output(r.substr(at + 1));
          p.rows.push_back(std::move(row));
        }
        action.params = std::move(p);
      } else if (kind == "forward") {
        ForwardParams p;
        const std::string& outs = lp.get("out");
        if (!outs.empty())
          for (const auto& o : split_list(outs)) p.outputs.push_back(lp.output(o));
        action.params = std::move(p);
      } else if (kind == "gather") {
        action.params = GatherParams{static_cast<BankId>(lp.get_num("bank", 0xFFFF))};
      } else if (kind == "decode") {
        action.params = DecodeParams{static_cast<BankId>(lp.get_num("bank", 0xFFFF)),
                                     static_cast<PortId>(lp.get_num("port", 0xFFFF))};
      } else {
        lp.fail("unknown primitive '" + kind + "'");
      }

      auto& entries = it->second.entries;
      if (!entries.empty() && entries.back().key == key) {
        entries.back().actions.push_back(std::move(action));
      } else {
        for (const auto& e : entries)
          if (e.key == key) lp.fail("table key repeated non-contiguously");
        entries.push_back(TableEntry{key, {std::move(action)}});
      }
    } else {
      lp.fail("unknown directive '" + word + "'");
    }
  }
  return doc;
}

ConfigDocument parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void validate_config(const Topology& topo, const ConfigDocument& doc) {
  auto check_port = [&](NodeId node, PortId port, const std::string& what) {
    if (port == kRecirculatePort) return;
    if (!topo.link_from_port(node, port))
      throw ConfigError(what + " on node " + std::to_string(node) + " references missing egress port " +
                        std::to_string(port));
  };
  for (const auto& h : doc.hosts) {
    if (!topo.has_node(h.host) || topo.kind(h.host) != NodeKind::Host)
      throw ConfigError("host role for non-host node " + std::to_string(h.host));
    if (h.sender) check_port(h.host, h.port, "sender");
  }
  for (const auto& [id, sw] : doc.switches) {
    if (!topo.has_node(id) || topo.kind(id) != NodeKind::Switch)
      throw ConfigError("switch config for non-switch node " + std::to_string(id));
    auto has_bank = [&](BankId b) {
      for (const auto& bs : sw.banks)
        if (bs.id == b) return true;
      return false;
    };
    for (const auto& e : sw.entries) {
      if (e.key.in_port && *e.key.in_port != kRecirculatePort) {
        bool found = false;
        for (LinkIndex li : topo.in_links(id)) found |= topo.link(li).dst_port == *e.key.in_port;
        if (!found) throw ConfigError("entry on switch " + std::to_string(id) + " matches missing ingress port " +
                                      std::to_string(*e.key.in_port));
      }
      for (const auto& a : e.actions) {
        std::visit(
            [&](const auto& p) {
              using T = std::decay_t<decltype(p)>;
              if constexpr (std::is_same_v<T, ForwardParams>) {
                for (const auto& o : p.outputs) check_port(id, o.port, "forward");
              } else {
                if (!has_bank(p.bank))
                  throw ConfigError("switch " + std::to_string(id) + " action references missing bank " +
                                    std::to_string(p.bank));
                if constexpr (std::is_same_v<T, SplitParams>) {
                  for (const auto& o : p.assign)
                    if (o) check_port(id, o->port, "split");
                } else if constexpr (std::is_same_v<T, CodeParams>) {
                  for (const auto& r : p.rows) check_port(id, r.out.port, "code");
                } else if constexpr (std::is_same_v<T, DecodeParams>) {
                  check_port(id, p.deliver_port, "decode");
                }
              }
            },
            a.params);
      }
    }
  }
}

}  // namespace ncdp
