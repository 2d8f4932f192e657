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


// ncdp command-line harness: compile coding functions, run scenario files,
// and run the three experiment sweeps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ncdp/compiler.hpp"
#include "ncdp/error.hpp"
#include "ncdp/experiments.hpp"
#include "ncdp/netsim.hpp"
#include "ncdp/report.hpp"

namespace {

using namespace ncdp;

template <typename T>
std::string list(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::vector<std::size_t> parse_path_set(const std::string& text) {
  std::vector<std::size_t> out;
  if (text == "none") return out;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, '+')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(part, &used);
      if (used != part.size() || v == 0) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw ConfigError("bad --fail-path '" + text + "': expected path numbers joined by '+', or 'none'");
    }
  }
  return out;
}

void print_header(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::cout << "# ncdp " << cmd << '\n';
  for (const auto& [k, v] : kv) std::cout << "# " << k << '=' << v << '\n';
}

void print_written(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p << '\n';
}

struct Common {
  std::string topology;
  std::uint64_t seed = 1;
  std::size_t packets = 1000;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--topology", c.topology, "Topology file (default: built-in fixture)");
  cmd->add_option("--seed", c.seed, "Base seed")->capture_default_str();
  cmd->add_option("--packets", c.packets, "Payload packets per run")->capture_default_str();
  cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
}

SweepSpec base_spec(ScenarioKind kind, const Common& c) {
  SweepSpec s = default_sweep(kind);
  s.topology_path = c.topology;
  s.seed = c.seed;
  s.packets = c.packets;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear network coding on emulated programmable switches"};
  app.require_subcommand(1);

  // butterfly-rate
  Common br;
  std::size_t br_payload = 4096;
  std::vector<double> br_ratios;
  std::size_t br_reps = 5;
  auto* cmd_br = app.add_subcommand("butterfly-rate", "Received/send ratio vs send rate, coding vs forwarding");
  add_common(cmd_br, br);
  cmd_br->add_option("--payload-size", br_payload, "Payload bytes")->capture_default_str();
  cmd_br->add_option("--send-rate-ratio", br_ratios, "Send rate / max-flow (repeatable; default 0.1..1.0)");
  cmd_br->add_option("--repetitions", br_reps, "Seeds per point")->capture_default_str();

  // diversity-failure
  Common df;
  std::size_t df_payload = 4096;
  std::vector<std::string> df_paths;
  std::vector<double> df_times;
  auto* cmd_df = app.add_subcommand("diversity-failure", "Loss and gaps when diversity paths fail mid-stream");
  add_common(cmd_df, df);
  cmd_df->add_option("--payload-size", df_payload, "Payload bytes")->capture_default_str();
  cmd_df->add_option("--fail-path", df_paths,
                     "Paths failed together, e.g. 2 or 1+2 or none (repeatable; default none,1,2,3,1+2)");
  cmd_df->add_option("--fail-time", df_times,
                     "Failure time as a fraction of the stream duration (repeatable; default 10 spread times)");

  // diversity-bench
  Common db;
  std::vector<std::size_t> db_payloads;
  std::vector<double> db_delays;
  auto* cmd_db = app.add_subcommand("diversity-bench", "Per-role pipeline cost of the diversity code");
  add_common(cmd_db, db);
  cmd_db->add_option("--payload-size", db_payloads, "Payload bytes (repeatable; default 1024,2048,4096)");
  cmd_db->add_option("--delay-ms", db_delays, "Parity first-hop delay in ms (repeatable; default 1,3,5,7,9)");

  // compile
  std::string c_topology, c_function = "diversity", c_out;
  NodeId c_source = 0;
  std::vector<NodeId> c_receivers;
  unsigned c_k = 2, c_paths = 3;
  std::uint64_t c_rate = 0;
  auto* cmd_c = app.add_subcommand("compile", "Emit the configuration document for one stream");
  cmd_c->add_option("--topology", c_topology, "Topology file")->required();
  cmd_c->add_option("--function", c_function, "diversity | butterfly | forwarding")->capture_default_str();
  cmd_c->add_option("--source", c_source, "Source host (default: lowest-id host)");
  cmd_c->add_option("--receiver", c_receivers, "Receiver host (repeatable; default: next hosts by id)");
  cmd_c->add_option("--k", c_k, "Generation size")->capture_default_str();
  cmd_c->add_option("--paths", c_paths, "Diversity paths (k + 1)")->capture_default_str();
  cmd_c->add_option("--rate", c_rate, "Requested rate in bits/s for the admission check (0: none)")->capture_default_str();
  cmd_c->add_option("--out", c_out, "Output file (default: stdout)");

  // simulate
  std::string s_scenario, s_out = "out";
  std::optional<std::uint64_t> s_seed;
  auto* cmd_s = app.add_subcommand("simulate", "Run a scenario file and write trace CSVs");
  cmd_s->add_option("scenario", s_scenario, "Scenario file")->required();
  cmd_s->add_option("--seed", s_seed, "Override the scenario seed");
  cmd_s->add_option("--out-dir", s_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_br->parsed()) {
      SweepSpec s = base_spec(ScenarioKind::ButterflyRate, br);
      s.payload_size = br_payload;
      s.repetitions = br_reps;
      if (!br_ratios.empty()) s.ratios = br_ratios;
      print_header("butterfly-rate", {{"topology", s.topology_path.empty() ? fixture_path("butterfly.topo") : s.topology_path},
                                      {"seed", std::to_string(s.seed)},
                                      {"packets", std::to_string(s.packets)},
                                      {"payload_size", std::to_string(s.payload_size)},
                                      {"send_rate_ratios", list(s.ratios)},
                                      {"repetitions", std::to_string(s.repetitions)},
                                      {"out_dir", br.out_dir}});
      const auto points = butterfly_rate(s);
      const auto summary = summarize(points);
      const Table t = butterfly_table(summary, s.repetitions);
      std::cout << to_csv(t);
      print_written(emit_outputs(br.out_dir, {t, butterfly_points_table(points)}));
    } else if (cmd_df->parsed()) {
      SweepSpec s = base_spec(ScenarioKind::DiversityFailure, df);
      s.payload_size = df_payload;
      if (!df_paths.empty()) {
        s.fail_sets.clear();
        for (const auto& p : df_paths) s.fail_sets.push_back(parse_path_set(p));
      }
      if (!df_times.empty()) s.fail_fractions = df_times;
      std::vector<std::string> sets;
      for (const auto& fs : s.fail_sets) {
        std::string v;
        for (std::size_t i = 0; i < fs.size(); ++i) v += (i ? "+" : "") + std::to_string(fs[i]);
        sets.push_back(v.empty() ? "none" : v);
      }
      print_header("diversity-failure", {{"topology", s.topology_path.empty() ? fixture_path("diversity.topo") : s.topology_path},
                                         {"seed", std::to_string(s.seed)},
                                         {"packets", std::to_string(s.packets)},
                                         {"payload_size", std::to_string(s.payload_size)},
                                         {"fail_paths", list(sets)},
                                         {"fail_times", list(s.fail_fractions)},
                                         {"out_dir", df.out_dir}});
      const Table t = failure_table(diversity_failure(s));
      std::cout << to_csv(t);
      print_written(emit_outputs(df.out_dir, {t}));
    } else if (cmd_db->parsed()) {
      SweepSpec s = base_spec(ScenarioKind::DiversityBench, db);
      if (!db_payloads.empty()) s.payload_sizes = db_payloads;
      if (!db_delays.empty()) s.delays_ms = db_delays;
      print_header("diversity-bench", {{"topology", s.topology_path.empty() ? fixture_path("diversity.topo") : s.topology_path},
                                       {"seed", std::to_string(s.seed)},
                                       {"packets", std::to_string(s.packets)},
                                       {"payload_sizes", list(s.payload_sizes)},
                                       {"delays_ms", list(s.delays_ms)},
                                       {"out_dir", db.out_dir}});
      const Table t = bench_table(diversity_bench(s));
      std::cout << to_csv(t);
      print_written(emit_outputs(db.out_dir, {t}));
    } else if (cmd_c->parsed()) {
      const Topology topo = load_topology(c_topology);
      StreamSpec spec;
      if (c_function == "diversity") spec.function = FunctionKind::Diversity;
      else if (c_function == "butterfly") spec.function = FunctionKind::Butterfly;
      else if (c_function == "forwarding") spec.function = FunctionKind::Forwarding;
      else throw ConfigError("unknown function '" + c_function + "'");
      const std::size_t want_receivers = spec.function == FunctionKind::Butterfly ? 2 : 1;
      const StreamSpec dflt = fixture_stream(topo, spec.function, want_receivers);
      spec = dflt;
      if (c_source != 0) spec.source = c_source;
      if (!c_receivers.empty()) spec.receivers = c_receivers;
      if (c_k == 0 || c_k > 255) throw ConfigError("--k must be in [1, 255]");
      spec.gen_size = static_cast<std::uint8_t>(c_k);
      spec.paths = c_paths;
      spec.rate_bps = c_rate;
      const std::string doc = format_config(compile(topo, spec));
      if (c_out.empty()) {
        std::cout << doc;
      } else {
        std::ofstream out(c_out);
        out << doc;
        if (!out) throw IoError("cannot write '" + c_out + "'");
      }
    } else if (cmd_s->parsed()) {
      Scenario sc = load_scenario(s_scenario);
      if (s_seed) sc.seed = *s_seed;
      validate_config(sc.topology, sc.config);
      print_header("simulate", {{"scenario", s_scenario}, {"seed", std::to_string(sc.seed)}, {"out_dir", s_out}});
      const EventTrace trace = run(sc);
      std::filesystem::create_directories(s_out);
      auto write = [&](const std::string& name, const std::string& content) {
        const auto path = std::filesystem::path(s_out) / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        std::cout << "wrote " << path.string() << '\n';
      };
      for (const auto& [host, log] : trace.deliveries) {
        write("receiver_" + std::to_string(host) + ".csv", deliveries_csv(log));
        if (log.size() >= 2) std::cout << "receiver " << host << " rate_bps=" << fmt_num(received_rate(trace, host)) << '\n';
      }
      for (const auto& [id, sw] : trace.switches) write("switch_" + std::to_string(id) + "_counters.csv", counters_csv(sw));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
