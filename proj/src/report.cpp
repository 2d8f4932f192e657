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


#include "ncdp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ncdp/error.hpp"

namespace ncdp {
namespace {

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  throw ConfigError("table " + t.name + " has no column '" + name + "'");
}

double cell_num(const Table& t, const std::vector<std::string>& row, const std::string& col) {
  return std::stod(row.at(column(t, col)));
}

std::string svg_header(int w, int h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
     << w << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string join(const std::vector<std::size_t>& v) {
  if (v.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "+" : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

Table parse_csv(const std::string& name, const std::string& text) {
  Table t;
  t.name = name;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != t.columns.size()) throw ParseError("csv", "row width differs from header in " + name);
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

Table butterfly_table(const std::vector<ButterflySummary>& summary, std::size_t reps) {
  Table t{"butterfly_rate", {"mode", "ratio", "receiver", "reps", "mean", "stddev"}, {}};
  for (const auto& s : summary)
    t.rows.push_back({s.mode, fmt_num(s.ratio), std::to_string(s.receiver), std::to_string(reps), fmt_num(s.mean),
                      fmt_num(s.stddev)});
  return t;
}

Table butterfly_points_table(const std::vector<ButterflyPoint>& points) {
  Table t{"butterfly_rate_points",
          {"mode", "ratio", "receiver", "rep", "seed", "maxflow_bps", "send_bps", "recv_bps", "recv_over_send",
           "delivered"},
          {}};
  for (const auto& p : points)
    t.rows.push_back({p.mode, fmt_num(p.ratio), std::to_string(p.receiver), std::to_string(p.rep),
                      std::to_string(p.seed), fmt_num(p.maxflow_bps), fmt_num(p.send_bps), fmt_num(p.recv_bps),
                      fmt_num(p.recv_over_send), std::to_string(p.delivered)});
  return t;
}

Table failure_table(const std::vector<FailurePoint>& points) {
  Table t{"diversity_failure",
          {"failed_paths", "fail_fraction", "fail_time_ns", "sent", "delivered", "loss", "byte_exact", "in_order",
           "max_gap_ns", "unmatched_drops", "loop_guarded"},
          {}};
  for (const auto& p : points)
    t.rows.push_back({join(p.failed_paths), fmt_num(p.fail_fraction), std::to_string(p.fail_time), std::to_string(p.sent),
                      std::to_string(p.delivered), std::to_string(p.loss), p.byte_exact ? "1" : "0",
                      p.in_order ? "1" : "0", std::to_string(p.max_gap_ns), std::to_string(p.unmatched_drops),
                      std::to_string(p.loop_guarded)});
  return t;
}

Table bench_table(const std::vector<BenchPoint>& points) {
  Table t{"diversity_bench",
          {"payload_size", "delay_ms", "differential_ms", "role", "branch", "traversals", "mean_lookups",
           "mean_bytes", "mean_clones", "mean_recirculations", "mean_latency_ns"},
          {}};
  for (const auto& p : points)
    t.rows.push_back({std::to_string(p.payload_size), fmt_num(p.delay_ms), fmt_num(p.differential_ms),
                      std::string(to_string(p.role)), std::string(to_string(p.branch)), std::to_string(p.traversals),
                      fmt_num(p.mean_lookups), fmt_num(p.mean_bytes), fmt_num(p.mean_clones),
                      fmt_num(p.mean_recirculations), fmt_num(p.mean_latency_ns)});
  return t;
}

std::string butterfly_svg(const Table& t) {
  // Series value at a ratio: the lowest receiver mean.
  std::map<std::string, std::map<double, double>> series;
  for (const auto& r : t.rows) {
    const std::string& mode = r.at(column(t, "mode"));
    const double x = cell_num(t, r, "ratio");
    const double y = cell_num(t, r, "mean");
    auto [it, fresh] = series[mode].emplace(x, y);
    if (!fresh) it->second = std::min(it->second, y);
  }
  const int w = 640, h = 420, left = 60, right = 150, top = 30, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  double ymax = 1.1;
  for (const auto& [m, pts] : series)
    for (const auto& [x, y] : pts) ymax = std::max(ymax, y * 1.05);
  auto px = [&](double x) { return left + x * pw; };
  auto py = [&](double y) { return top + ph - y / ymax * ph; };

  std::ostringstream os;
  os << svg_header(w, h);
  os << "<text x=\"" << w / 2 << "\" y=\"18\" text-anchor=\"middle\">received/send vs send-rate/max-flow</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 10; ++i) {
    const double x = i / 10.0;
    os << "<text x=\"" << fmt_num(px(x)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
       << fmt_num(x).substr(0, 3) << "</text>\n";
  }
  for (double y = 0; y <= ymax + 1e-9; y += 0.2) {
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt_num(py(y) + 4) << "\" text-anchor=\"end\">"
       << fmt_num(y).substr(0, 3) << "</text>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << fmt_num(py(y)) << "\" x2=\"" << left + pw << "\" y2=\""
       << fmt_num(py(y)) << "\" stroke=\"#ddd\"/>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">send rate / max-flow</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
     << ")\" text-anchor=\"middle\">received / send</text>\n";

  std::size_t idx = 0;
  for (const auto& [mode, pts] : series) {
    const char* color = kPalette[idx % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) os << fmt_num(px(x)) << ',' << fmt_num(py(y)) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : pts)
      os << "<circle cx=\"" << fmt_num(px(x)) << "\" cy=\"" << fmt_num(py(y)) << "\" r=\"3\" fill=\"" << color
         << "\"/>\n";
    const int ly = top + 20 + static_cast<int>(idx) * 20;
    os << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << mode << "</text>\n";
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

std::string bench_svg(const Table& t) {
  // Traversal-weighted mean latency per (payload, role/branch) across delays.
  std::map<long, std::map<std::string, std::pair<double, double>>> acc;
  std::vector<std::string> series_order;
  for (const auto& r : t.rows) {
    const long payload = static_cast<long>(cell_num(t, r, "payload_size"));
    std::string label = r.at(column(t, "role"));
    const std::string& branch = r.at(column(t, "branch"));
    if (label == "decoding") label += " (" + branch + ")";
    const double n = cell_num(t, r, "traversals");
    auto& [sum, cnt] = acc[payload][label];
    sum += n * cell_num(t, r, "mean_latency_ns");
    cnt += n;
    if (std::find(series_order.begin(), series_order.end(), label) == series_order.end()) series_order.push_back(label);
  }
  std::sort(series_order.begin(), series_order.end());

  const int w = 720, h = 420, left = 70, right = 210, top = 30, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  double ymax = 1;
  for (const auto& [p, m] : acc)
    for (const auto& [l, sc] : m) ymax = std::max(ymax, sc.first / sc.second * 1.1);
  auto py = [&](double y) { return top + ph - y / ymax * ph; };

  std::ostringstream os;
  os << svg_header(w, h);
  os << "<text x=\"" << (left + pw / 2) << "\" y=\"18\" text-anchor=\"middle\">mean modeled latency per traversal (ns)</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = ymax * i / 5.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt_num(py(y) + 4) << "\" text-anchor=\"end\">"
       << static_cast<long>(y) << "</text>\n";
  }
  const double group_w = acc.empty() ? pw : pw / static_cast<double>(acc.size());
  const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(1, series_order.size()));
  std::size_t g = 0;
  for (const auto& [payload, m] : acc) {
    const double gx = left + g * group_w + group_w * 0.1;
    for (std::size_t s = 0; s < series_order.size(); ++s) {
      auto it = m.find(series_order[s]);
      if (it == m.end()) continue;
      const double v = it->second.first / it->second.second;
      os << "<rect x=\"" << fmt_num(gx + s * bar_w) << "\" y=\"" << fmt_num(py(v)) << "\" width=\"" << fmt_num(bar_w * 0.9)
         << "\" height=\"" << fmt_num(top + ph - py(v)) << "\" fill=\"" << kPalette[s % std::size(kPalette)]
         << "\"/>\n";
    }
    os << "<text x=\"" << fmt_num(left + (g + 0.5) * group_w) << "\" y=\"" << top + ph + 16
       << "\" text-anchor=\"middle\">" << payload << " B</text>\n";
    ++g;
  }
  for (std::size_t s = 0; s < series_order.size(); ++s) {
    const int ly = top + 20 + static_cast<int>(s) * 20;
    os << "<rect x=\"" << left + pw + 15 << "\" y=\"" << ly - 8 << "\" width=\"12\" height=\"12\" fill=\""
       << kPalette[s % std::size(kPalette)] << "\"/>\n";
    os << "<text x=\"" << left + pw + 32 << "\" y=\"" << ly + 2 << "\">" << series_order[s] << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">payload size</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> emit_outputs(const std::string& dir, const std::vector<Table>& tables) {
  if (tables.empty()) throw ConfigError("nothing to write: no tables");
  for (const auto& t : tables)
    if (t.rows.empty()) throw ConfigError("nothing to write: table " + t.name + " is empty");

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& t : tables) {
    const std::string csv = to_csv(t);
    files.emplace_back(t.name + ".csv", csv);
    const Table reread = parse_csv(t.name, csv);
    if (t.name == "butterfly_rate") files.emplace_back(t.name + ".svg", butterfly_svg(reread));
    if (t.name == "diversity_bench") files.emplace_back(t.name + ".svg", bench_svg(reread));
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");

  std::vector<fs::path> written;
  auto rollback = [&] {
    for (const auto& p : written) fs::remove(p, ec);
  };
  for (const auto& [name, content] : files) {
    const fs::path tmp = fs::path(dir) / (name + ".tmp");
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
      fs::remove(tmp, ec);
      rollback();
      throw IoError("cannot write '" + tmp.string() + "'");
    }
    written.push_back(tmp);
  }
  std::vector<std::string> paths;
  for (const auto& [name, content] : files) {
    const fs::path tmp = fs::path(dir) / (name + ".tmp");
    const fs::path dst = fs::path(dir) / name;
    fs::rename(tmp, dst, ec);
    if (ec) {
      rollback();
      for (const auto& done : paths) fs::remove(done, ec);
      throw IoError("cannot write '" + dst.string() + "'");
    }
    paths.push_back(dst.string());
  }
  return paths;
}

}  // namespace ncdp
