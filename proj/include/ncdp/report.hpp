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

// Result tables, their CSV form, and SVG plots rendered from that CSV form.

#include <string>
#include <vector>

#include "ncdp/experiments.hpp"

namespace ncdp {

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);
/// Parses the subset of CSV that to_csv produces (no quoting).
Table parse_csv(const std::string& name, const std::string& text);

/// butterfly_rate.csv: mode,ratio,receiver,reps,mean,stddev
Table butterfly_table(const std::vector<ButterflySummary>& summary, std::size_t reps);
/// butterfly_rate_points.csv: one row per (mode, ratio, receiver, rep)
Table butterfly_points_table(const std::vector<ButterflyPoint>& points);
/// diversity_failure.csv
Table failure_table(const std::vector<FailurePoint>& points);
/// diversity_bench.csv
Table bench_table(const std::vector<BenchPoint>& points);

/// Received/send ratio against send-rate ratio, one series per mode.
std::string butterfly_svg(const Table& butterfly_rate);
/// Mean modeled latency per role, grouped by payload size.
std::string bench_svg(const Table& diversity_bench);

/// Writes <name>.csv for every table plus the SVG of each table that has a
/// plot. Throws ConfigError if any table is empty and IoError if the
/// directory cannot be written; nothing is left behind on failure.
std::vector<std::string> emit_outputs(const std::string& dir, const std::vector<Table>& tables);

std::string fmt_num(double v);

}  // namespace ncdp
