// Copyright 2026 The albench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "experiment.hpp"
#include "metrics.hpp"

namespace albench {

using RunsByMethod = std::map<std::string, std::vector<std::vector<CycleMetrics>>>;

// Every completed run (metrics.jsonl + run.json) under `runs_dir`, grouped
// by acquisition method. Sweep subtrees are skipped.
RunsByMethod load_runs(const std::filesystem::path& runs_dir);

// Every sweep.csv under `runs_dir`, concatenated.
std::vector<SweepRow> load_sweeps(const std::filesystem::path& runs_dir);

struct ReportInput {
  std::map<std::string, std::vector<CycleAggregate>> aggregates;  // by method
  std::vector<SweepRow> sweep;
};

ReportInput aggregate_runs(const RunsByMethod& runs);

enum ReportFormat : unsigned {
  kReportCsv = 1u << 0,
  kReportSvg = 1u << 1,
  kReportJson = 1u << 2,
  kReportAll = kReportCsv | kReportSvg | kReportJson,
};

// summary.csv (long format: one row per method, cycle, metric), curves.svg
// (metric vs cycle with SEM bands), sweep.svg when sweep rows exist, and
// summary.json. Empty aggregates fail before anything is written.
std::vector<std::filesystem::path> emit_report(const ReportInput& input, const std::filesystem::path& out_dir,
                                               unsigned formats = kReportAll);

std::string summary_csv(const ReportInput& input);
nlohmann::json summary_json(const ReportInput& input);

}  // namespace albench
