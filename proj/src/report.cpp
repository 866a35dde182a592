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

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "error.hpp"

namespace albench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<fs::path> sorted_files_named(const fs::path& root, const std::string& name, bool skip_sweep) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) fail(ErrorCode::kIo, "runs directory " + root.string() + " does not exist");
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (skip_sweep && it->is_directory() && it->path().filename() == "sweep") {
      it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file() && it->path().filename() == name) out.push_back(it->path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) fail(ErrorCode::kIo, "cannot write " + file.string());
}

}  // namespace

RunsByMethod load_runs(const fs::path& runs_dir) {
  RunsByMethod out;
  for (const auto& metrics_file : sorted_files_named(runs_dir, "metrics.jsonl", true)) {
    const fs::path dir = metrics_file.parent_path();
    if (!fs::exists(dir / "run.json")) {
      std::cerr << "albench: skipping incomplete run " << dir.string() << "\n";
      continue;
    }
    std::ifstream run_in(dir / "run.json");
    json run;
    run_in >> run;
    std::vector<CycleMetrics> metrics;
    std::ifstream in(metrics_file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) metrics.push_back(cycle_metrics_from_json(json::parse(line)));
    }
    out[run.at("method").get<std::string>()].push_back(std::move(metrics));
  }
  return out;
}

std::vector<SweepRow> load_sweeps(const fs::path& runs_dir) {
  std::vector<SweepRow> out;
  for (const auto& file : sorted_files_named(runs_dir, "sweep.csv", false)) {
    auto rows = read_sweep_csv(file);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

ReportInput aggregate_runs(const RunsByMethod& runs) {
  ReportInput input;
  for (const auto& [method, method_runs] : runs) input.aggregates[method] = aggregate_sem(method_runs);
  return input;
}

std::string summary_csv(const ReportInput& input) {
  std::string out = "method,cycle,labeled_pool_size,runs,metric,mean,sem\n";
  for (const auto& [method, cycles] : input.aggregates) {
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
      for (const auto& c : cycles) {
        out += method + "," + std::to_string(c.cycle_index) + "," + num(c.labeled_pool_size) + "," +
               std::to_string(c.runs) + "," + kMetricNames[i] + "," + num(c.metrics[i].mean) + "," +
               num(c.metrics[i].sem) + "\n";
      }
    }
  }
  return out;
}

json summary_json(const ReportInput& input) {
  json j;
  json methods = json::object();
  for (const auto& [method, cycles] : input.aggregates) {
    json per_cycle = json::array();
    for (const auto& c : cycles) {
      json m = {{"cycle", c.cycle_index}, {"labeled_pool_size", c.labeled_pool_size}, {"runs", c.runs},
                {"single_run", c.single_run}};
      for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        m[kMetricNames[i]] = {{"mean", c.metrics[i].mean}, {"sem", c.metrics[i].sem}};
      }
      per_cycle.push_back(m);
    }
    methods[method] = {{"cycles", per_cycle}};
  }
  j["methods"] = methods;

  // Gaps to the random baseline under both averaging windows.
  auto random = input.aggregates.find("random");
  if (random != input.aggregates.end()) {
    json gaps = json::object();
    for (const auto& [method, cycles] : input.aggregates) {
      if (method == "random" || cycles.size() != random->second.size() || cycles.size() < 2) continue;
      json g;
      for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        const double final_gap = cycles.back().metrics[i].mean - random->second.back().metrics[i].mean;
        double mean_gap = 0;
        for (std::size_t k = 1; k < cycles.size(); ++k) {
          mean_gap += cycles[k].metrics[i].mean - random->second[k].metrics[i].mean;
        }
        mean_gap /= static_cast<double>(cycles.size() - 1);
        g[kMetricNames[i]] = {{"final_cycle", final_gap}, {"mean_over_al_cycles", mean_gap}};
      }
      gaps[method] = g;
    }
    j["gap_vs_random"] = gaps;
  }
  if (!input.sweep.empty()) {
    json rows = json::array();
    for (const auto& r : input.sweep) {
      json row = {{"majority_count", r.majority_count}, {"method", r.method}, {"runs", r.runs}};
      for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        row[std::string("delta_") + kMetricNames[i]] = {{"mean", r.delta[i].mean}, {"sem", r.delta[i].sem}};
      }
      rows.push_back(row);
    }
    j["sweep"] = rows;
  }
  return j;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct Panel {
  double x, y, w, h;
  double xmin, xmax, ymin, ymax;

  double px(double v) const { return x + (xmax == xmin ? 0.5 : (v - xmin) / (xmax - xmin)) * w; }
  double py(double v) const { return y + h - (ymax == ymin ? 0.5 : (v - ymin) / (ymax - ymin)) * h; }
};

std::string axes(const Panel& p, const std::string& title, const std::string& xlabel) {
  std::string s;
  s += "<rect x=\"" + num(p.x) + "\" y=\"" + num(p.y) + "\" width=\"" + num(p.w) + "\" height=\"" + num(p.h) +
       "\" fill=\"none\" stroke=\"#444\"/>\n";
  s += "<text x=\"" + num(p.x + p.w / 2) + "\" y=\"" + num(p.y - 8) + "\" text-anchor=\"middle\" font-size=\"13\">" +
       title + "</text>\n";
  s += "<text x=\"" + num(p.x + p.w / 2) + "\" y=\"" + num(p.y + p.h + 32) +
       "\" text-anchor=\"middle\" font-size=\"11\">" + xlabel + "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = p.ymin + (p.ymax - p.ymin) * k / 4.0;
    s += "<text x=\"" + num(p.x - 4) + "\" y=\"" + num(p.py(v) + 4) + "\" text-anchor=\"end\" font-size=\"10\">" +
         num(std::round(v * 1000) / 1000) + "</text>\n";
  }
  return s;
}

std::string legend(const std::vector<std::string>& names, double x, double y) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double yy = y + 16.0 * static_cast<double>(i);
    s += "<rect x=\"" + num(x) + "\" y=\"" + num(yy - 9) + "\" width=\"12\" height=\"3\" fill=\"" +
         kPalette[i % 6] + "\"/>\n";
    s += "<text x=\"" + num(x + 18) + "\" y=\"" + num(yy - 4) + "\" font-size=\"11\">" + names[i] + "</text>\n";
  }
  return s;
}

// Panel order: minority precision/recall, majority macro precision/recall,
// accuracy.
std::string curves_svg(const ReportInput& input) {
  const std::size_t order[] = {1, 0, 3, 2, 4};
  const char* titles[] = {"Minority precision", "Minority recall", "Majority macro precision",
                          "Majority macro recall", "Overall accuracy"};
  const double pw = 220, ph = 170, gap = 70;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(5 * (pw + gap) + 140) +
                  "\" height=\"" + num(ph + 110) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  int max_cycle = 0;
  for (const auto& [_, cycles] : input.aggregates) {
    for (const auto& c : cycles) max_cycle = std::max(max_cycle, c.cycle_index);
  }
  std::vector<std::string> names;
  for (const auto& [method, _] : input.aggregates) names.push_back(method);
  for (std::size_t k = 0; k < 5; ++k) {
    const std::size_t metric = order[k];
    double lo = 1, hi = 0;
    for (const auto& [_, cycles] : input.aggregates) {
      for (const auto& c : cycles) {
        lo = std::min(lo, c.metrics[metric].mean - c.metrics[metric].sem);
        hi = std::max(hi, c.metrics[metric].mean + c.metrics[metric].sem);
      }
    }
    lo = std::max(0.0, lo - 0.02);
    hi = std::min(1.0, hi + 0.02);
    if (hi <= lo) hi = lo + 0.05;
    const Panel p{60 + k * (pw + gap), 40, pw, ph, 0, static_cast<double>(std::max(1, max_cycle)), lo, hi};
    s += axes(p, titles[k], "AL cycle");
    std::size_t m = 0;
    for (const auto& [method, cycles] : input.aggregates) {
      const char* color = kPalette[m++ % 6];
      std::string band, line;
      for (const auto& c : cycles) band += num(p.px(c.cycle_index)) + "," + num(p.py(c.metrics[metric].mean + c.metrics[metric].sem)) + " ";
      for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
        band += num(p.px(it->cycle_index)) + "," + num(p.py(it->metrics[metric].mean - it->metrics[metric].sem)) + " ";
      }
      for (const auto& c : cycles) line += num(p.px(c.cycle_index)) + "," + num(p.py(c.metrics[metric].mean)) + " ";
      s += "<polygon points=\"" + band + "\" fill=\"" + color + "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
      s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    }
  }
  s += legend(names, 5 * (pw + gap) + 20, 60);
  s += "</svg>\n";
  return s;
}

// Minority recall and precision deltas vs labeled majority count.
std::string sweep_svg(const std::vector<SweepRow>& rows) {
  const double pw = 300, ph = 200, gap = 90;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(2 * (pw + gap) + 150) +
                  "\" height=\"" + num(ph + 110) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::vector<std::string> methods;
  double xmin = INFINITY, xmax = -INFINITY;
  for (const auto& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    xmin = std::min(xmin, static_cast<double>(r.majority_count));
    xmax = std::max(xmax, static_cast<double>(r.majority_count));
  }
  const std::size_t metrics[] = {0, 1};
  const char* titles[] = {"Minority recall delta", "Minority precision delta"};
  for (std::size_t k = 0; k < 2; ++k) {
    double lo = 0, hi = 0;
    for (const auto& r : rows) {
      lo = std::min(lo, r.delta[metrics[k]].mean - r.delta[metrics[k]].sem);
      hi = std::max(hi, r.delta[metrics[k]].mean + r.delta[metrics[k]].sem);
    }
    lo -= 0.02;
    hi += 0.02;
    const Panel p{70 + k * (pw + gap), 40, pw, ph, xmin, xmax, lo, hi};
    s += axes(p, titles[k], "labeled majority samples per class");
    s += "<line x1=\"" + num(p.x) + "\" x2=\"" + num(p.x + p.w) + "\" y1=\"" + num(p.py(0)) + "\" y2=\"" +
         num(p.py(0)) + "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::string line;
      for (const auto& r : rows) {
        if (r.method != methods[m]) continue;
        const double x = p.px(static_cast<double>(r.majority_count));
        const auto& d = r.delta[metrics[k]];
        line += num(x) + "," + num(p.py(d.mean)) + " ";
        s += "<line x1=\"" + num(x) + "\" x2=\"" + num(x) + "\" y1=\"" + num(p.py(d.mean - d.sem)) + "\" y2=\"" +
             num(p.py(d.mean + d.sem)) + "\" stroke=\"" + kPalette[m % 6] + "\"/>\n";
      }
      s += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + kPalette[m % 6] +
           "\" stroke-width=\"2\"/>\n";
    }
  }
  s += legend(methods, 2 * (pw + gap) + 30, 60);
  s += "</svg>\n";
  return s;
}

}  // namespace

std::vector<fs::path> emit_report(const ReportInput& input, const fs::path& out_dir, unsigned formats) {
  if (input.aggregates.empty() && input.sweep.empty()) {
    fail(ErrorCode::kEmptyInput, "nothing to report: no completed runs or sweeps");
  }
  for (const auto& [method, cycles] : input.aggregates) {
    if (cycles.empty()) fail(ErrorCode::kEmptyInput, "method " + method + " has no cycles");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_file(out_dir / name, text);
    written.push_back(out_dir / name);
  };
  if (formats & kReportCsv && !input.aggregates.empty()) emit("summary.csv", summary_csv(input));
  if (formats & kReportSvg) {
    if (!input.aggregates.empty()) emit("curves.svg", curves_svg(input));
    if (!input.sweep.empty()) emit("sweep.svg", sweep_svg(input.sweep));
  }
  if (formats & kReportJson) emit("summary.json", summary_json(input).dump(2) + "\n");
  return written;
}

}  // namespace albench
