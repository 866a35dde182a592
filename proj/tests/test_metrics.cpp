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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "metrics.hpp"
#include "report.hpp"
#include "test_util.hpp"

using namespace albench;
namespace fs = std::filesystem;

namespace {

// Expands a confusion matrix (rows = truth) into prediction/label vectors.
void expand(const std::vector<std::vector<int>>& cm, std::vector<int>& pred, std::vector<int>& labels) {
  for (int t = 0; t < static_cast<int>(cm.size()); ++t) {
    for (int p = 0; p < static_cast<int>(cm[t].size()); ++p) {
      for (int k = 0; k < cm[t][p]; ++k) {
        pred.push_back(p);
        labels.push_back(t);
      }
    }
  }
}

// Counting oracle with no confusion matrix.
CycleMetrics brute_force(const std::vector<int>& pred, const std::vector<int>& labels, int minority, int classes) {
  auto count = [&](auto&& keep) {
    std::int64_t n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) n += keep(pred[i], labels[i]) ? 1 : 0;
    return n;
  };
  auto rate = [](std::int64_t a, std::int64_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  CycleMetrics m;
  auto tp = [&](int c) { return count([c](int p, int l) { return p == c && l == c; }); };
  auto support = [&](int c) { return count([c](int, int l) { return l == c; }); };
  auto predicted = [&](int c) { return count([c](int p, int) { return p == c; }); };
  m.minority_recall = rate(tp(minority), support(minority));
  m.minority_precision = rate(tp(minority), predicted(minority));
  double r = 0, p = 0;
  int present = 0;
  for (int c = 0; c < classes; ++c) {
    if (c == minority || support(c) == 0) continue;
    r += rate(tp(c), support(c));
    p += rate(tp(c), predicted(c));
    ++present;
  }
  m.majority_macro_recall = present ? r / present : 0.0;
  m.majority_macro_precision = present ? p / present : 0.0;
  m.overall_accuracy = rate(count([](int a, int b) { return a == b; }), static_cast<std::int64_t>(pred.size()));
  return m;
}

CycleMetrics make_metrics(int cycle, double base) {
  CycleMetrics m;
  m.cycle_index = cycle;
  m.labeled_pool_size = 100 + 10 * cycle;
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) metric_value(m, i) = std::fmod(base + 0.07 * i, 1.0);
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("albench_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_run(const fs::path& dir, const std::string& method, const std::vector<CycleMetrics>& metrics,
               bool complete = true) {
  fs::create_directories(dir);
  std::ofstream out(dir / "metrics.jsonl");
  for (const auto& m : metrics) out << to_json(m).dump() << "\n";
  if (complete) std::ofstream(dir / "run.json") << nlohmann::json{{"method", method}}.dump() << "\n";
}

}  // namespace

TEST_CASE("perfect predictions") {
  const std::vector<int> y{0, 1, 2, 2, 1, 0};
  const auto m = compute_metrics(y, y, 1, 3);
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) CHECK(metric_value(m, i) == 1.0);
  CHECK_FALSE(m.zero_denominator);
}

TEST_CASE("minority never predicted") {
  const std::vector<int> labels{0, 0, 1, 1, 2};
  const std::vector<int> pred{1, 1, 1, 1, 2};
  const auto m = compute_metrics(pred, labels, 0, 3);
  CHECK(m.minority_recall == 0.0);
  CHECK(m.minority_precision == 0.0);
  CHECK(m.zero_denominator);
}

TEST_CASE("hand-computed three-class confusion matrix") {
  std::vector<int> pred, labels;
  expand({{8, 1, 1}, {0, 9, 1}, {2, 0, 8}}, pred, labels);
  const auto m = compute_metrics(pred, labels, 0, 3);
  CHECK(m.minority_recall == doctest::Approx(0.8));
  CHECK(m.minority_precision == doctest::Approx(0.8));
  CHECK(m.overall_accuracy == doctest::Approx(25.0 / 30.0));
  CHECK(m.majority_macro_recall == doctest::Approx((0.9 + 0.8) / 2));
  CHECK(m.majority_macro_precision == doctest::Approx((0.9 + 0.8) / 2));
  const auto cm = confusion_matrix(pred, labels, 3);
  CHECK(cm[2][0] == 2);
  CHECK(cm[0][2] == 1);
}

TEST_CASE("classes absent from labels are left out of the macro mean") {
  // Class 2 never occurs; majority macro is class 1 alone.
  const std::vector<int> labels{0, 1, 1, 1};
  const std::vector<int> pred{0, 1, 1, 0};
  const auto m = compute_metrics(pred, labels, 0, 3);
  CHECK(m.majority_macro_recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.majority_macro_precision == doctest::Approx(1.0));
}

TEST_CASE("metric errors") {
  const std::vector<int> a{0, 1}, b{0};
  const std::vector<int> empty;
  CHECK_ERROR_CODE(compute_metrics(a, b, 0, 2), ErrorCode::kLengthMismatch);
  CHECK_ERROR_CODE(compute_metrics(empty, empty, 0, 2), ErrorCode::kEmptyInput);
}

TEST_CASE("metrics agree with a counting oracle on random vectors") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const int classes = 2 + static_cast<int>(gen() % 8);
    const std::size_t n = 1 + gen() % 200;
    std::vector<int> pred(n), labels(n);
    // Skew toward a few classes so some classes go missing.
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(gen() % classes) / (1 + static_cast<int>(gen() % 2));
      pred[i] = gen() % 3 == 0 ? labels[i] : static_cast<int>(gen() % classes);
    }
    const int minority = static_cast<int>(gen() % classes);
    const auto got = compute_metrics(pred, labels, minority, classes);
    const auto want = brute_force(pred, labels, minority, classes);
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) REQUIRE(metric_value(got, i) == metric_value(want, i));

    // Accuracy is the support-weighted mean of per-class recalls.
    double weighted = 0;
    for (int c = 0; c < classes; ++c) {
      std::int64_t tp = 0, support = 0;
      for (std::size_t i = 0; i < n; ++i) {
        support += labels[i] == c;
        tp += labels[i] == c && pred[i] == c;
      }
      if (support) weighted += static_cast<double>(support) / n * (static_cast<double>(tp) / support);
    }
    REQUIRE(got.overall_accuracy == doctest::Approx(weighted).epsilon(1e-12));
  }
}

TEST_CASE("performance delta") {
  const auto a = make_metrics(0, 0.3);
  const auto d0 = performance_delta(a, a);
  for (double v : d0.values) CHECK(v == 0.0);
  CycleMetrics first, last;
  first.minority_recall = 0.2;
  last.minority_recall = 0.45;
  last.cycle_index = 5;
  CHECK(performance_delta(first, last).values[0] == doctest::Approx(0.25));
}

TEST_CASE("mean of deltas equals delta of means") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<CycleMetrics> firsts, lasts;
  for (int r = 0; r < 3; ++r) {
    CycleMetrics f, l;
    l.cycle_index = 5;
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
      metric_value(f, i) = u(gen);
      metric_value(l, i) = u(gen);
    }
    firsts.push_back(f);
    lasts.push_back(l);
  }
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    double mean_delta = 0, mean_first = 0, mean_last = 0;
    for (int r = 0; r < 3; ++r) {
      mean_delta += performance_delta(firsts[r], lasts[r]).values[i] / 3;
      mean_first += metric_value(firsts[r], i) / 3;
      mean_last += metric_value(lasts[r], i) / 3;
    }
    CHECK(mean_delta == doctest::Approx(mean_last - mean_first).epsilon(1e-12));
  }
}

TEST_CASE("mean and standard error") {
  const std::vector<double> v{1, 2, 3};
  const auto s = mean_sem(v);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(std::abs(s.sem - 1.0 / std::sqrt(3.0)) < 1e-12);
  const std::vector<double> same{0.4, 0.4, 0.4};
  CHECK(mean_sem(same).sem == 0.0);
  const std::vector<double> one{0.7};
  CHECK(mean_sem(one).sem == 0.0);
  CHECK(mean_sem(one).mean == 0.7);
}

TEST_CASE("aggregate over runs") {
  std::vector<std::vector<CycleMetrics>> runs;
  for (int r = 0; r < 3; ++r) {
    std::vector<CycleMetrics> run;
    for (int c = 0; c < 4; ++c) run.push_back(make_metrics(c, 0.1 * r + 0.05 * c));
    runs.push_back(run);
  }
  const auto agg = aggregate_sem(runs);
  REQUIRE(agg.size() == 4);
  CHECK(agg[2].runs == 3);
  CHECK_FALSE(agg[2].single_run);
  CHECK(agg[2].metrics[0].mean == doctest::Approx((0.1 + 0.2 + 0.3 + 0.3) / 3 - 0.1 + 0.0));
  CHECK(agg[2].metrics[0].sem == doctest::Approx(0.1 / std::sqrt(3.0)));

  auto reversed = runs;
  std::reverse(reversed.begin(), reversed.end());
  const auto agg2 = aggregate_sem(reversed);
  for (std::size_t c = 0; c < agg.size(); ++c) {
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
      CHECK(agg2[c].metrics[i].mean == doctest::Approx(agg[c].metrics[i].mean).epsilon(1e-14));
      CHECK(agg2[c].metrics[i].sem == doctest::Approx(agg[c].metrics[i].sem).epsilon(1e-12));
    }
  }

  const auto single = aggregate_sem(std::vector<std::vector<CycleMetrics>>{runs[0]});
  CHECK(single[1].single_run);
  CHECK(single[1].metrics[3].sem == 0.0);
  CHECK(single[1].metrics[3].mean == metric_value(runs[0][1], 3));

  runs[1].pop_back();
  CHECK_ERROR_CODE(aggregate_sem(runs), ErrorCode::kShapeMismatch);
}

TEST_CASE("metrics json round trip") {
  auto m = make_metrics(3, 0.123456789);
  m.zero_denominator = true;
  const auto back = cycle_metrics_from_json(to_json(m));
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) CHECK(metric_value(back, i) == metric_value(m, i));
  CHECK(back.cycle_index == 3);
  CHECK(back.zero_denominator);
}

TEST_CASE("report shape for four methods over six cycles") {
  TempDir tmp("report_shape");
  const char* methods[] = {"random", "entropy", "bald", "discriminator"};
  for (int m = 0; m < 4; ++m) {
    for (int r = 0; r < 3; ++r) {
      std::vector<CycleMetrics> run;
      for (int c = 0; c < 6; ++c) run.push_back(make_metrics(c, 0.1 * m + 0.03 * r + 0.02 * c));
      write_run(tmp.path / "runs" / methods[m] / std::to_string(r), methods[m], run);
    }
  }
  // An interrupted run without run.json is ignored.
  write_run(tmp.path / "runs" / "bald" / "9", "bald", {make_metrics(0, 0.5)}, false);

  const auto input = aggregate_runs(load_runs(tmp.path / "runs"));
  REQUIRE(input.aggregates.size() == 4);
  const auto files = emit_report(input, tmp.path / "out");
  CHECK(files.size() == 3);
  CHECK(fs::exists(tmp.path / "out" / "curves.svg"));
  CHECK_FALSE(fs::exists(tmp.path / "out" / "sweep.svg"));

  std::ifstream csv(tmp.path / "out" / "summary.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "method,cycle,labeled_pool_size,runs,metric,mean,sem");
  std::map<std::string, int> rows_per_metric;
  while (std::getline(csv, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    REQUIRE(cols.size() == 7);
    CHECK(cols[3] == "3");
    ++rows_per_metric[cols[4]];
  }
  REQUIRE(rows_per_metric.size() == kMetricNames.size());
  for (const auto& [metric, n] : rows_per_metric) CHECK(n == 24);

  const auto summary = nlohmann::json::parse(slurp(tmp.path / "out" / "summary.json"));
  CHECK(summary["gap_vs_random"].size() == 3);
  const double final_gap = summary["gap_vs_random"]["discriminator"]["minority_recall"]["final_cycle"];
  CHECK(final_gap == doctest::Approx(0.3));
}

TEST_CASE("report is byte-identical when regenerated") {
  TempDir tmp("report_determinism");
  for (int r = 0; r < 2; ++r) {
    std::vector<CycleMetrics> run;
    for (int c = 0; c < 3; ++c) run.push_back(make_metrics(c, 1.0 / 3.0 + 0.1 * r + c / 7.0));
    write_run(tmp.path / "runs" / "x" / std::to_string(r), "entropy", run);
  }
  emit_report(aggregate_runs(load_runs(tmp.path / "runs")), tmp.path / "a");
  emit_report(aggregate_runs(load_runs(tmp.path / "runs")), tmp.path / "b");
  for (const char* f : {"summary.csv", "curves.svg", "summary.json"}) {
    CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));
  }
}

TEST_CASE("empty report fails without writing") {
  TempDir tmp("report_empty");
  fs::create_directories(tmp.path / "runs");
  const auto input = aggregate_runs(load_runs(tmp.path / "runs"));
  CHECK_ERROR_CODE(emit_report(input, tmp.path / "out"), ErrorCode::kEmptyInput);
  CHECK_FALSE(fs::exists(tmp.path / "out"));
}

TEST_CASE("sweep figure is written when sweep rows exist") {
  TempDir tmp("report_sweep");
  ReportInput input;
  for (int count : {100, 300, 600}) {
    for (const char* method : {"bald", "discriminator"}) {
      SweepRow row;
      row.majority_count = count;
      row.method = method;
      row.runs = 2;
      row.delta[0] = {0.3 - count / 3000.0, 0.01};
      input.sweep.push_back(row);
    }
  }
  const auto files = emit_report(input, tmp.path / "out");
  CHECK(fs::exists(tmp.path / "out" / "sweep.svg"));
  CHECK_FALSE(fs::exists(tmp.path / "out" / "summary.csv"));
  const auto summary = nlohmann::json::parse(slurp(tmp.path / "out" / "summary.json"));
  CHECK(summary["sweep"].size() == 6);
}
