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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace albench {

double metric_value(const CycleMetrics& m, std::size_t which) {
  return metric_value(const_cast<CycleMetrics&>(m), which);
}

double& metric_value(CycleMetrics& m, std::size_t which) {
  switch (which) {
    case 0: return m.minority_recall;
    case 1: return m.minority_precision;
    case 2: return m.majority_macro_recall;
    case 3: return m.majority_macro_precision;
    case 4: return m.overall_accuracy;
  }
  fail(ErrorCode::kInvalidArgument, "metric index out of range");
}

nlohmann::json to_json(const CycleMetrics& m) {
  nlohmann::json j;
  j["cycle_index"] = m.cycle_index;
  j["labeled_pool_size"] = m.labeled_pool_size;
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) j[kMetricNames[i]] = metric_value(m, i);
  j["zero_denominator"] = m.zero_denominator;
  return j;
}

CycleMetrics cycle_metrics_from_json(const nlohmann::json& j) {
  CycleMetrics m;
  m.cycle_index = j.at("cycle_index").get<int>();
  m.labeled_pool_size = j.at("labeled_pool_size").get<std::int64_t>();
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) metric_value(m, i) = j.at(kMetricNames[i]).get<double>();
  m.zero_denominator = j.value("zero_denominator", false);
  return m;
}

std::vector<std::vector<std::int64_t>> confusion_matrix(std::span<const int> predictions, std::span<const int> labels,
                                                        int num_classes) {
  if (predictions.size() != labels.size()) {
    fail(ErrorCode::kLengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                         std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) fail(ErrorCode::kEmptyInput, "no predictions to evaluate");
  std::vector<std::vector<std::int64_t>> cm(num_classes, std::vector<std::int64_t>(num_classes, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes || predictions[i] < 0 || predictions[i] >= num_classes) {
      fail(ErrorCode::kInvalidArgument, "class index out of range");
    }
    ++cm[labels[i]][predictions[i]];
  }
  return cm;
}

CycleMetrics compute_metrics(std::span<const int> predictions, std::span<const int> labels, int minority_class,
                             int num_classes) {
  if (minority_class < 0 || minority_class >= num_classes) {
    fail(ErrorCode::kInvalidArgument, "minority class out of range");
  }
  const auto cm = confusion_matrix(predictions, labels, num_classes);
  CycleMetrics m;
  auto ratio = [&](std::int64_t num, std::int64_t den) {
    if (den == 0) {
      m.zero_denominator = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  auto recall_of = [&](int c) {
    std::int64_t row = 0;
    for (int j = 0; j < num_classes; ++j) row += cm[c][j];
    return ratio(cm[c][c], row);
  };
  auto precision_of = [&](int c) {
    std::int64_t col = 0;
    for (int i = 0; i < num_classes; ++i) col += cm[i][c];
    return ratio(cm[c][c], col);
  };

  m.minority_recall = recall_of(minority_class);
  m.minority_precision = precision_of(minority_class);
  double recall_sum = 0, precision_sum = 0;
  int present = 0;
  std::int64_t trace = 0;
  for (int c = 0; c < num_classes; ++c) {
    trace += cm[c][c];
    if (c == minority_class) continue;
    std::int64_t support = 0;
    for (int j = 0; j < num_classes; ++j) support += cm[c][j];
    if (support == 0) continue;
    recall_sum += recall_of(c);
    precision_sum += precision_of(c);
    ++present;
  }
  if (present > 0) {
    m.majority_macro_recall = recall_sum / present;
    m.majority_macro_precision = precision_sum / present;
  } else {
    m.zero_denominator = true;
  }
  m.overall_accuracy = static_cast<double>(trace) / static_cast<double>(labels.size());
  return m;
}

MetricsDelta performance_delta(const CycleMetrics& first, const CycleMetrics& last) {
  MetricsDelta d;
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) d.values[i] = metric_value(last, i) - metric_value(first, i);
  return d;
}

Summary mean_sem(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::kEmptyInput, "mean of an empty set");
  Summary s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  // Identical values give exactly zero spread, whatever the rounding of the mean.
  if (values.size() < 2 || std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    if (!values.empty()) s.mean = values[0];
    return s;
  }
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double n = static_cast<double>(values.size());
  s.sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return s;
}

std::vector<CycleAggregate> aggregate_sem(std::span<const std::vector<CycleMetrics>> runs) {
  if (runs.empty()) fail(ErrorCode::kEmptyInput, "no runs to aggregate");
  const std::size_t cycles = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != cycles) fail(ErrorCode::kShapeMismatch, "runs have different numbers of cycles");
  }
  std::vector<CycleAggregate> out(cycles);
  std::vector<double> column(runs.size());
  for (std::size_t k = 0; k < cycles; ++k) {
    CycleAggregate& agg = out[k];
    agg.cycle_index = runs.front()[k].cycle_index;
    agg.runs = runs.size();
    agg.single_run = runs.size() == 1;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (runs[r][k].cycle_index != agg.cycle_index) {
        fail(ErrorCode::kShapeMismatch, "runs disagree on cycle indices");
      }
      column[r] = static_cast<double>(runs[r][k].labeled_pool_size);
    }
    agg.labeled_pool_size = mean_sem(column).mean;
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
      for (std::size_t r = 0; r < runs.size(); ++r) column[r] = metric_value(runs[r][k], i);
      const Summary s = mean_sem(column);
      agg.metrics[i] = {s.mean, s.sem};
    }
  }
  return out;
}

}  // namespace albench
