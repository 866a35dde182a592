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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace albench {

struct CycleMetrics {
  double minority_recall = 0;
  double minority_precision = 0;
  double majority_macro_recall = 0;
  double majority_macro_precision = 0;
  double overall_accuracy = 0;
  int cycle_index = 0;
  std::int64_t labeled_pool_size = 0;
  // Set when a rate had a zero denominator and was defined as 0.
  bool zero_denominator = false;

  bool operator==(const CycleMetrics&) const = default;
};

inline constexpr std::array<const char*, 5> kMetricNames = {
    "minority_recall", "minority_precision", "majority_macro_recall", "majority_macro_precision",
    "overall_accuracy"};

double metric_value(const CycleMetrics& m, std::size_t which);
double& metric_value(CycleMetrics& m, std::size_t which);

nlohmann::json to_json(const CycleMetrics& m);
CycleMetrics cycle_metrics_from_json(const nlohmann::json& j);

// Row = true label, column = prediction.
std::vector<std::vector<std::int64_t>> confusion_matrix(std::span<const int> predictions, std::span<const int> labels,
                                                        int num_classes);

// Minority recall/precision from its confusion row/column; majority metrics
// are unweighted means over the non-minority classes present in `labels`.
CycleMetrics compute_metrics(std::span<const int> predictions, std::span<const int> labels, int minority_class,
                             int num_classes);

struct MetricsDelta {
  std::array<double, kMetricNames.size()> values{};
};

MetricsDelta performance_delta(const CycleMetrics& first, const CycleMetrics& last);

struct MetricAggregate {
  double mean = 0;
  double sem = 0;
};

struct CycleAggregate {
  int cycle_index = 0;
  double labeled_pool_size = 0;
  std::size_t runs = 0;
  std::array<MetricAggregate, kMetricNames.size()> metrics{};
  // One run only: SEM is reported as 0.
  bool single_run = false;
};

struct Summary {
  double mean = 0;
  double sem = 0;
};

// Sample standard deviation (n - 1) over sqrt(n); n = 1 gives SEM 0.
Summary mean_sem(std::span<const double> values);

// runs[r][k] = metrics of run r at cycle k. All runs need the same number of
// cycles, otherwise ShapeMismatch.
std::vector<CycleAggregate> aggregate_sem(std::span<const std::vector<CycleMetrics>> runs);

}  // namespace albench
