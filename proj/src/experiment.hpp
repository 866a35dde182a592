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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acquisition.hpp"
#include "datasets.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "pools.hpp"

namespace albench {

enum class DatasetSource { kCifar10, kImageFolder, kPatchManifest, kSynthetic };

struct DatasetConfig {
  DatasetSource source = DatasetSource::kSynthetic;
  std::string path;      // CIFAR-10 dir or image root
  std::string manifest;  // CSV for image-folder / patch-manifest
  std::vector<int> cifar_classes;          // subset of CIFAR-10 labels
  std::vector<std::string> class_names;    // fixes the order for CSV sources
  int image_size = 32;
  int channels = 3;
  double train_fraction = 0.7;  // CSV and synthetic sources only
  SyntheticSpec synthetic;
};

struct AcquisitionConfig {
  AcquisitionKind method = AcquisitionKind::kRandom;
  int mc_passes = 20;
  // Entropy from a single deterministic pass instead of the MC mean.
  bool deterministic_entropy = false;
  // > 0 scores the discriminator with MC-dropout averaging.
  int discriminator_mc_passes = 0;
  std::optional<TrainConfig> discriminator_train;  // defaults to the task recipe
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string output_dir = "runs";
  DatasetConfig dataset;
  ImbalanceSpec imbalance;
  AcquisitionConfig acquisition;
  TrainConfig train;
  int cycles = 5;
  int samples_per_cycle = 200;
  int repeats = 3;
  std::vector<int> minority_rotation;  // defaults to 0..repeats-1
  std::uint64_t seed = 0;
  bool save_checkpoints = true;

  // Throws Config with the offending field path.
  void validate() const;
  int minority_for_repeat(int repeat) const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& file);
};

struct ExperimentData {
  std::vector<std::string> class_list;
  std::shared_ptr<const ImageStore> images;
  std::shared_ptr<const SampleTable> train;
  std::vector<Sample> test;
};

ExperimentData load_experiment_data(const DatasetConfig& config, std::uint64_t seed);

struct RunRecord {
  std::string method;
  int repeat = 0;
  int minority_class = 0;
  std::vector<CycleMetrics> metrics;             // cycle 0 .. cycles
  std::vector<std::vector<std::string>> selected;  // per cycle 1 .. cycles
  std::vector<ClassCounts> selected_class_counts;
  std::vector<ClassCounts> shortfalls;
  nlohmann::json seeds;
  std::string config_hash;

  nlohmann::json to_json() const;
};

// The task model trained on the current labeled pool.
struct ModelContext {
  std::shared_ptr<const TrainedModel> task_model;
};

struct CycleOutcome {
  PoolState state;
  CycleMetrics metrics;
  std::vector<std::string> selected;
  std::vector<AcquisitionScore> scores;
  ClassCounts selected_class_counts;
  ClassCounts shortfall;
  std::shared_ptr<const TrainedModel> discriminator;
};

// Per-run seed roles are derived from (master seed, repeat, role, cycle).
struct RunSeeds {
  std::uint64_t master = 0;
  int repeat = 0;
  std::uint64_t split() const;
  std::uint64_t task_model(int cycle) const;
  std::uint64_t discriminator(int cycle) const;
  std::uint64_t acquisition(int cycle) const;
  std::uint64_t replenish(int cycle) const;
};

CycleMetrics evaluate(const TrainedModel& model, const ExperimentData& data, int minority_class, int cycle_index,
                      std::int64_t labeled_pool_size);

std::vector<LabeledRef> labeled_refs(const PoolState& state);

// train (if the context has no model) -> score -> select top K -> oracle ->
// replenish -> retrain on the enlarged pool -> evaluate on the test set.
// `cycle` counts from 1. The context ends up holding the retrained model.
CycleOutcome run_cycle(const PoolState& state, ModelContext& context, const ExperimentConfig& config,
                       const ExperimentData& data, const RunSeeds& seeds, int cycle);

struct RunOptions {
  bool resume = false;
  bool persist = true;
  // Shared cycle-0 models keyed by run identity (methods compare on the same
  // trained starting point).
  std::map<std::string, std::shared_ptr<const TrainedModel>>* cycle0_cache = nullptr;
};

std::filesystem::path run_directory(const ExperimentConfig& config, int repeat);

RunRecord run_experiment(const ExperimentConfig& config, const ExperimentData& data, int repeat = 0,
                         const RunOptions& options = {});
RunRecord run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

std::vector<RunRecord> run_repeats(const ExperimentConfig& config, const ExperimentData& data,
                                   const RunOptions& options = {});
std::vector<RunRecord> run_repeats(const ExperimentConfig& config, const RunOptions& options = {});

struct SweepRow {
  std::int64_t majority_count = 0;
  std::string method;
  std::size_t runs = 0;
  std::array<MetricAggregate, kMetricNames.size()> delta{};
};

struct SweepConfig {
  ExperimentConfig base;
  std::vector<std::int64_t> majority_counts;
  std::vector<AcquisitionKind> methods;

  static SweepConfig from_json(const nlohmann::json& j);
  static SweepConfig load(const std::filesystem::path& file);
};

// For every (count, method): labeled majority per class = count, unlabeled
// pool unchanged; records last-minus-first metric deltas over repeats.
std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const RunOptions& options = {});
std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const ExperimentData& data, const RunOptions& options = {});

void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& file);

}  // namespace albench
