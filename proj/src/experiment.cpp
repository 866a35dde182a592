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

#include "experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csv.hpp"
#include "error.hpp"
#include "json_config.hpp"
#include "seed.hpp"

namespace albench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* source_name(DatasetSource s) {
  switch (s) {
    case DatasetSource::kCifar10: return "cifar10";
    case DatasetSource::kImageFolder: return "image_folder";
    case DatasetSource::kPatchManifest: return "patch_manifest";
    case DatasetSource::kSynthetic: return "synthetic";
  }
  return "?";
}

DatasetSource parse_source(const std::string& s, const std::string& field) {
  for (auto k : {DatasetSource::kCifar10, DatasetSource::kImageFolder, DatasetSource::kPatchManifest,
                 DatasetSource::kSynthetic}) {
    if (s == source_name(k)) return k;
  }
  fail(ErrorCode::kConfig, field + ": unknown dataset source '" + s + "'");
}

DatasetConfig dataset_from_json(const json& j) {
  DatasetConfig d;
  ObjectReader r(j, "dataset");
  d.source = parse_source(r.require<std::string>("source"), r.field("source"));
  d.path = r.get<std::string>("path", "");
  d.manifest = r.get<std::string>("manifest", "");
  d.cifar_classes = r.get("cifar_classes", d.cifar_classes);
  d.class_names = r.get("class_names", d.class_names);
  d.image_size = r.get("image_size", d.image_size);
  d.channels = r.get("channels", d.channels);
  d.train_fraction = r.get("train_fraction", d.train_fraction);
  if (r.has("synthetic")) {
    ObjectReader s(r.child("synthetic"), r.field("synthetic"));
    const auto kind = s.get<std::string>("kind", "separable");
    if (kind == "separable") {
      d.synthetic.kind = SyntheticKind::kSeparable;
    } else if (kind == "textured") {
      d.synthetic.kind = SyntheticKind::kTextured;
    } else {
      fail(ErrorCode::kConfig, s.field("kind") + ": expected separable or textured");
    }
    d.synthetic.num_classes = s.get("num_classes", d.synthetic.num_classes);
    d.synthetic.per_class = s.get("per_class", d.synthetic.per_class);
    d.synthetic.image_size = s.get("image_size", d.synthetic.image_size);
    d.synthetic.noise = s.get("noise", d.synthetic.noise);
    d.synthetic.seed = s.get<std::uint64_t>("seed", d.synthetic.seed);
    s.finish();
  }
  r.finish();
  return d;
}

json dataset_to_json(const DatasetConfig& d) {
  json j = {{"source", source_name(d.source)}, {"image_size", d.image_size}, {"channels", d.channels},
            {"train_fraction", d.train_fraction}};
  if (!d.path.empty()) j["path"] = d.path;
  if (!d.manifest.empty()) j["manifest"] = d.manifest;
  if (!d.cifar_classes.empty()) j["cifar_classes"] = d.cifar_classes;
  if (!d.class_names.empty()) j["class_names"] = d.class_names;
  if (d.source == DatasetSource::kSynthetic) {
    j["synthetic"] = {{"kind", d.synthetic.kind == SyntheticKind::kSeparable ? "separable" : "textured"},
                      {"num_classes", d.synthetic.num_classes},
                      {"per_class", d.synthetic.per_class},
                      {"image_size", d.synthetic.image_size},
                      {"noise", d.synthetic.noise},
                      {"seed", d.synthetic.seed}};
  }
  return j;
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
  if (!out) fail(ErrorCode::kIo, "cannot write " + file.string());
}

void append_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::app);
  out << text;
  if (!out) fail(ErrorCode::kIo, "cannot append to " + file.string());
}

std::vector<std::string> read_lines(const fs::path& file) {
  std::vector<std::string> lines;
  std::ifstream in(file);
  std::string line;
  while (in && std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (name.empty() || name.find('/') != std::string::npos) fail(ErrorCode::kConfig, "name: must be a plain name");
  if (cycles < 1) fail(ErrorCode::kConfig, "cycles: must be >= 1");
  if (samples_per_cycle < 1) fail(ErrorCode::kConfig, "samples_per_cycle: must be >= 1");
  if (repeats < 1) fail(ErrorCode::kConfig, "repeats: must be >= 1");
  if (!minority_rotation.empty() && static_cast<int>(minority_rotation.size()) != repeats) {
    fail(ErrorCode::kConfig, "minority_rotation: length must equal repeats");
  }
  for (int m : minority_rotation) {
    if (m < 0) fail(ErrorCode::kConfig, "minority_rotation: class indices must be >= 0");
  }
  try {
    imbalance.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, std::string("imbalance: ") + e.what());
  }
  if (acquisition.mc_passes < 1) fail(ErrorCode::kConfig, "acquisition.mc_passes: must be >= 1");
  if (acquisition.discriminator_mc_passes < 0) {
    fail(ErrorCode::kConfig, "acquisition.discriminator_mc_passes: must be >= 0");
  }
  if (!(dataset.train_fraction > 0 && dataset.train_fraction < 1)) {
    fail(ErrorCode::kConfig, "dataset.train_fraction: must lie in (0, 1)");
  }
  if (dataset.image_size < 4) fail(ErrorCode::kConfig, "dataset.image_size: must be >= 4");
  if (dataset.channels != 1 && dataset.channels != 3) fail(ErrorCode::kConfig, "dataset.channels: must be 1 or 3");
  if (dataset.source == DatasetSource::kCifar10 && dataset.path.empty()) {
    fail(ErrorCode::kConfig, "dataset.path: required for cifar10");
  }
  if ((dataset.source == DatasetSource::kImageFolder || dataset.source == DatasetSource::kPatchManifest) &&
      dataset.manifest.empty()) {
    fail(ErrorCode::kConfig, "dataset.manifest: required for CSV sources");
  }
  train.validate();
  if (acquisition.discriminator_train) acquisition.discriminator_train->validate();
}

int ExperimentConfig::minority_for_repeat(int repeat) const {
  return minority_rotation.empty() ? repeat : minority_rotation.at(static_cast<std::size_t>(repeat));
}

json ExperimentConfig::to_json() const {
  json acq = {{"method", acquisition_name(acquisition.method)},
              {"mc_passes", acquisition.mc_passes},
              {"deterministic_entropy", acquisition.deterministic_entropy},
              {"discriminator_mc_passes", acquisition.discriminator_mc_passes}};
  if (acquisition.discriminator_train) acq["discriminator_train"] = acquisition.discriminator_train->to_json();
  return {{"name", name},
          {"output_dir", output_dir},
          {"dataset", dataset_to_json(dataset)},
          {"imbalance",
           {{"labeled_minority", imbalance.labeled_minority_count},
            {"labeled_majority_per_class", imbalance.labeled_majority_count_per_class},
            {"unlabeled_minority", imbalance.unlabeled_minority_count},
            {"unlabeled_majority_per_class", imbalance.unlabeled_majority_count_per_class}}},
          {"acquisition", acq},
          {"train", train.to_json()},
          {"cycles", cycles},
          {"samples_per_cycle", samples_per_cycle},
          {"repeats", repeats},
          {"minority_rotation", minority_rotation},
          {"seed", seed},
          {"save_checkpoints", save_checkpoints}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  ObjectReader r(j, "config");
  c.name = r.get<std::string>("name", c.name);
  c.output_dir = r.get<std::string>("output_dir", c.output_dir);
  c.dataset = dataset_from_json(r.child("dataset"));
  {
    ObjectReader im(r.child("imbalance"), "imbalance");
    c.imbalance.labeled_minority_count = im.require<std::int64_t>("labeled_minority");
    c.imbalance.labeled_majority_count_per_class = im.require<std::int64_t>("labeled_majority_per_class");
    c.imbalance.unlabeled_minority_count = im.require<std::int64_t>("unlabeled_minority");
    c.imbalance.unlabeled_majority_count_per_class = im.require<std::int64_t>("unlabeled_majority_per_class");
    im.finish();
  }
  if (r.has("acquisition")) {
    ObjectReader a(r.child("acquisition"), "acquisition");
    c.acquisition.method = parse_acquisition(a.get<std::string>("method", "random"));
    c.acquisition.mc_passes = a.get("mc_passes", c.acquisition.mc_passes);
    c.acquisition.deterministic_entropy = a.get("deterministic_entropy", false);
    c.acquisition.discriminator_mc_passes = a.get("discriminator_mc_passes", 0);
    if (a.has("discriminator_train")) {
      c.acquisition.discriminator_train =
          TrainConfig::from_json(a.child("discriminator_train"), "acquisition.discriminator_train");
    }
    a.finish();
  }
  if (r.has("train")) c.train = TrainConfig::from_json(r.child("train"), "train");
  c.cycles = r.get("cycles", c.cycles);
  c.samples_per_cycle = r.get("samples_per_cycle", c.samples_per_cycle);
  c.repeats = r.get("repeats", c.repeats);
  c.minority_rotation = r.get("minority_rotation", c.minority_rotation);
  c.seed = r.get<std::uint64_t>("seed", c.seed);
  c.save_checkpoints = r.get("save_checkpoints", c.save_checkpoints);
  r.finish();
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::kIo, "cannot open config " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, file.string() + ": " + e.what());
  }
  return from_json(j);
}

ExperimentData load_experiment_data(const DatasetConfig& config, std::uint64_t seed) {
  ExperimentData data;
  const ImageShape shape{config.channels, config.image_size, config.image_size};
  LabeledDataset labeled;
  switch (config.source) {
    case DatasetSource::kCifar10: {
      SplitDataset split = load_cifar10(config.path, config.cifar_classes);
      data.class_list = split.class_list;
      data.images = split.images;
      data.train = std::make_shared<SampleTable>(std::move(split.train), data.class_list);
      data.test = std::move(split.test);
      return data;
    }
    case DatasetSource::kImageFolder:
      labeled = load_image_folder(config.path, config.manifest, shape, config.class_names);
      break;
    case DatasetSource::kPatchManifest:
      labeled = load_patch_manifest(config.manifest, shape, config.class_names);
      break;
    case DatasetSource::kSynthetic: {
      labeled = make_synthetic(config.synthetic);
      break;
    }
  }
  data.class_list = labeled.class_list;
  data.images = labeled.images;
  auto [train, test] = stratified_split(labeled.samples, static_cast<int>(data.class_list.size()),
                                        config.train_fraction, SeedChain(seed).mix("test_split").value());
  data.train = std::make_shared<SampleTable>(std::move(train), data.class_list);
  data.test = std::move(test);
  return data;
}

json RunRecord::to_json() const {
  json metrics_json = json::array();
  for (const auto& m : metrics) metrics_json.push_back(albench::to_json(m));
  return {{"method", method},
          {"repeat", repeat},
          {"minority_class", minority_class},
          {"metrics", metrics_json},
          {"selected", selected},
          {"selected_class_counts", selected_class_counts},
          {"shortfalls", shortfalls},
          {"seeds", seeds},
          {"config_hash", config_hash}};
}

std::uint64_t RunSeeds::split() const { return SeedChain(master).mix(repeat).mix("split").value(); }
std::uint64_t RunSeeds::task_model(int cycle) const {
  return SeedChain(master).mix(repeat).mix("weights").mix(cycle).value();
}
std::uint64_t RunSeeds::discriminator(int cycle) const {
  return SeedChain(master).mix(repeat).mix("discriminator").mix(cycle).value();
}
std::uint64_t RunSeeds::acquisition(int cycle) const {
  return SeedChain(master).mix(repeat).mix("acquisition").mix(cycle).value();
}
std::uint64_t RunSeeds::replenish(int cycle) const {
  return SeedChain(master).mix(repeat).mix("replenish").mix(cycle).value();
}

CycleMetrics evaluate(const TrainedModel& model, const ExperimentData& data, int minority_class, int cycle_index,
                      std::int64_t labeled_pool_size) {
  std::vector<std::size_t> indices;
  std::vector<int> labels;
  indices.reserve(data.test.size());
  for (const auto& s : data.test) {
    indices.push_back(s.image_index);
    labels.push_back(s.true_label);
  }
  const auto predictions = model.predict(*data.images, indices);
  CycleMetrics m =
      compute_metrics(predictions, labels, minority_class, static_cast<int>(data.class_list.size()));
  m.cycle_index = cycle_index;
  m.labeled_pool_size = labeled_pool_size;
  return m;
}

std::vector<LabeledRef> labeled_refs(const PoolState& state) {
  std::vector<LabeledRef> out;
  for (std::size_t i : state.members(PoolKind::kLabeled)) {
    out.push_back({state.table()[i].image_index, state.table()[i].true_label});
  }
  return out;
}

namespace {

TrainConfig with_seed(TrainConfig c, std::uint64_t seed) {
  c.seed = seed;
  return c;
}

std::shared_ptr<const TrainedModel> train_task_model(const PoolState& state, const ExperimentConfig& config,
                                                     const ExperimentData& data, std::uint64_t seed) {
  const auto refs = labeled_refs(state);
  return std::make_shared<const TrainedModel>(
      train_classifier(*data.images, refs, data.class_list, with_seed(config.train, seed)));
}

}  // namespace

CycleOutcome run_cycle(const PoolState& state, ModelContext& context, const ExperimentConfig& config,
                       const ExperimentData& data, const RunSeeds& seeds, int cycle) {
  const auto unlabeled = state.members(PoolKind::kUnlabeled);
  const auto k = static_cast<std::size_t>(config.samples_per_cycle);
  if (unlabeled.size() < k) {
    fail(ErrorCode::kPoolExhausted, "cycle " + std::to_string(cycle) + ": unlabeled pool has " +
                                        std::to_string(unlabeled.size()) + " samples, " + std::to_string(k) +
                                        " requested");
  }
  if (!context.task_model) context.task_model = train_task_model(state, config, data, seeds.task_model(cycle - 1));

  std::vector<std::string> ids;
  std::vector<std::size_t> images;
  ids.reserve(unlabeled.size());
  for (std::size_t i : unlabeled) {
    ids.push_back(state.table()[i].id);
    images.push_back(state.table()[i].image_index);
  }

  CycleOutcome out{state, {}, {}, {}, {}, {}, nullptr};
  const auto& acq = config.acquisition;
  std::vector<double> scores;
  switch (acq.method) {
    case AcquisitionKind::kRandom: {
      Rng rng(seeds.acquisition(cycle));
      scores = score_random(ids.size(), rng);
      break;
    }
    case AcquisitionKind::kEntropy:
    case AcquisitionKind::kBald:
    case AcquisitionKind::kVariationRatio: {
      McProbs mc;
      if (acq.method == AcquisitionKind::kEntropy && acq.deterministic_entropy) {
        mc = context.task_model->mc_dropout_predict(*data.images, images, 1, 0, DropoutRates{0.0, 0.0});
      } else {
        mc = context.task_model->mc_dropout_predict(*data.images, images, acq.mc_passes, seeds.acquisition(cycle));
      }
      scores = acq.method == AcquisitionKind::kEntropy ? score_entropy(mc)
               : acq.method == AcquisitionKind::kBald  ? score_bald(mc)
                                                       : score_variation_ratio(mc);
      break;
    }
    case AcquisitionKind::kDiscriminator: {
      const TrainConfig recipe = with_seed(acq.discriminator_train.value_or(config.train), seeds.discriminator(cycle));
      out.discriminator = std::make_shared<const TrainedModel>(
          train_discriminator(*data.images, labeled_refs(state), state.minority_class(), recipe));
      scores = score_discriminator(*out.discriminator, *data.images, images, acq.discriminator_mc_passes,
                                   seeds.acquisition(cycle));
      break;
    }
  }
  out.scores = attach_ids(ids, scores);
  out.selected = select_top_k(out.scores, k);

  auto [labeled_state, labels] = oracle_label(state, out.selected);
  out.selected_class_counts.assign(state.table().num_classes(), 0);
  for (int l : labels) ++out.selected_class_counts[l];
  auto [replenished, shortfall] = replenish(labeled_state, out.selected_class_counts, seeds.replenish(cycle));
  out.state = std::move(replenished);
  out.shortfall = std::move(shortfall);
  for (int c = 0; c < state.table().num_classes(); ++c) {
    if (out.shortfall[c] > 0) {
      std::cerr << "albench: cycle " << cycle << ": unused pool short by " << out.shortfall[c] << " samples of class '"
                << state.class_list()[c] << "'\n";
    }
  }

  context.task_model = train_task_model(out.state, config, data, seeds.task_model(cycle));
  out.metrics = evaluate(*context.task_model, data, state.minority_class(), cycle,
                         static_cast<std::int64_t>(out.state.size(PoolKind::kLabeled)));
  return out;
}

fs::path run_directory(const ExperimentConfig& config, int repeat) {
  return fs::path(config.output_dir) / config.name / std::to_string(repeat);
}

namespace {

std::string cycle0_key(const ExperimentConfig& config, int repeat) {
  json j = config.to_json();
  j.erase("acquisition");
  j.erase("name");
  j.erase("output_dir");
  j.erase("cycles");
  j.erase("samples_per_cycle");
  return config_hash(j) + "/" + std::to_string(repeat);
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& config, const ExperimentData& data, int repeat,
                         const RunOptions& options) {
  config.validate();
  const int minority = config.minority_for_repeat(repeat);
  if (minority >= static_cast<int>(data.class_list.size())) {
    fail(ErrorCode::kConfig, "minority_rotation: class " + std::to_string(minority) + " not in the dataset");
  }
  const RunSeeds seeds{config.seed, repeat};
  const fs::path dir = run_directory(config, repeat);
  const json config_json = config.to_json();

  RunRecord record;
  record.method = acquisition_name(config.acquisition.method);
  record.repeat = repeat;
  record.minority_class = minority;
  record.config_hash = config_hash(config_json);
  record.seeds = {{"master", config.seed}, {"split", seeds.split()}};

  PoolState state = build_al_pools(data.train, minority, config.imbalance, seeds.split());
  ModelContext context;
  int first_cycle = 1;

  auto checkpoint_dir = [&](int cycle) { return dir / ("cycle" + std::to_string(cycle)); };
  auto pool_file = [&](int cycle) { return dir / "pools" / ("cycle" + std::to_string(cycle) + ".json"); };

  if (options.persist && options.resume && fs::exists(dir / "metrics.jsonl")) {
    for (const auto& line : read_lines(dir / "metrics.jsonl")) {
      record.metrics.push_back(cycle_metrics_from_json(json::parse(line)));
    }
    if (!record.metrics.empty()) {
      const int last = record.metrics.back().cycle_index;
      if (last != static_cast<int>(record.metrics.size()) - 1) {
        fail(ErrorCode::kConfig, "metrics.jsonl in " + dir.string() + " is not a prefix of the run");
      }
      std::ifstream prev_config(dir / "config.json");
      json stored;
      prev_config >> stored;
      if (config_hash(stored) != record.config_hash) {
        fail(ErrorCode::kConfig, "cannot resume " + dir.string() + ": configuration changed");
      }
      if (last > 0) {
        std::ifstream pool_in(pool_file(last));
        if (!pool_in) fail(ErrorCode::kIo, "missing pool snapshot " + pool_file(last).string());
        json snap;
        pool_in >> snap;
        state = PoolState::from_json(data.train, snap);
      }
      if (fs::exists(checkpoint_dir(last) / "model" / "model.pt")) {
        context.task_model = std::make_shared<const TrainedModel>(TrainedModel::load(checkpoint_dir(last) / "model"));
      } else {
        context.task_model = train_task_model(state, config, data, seeds.task_model(last));
      }
      // Drop per-cycle rows written after the last committed metrics line.
      std::vector<std::vector<std::string>> kept_selected(static_cast<std::size_t>(last));
      for (const char* file : {"selected.csv", "scores.csv"}) {
        const auto lines = read_lines(dir / file);
        std::string text;
        for (std::size_t i = 0; i < lines.size(); ++i) {
          const auto row = csv::parse_line(lines[i]);
          if (i == 0) {
            text += lines[i] + "\n";
            continue;
          }
          const int cyc = std::stoi(std::string(file) == "selected.csv" ? row.at(0) : row.at(3));
          if (cyc > last) continue;
          text += lines[i] + "\n";
          if (std::string(file) == "selected.csv") kept_selected[cyc - 1].push_back(row.at(1));
        }
        write_text(dir / file, text);
      }
      record.selected = std::move(kept_selected);
      for (int c = 1; c <= last; ++c) {
        ClassCounts counts(data.class_list.size(), 0);
        for (const auto& id : record.selected[c - 1]) ++counts[data.train->samples()[data.train->index_of(id)].true_label];
        record.selected_class_counts.push_back(counts);
        std::ifstream snap_in(pool_file(c));
        json snap;
        snap_in >> snap;
        record.shortfalls.push_back(snap.value("shortfall", ClassCounts(data.class_list.size(), 0)));
      }
      first_cycle = last + 1;
    }
  }

  if (record.metrics.empty()) {
    if (options.persist) {
      fs::create_directories(dir);
      write_text(dir / "config.json", config_json.dump(2) + "\n");
      write_text(dir / "metrics.jsonl", "");
      write_text(dir / "selected.csv", "cycle,sample_id,true_label\n");
      write_text(dir / "scores.csv", "sample_id,score,method,cycle\n");
      write_text(pool_file(0), state.to_json().dump() + "\n");
    }
    const std::string key = cycle0_key(config, repeat);
    if (options.cycle0_cache && options.cycle0_cache->contains(key)) {
      context.task_model = options.cycle0_cache->at(key);
    } else {
      context.task_model = train_task_model(state, config, data, seeds.task_model(0));
      if (options.cycle0_cache) (*options.cycle0_cache)[key] = context.task_model;
    }
    CycleMetrics m0 = evaluate(*context.task_model, data, minority, 0,
                               static_cast<std::int64_t>(state.size(PoolKind::kLabeled)));
    record.metrics.push_back(m0);
    if (options.persist) {
      if (config.save_checkpoints) context.task_model->save(checkpoint_dir(0) / "model");
      append_text(dir / "metrics.jsonl", albench::to_json(m0).dump() + "\n");
    }
  }

  for (int cycle = first_cycle; cycle <= config.cycles; ++cycle) {
    CycleOutcome outcome = run_cycle(state, context, config, data, seeds, cycle);
    if (options.persist) {
      std::string selected_text;
      for (const auto& id : outcome.selected) {
        const auto& s = data.train->samples()[data.train->index_of(id)];
        selected_text += std::to_string(cycle) + "," + csv::escape(id) + "," + std::to_string(s.true_label) + "\n";
      }
      append_text(dir / "selected.csv", selected_text);
      std::ostringstream scores_text;
      scores_text.precision(17);
      for (const auto& s : outcome.scores) {
        scores_text << csv::escape(s.sample_id) << ',' << s.score << ',' << record.method << ',' << cycle << '\n';
      }
      append_text(dir / "scores.csv", scores_text.str());
      json snapshot = outcome.state.to_json();
      snapshot["shortfall"] = outcome.shortfall;
      write_text(pool_file(cycle), snapshot.dump() + "\n");
      if (config.save_checkpoints) {
        context.task_model->save(checkpoint_dir(cycle) / "model");
        if (outcome.discriminator) outcome.discriminator->save(checkpoint_dir(cycle) / "discriminator");
      }
      append_text(dir / "metrics.jsonl", albench::to_json(outcome.metrics).dump() + "\n");
    }
    record.metrics.push_back(outcome.metrics);
    record.selected.push_back(outcome.selected);
    record.selected_class_counts.push_back(outcome.selected_class_counts);
    record.shortfalls.push_back(outcome.shortfall);
    state = std::move(outcome.state);
  }
  if (options.persist) write_text(dir / "run.json", record.to_json().dump(2) + "\n");
  return record;
}

RunRecord run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const ExperimentData data = load_experiment_data(config.dataset, config.seed);
  return run_experiment(config, data, 0, options);
}

std::vector<RunRecord> run_repeats(const ExperimentConfig& config, const ExperimentData& data,
                                   const RunOptions& options) {
  config.validate();
  std::vector<RunRecord> out;
  for (int r = 0; r < config.repeats; ++r) out.push_back(run_experiment(config, data, r, options));
  return out;
}

std::vector<RunRecord> run_repeats(const ExperimentConfig& config, const RunOptions& options) {
  const ExperimentData data = load_experiment_data(config.dataset, config.seed);
  return run_repeats(config, data, options);
}

SweepConfig SweepConfig::from_json(const json& j) {
  SweepConfig s;
  ObjectReader r(j, "sweep");
  s.base = ExperimentConfig::from_json(r.child("base"));
  s.majority_counts = r.require<std::vector<std::int64_t>>("majority_counts");
  for (const auto& m : r.require<std::vector<std::string>>("methods")) s.methods.push_back(parse_acquisition(m));
  r.finish();
  for (auto c : s.majority_counts) {
    if (c < 0) fail(ErrorCode::kConfig, "sweep.majority_counts: must be >= 0");
  }
  return s;
}

SweepConfig SweepConfig::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::kIo, "cannot open sweep config " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, file.string() + ": " + e.what());
  }
  return from_json(j);
}

std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const ExperimentData& data, const RunOptions& options) {
  std::vector<SweepRow> rows;
  std::map<std::string, std::shared_ptr<const TrainedModel>> cache;
  RunOptions opts = options;
  if (!opts.cycle0_cache) opts.cycle0_cache = &cache;
  for (std::int64_t count : sweep.majority_counts) {
    for (AcquisitionKind method : sweep.methods) {
      ExperimentConfig cfg = sweep.base;
      cfg.imbalance.labeled_majority_count_per_class = count;
      cfg.acquisition.method = method;
      cfg.output_dir = (fs::path(sweep.base.output_dir) / sweep.base.name / "sweep").string();
      cfg.name = "majority" + std::to_string(count) + "-" + acquisition_name(method);
      const auto records = run_repeats(cfg, data, opts);
      SweepRow row{count, acquisition_name(method), records.size(), {}};
      for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
        std::vector<double> deltas;
        for (const auto& rec : records) {
          deltas.push_back(performance_delta(rec.metrics.front(), rec.metrics.back()).values[i]);
        }
        const Summary s = mean_sem(deltas);
        row.delta[i] = {s.mean, s.sem};
      }
      rows.push_back(row);
    }
  }
  if (opts.persist) write_sweep_csv(fs::path(sweep.base.output_dir) / sweep.base.name / "sweep.csv", rows);
  return rows;
}

std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const RunOptions& options) {
  const ExperimentData data = load_experiment_data(sweep.base.dataset, sweep.base.seed);
  return run_sweep(sweep, data, options);
}

void write_sweep_csv(const fs::path& file, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "majority_count,method,runs";
  for (const char* name : kMetricNames) out << ",delta_" << name << ",sem_" << name;
  out << "\n";
  for (const auto& r : rows) {
    out << r.majority_count << ',' << r.method << ',' << r.runs;
    for (const auto& d : r.delta) out << ',' << d.mean << ',' << d.sem;
    out << "\n";
  }
  write_text(file, out.str());
}

std::vector<SweepRow> read_sweep_csv(const fs::path& file) {
  auto rows = csv::read_file(file);
  if (rows.empty()) fail(ErrorCode::kIo, file.string() + " is empty");
  rows.erase(rows.begin());
  std::vector<SweepRow> out;
  for (const auto& r : rows) {
    if (r.size() != 3 + 2 * kMetricNames.size()) fail(ErrorCode::kIo, file.string() + ": bad column count");
    SweepRow row{std::stoll(r[0]), r[1], static_cast<std::size_t>(std::stoull(r[2])), {}};
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
      row.delta[i] = {std::stod(r[3 + 2 * i]), std::stod(r[4 + 2 * i])};
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace albench
