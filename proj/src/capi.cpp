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

#include "albench/albench.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "acquisition.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "metrics.hpp"
#include "patchify.hpp"
#include "pools.hpp"
#include "report.hpp"

struct albench_pool {
  albench::PoolState state;
};

struct albench_experiment {
  albench::ExperimentConfig config;
};

namespace {

thread_local std::string g_last_error;

albench_status record(albench::ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<albench_status>(code);
}

template <typename Fn>
albench_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return ALBENCH_OK;
  } catch (const albench::Error& e) {
    return record(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(albench::ErrorCode::kConfig, std::string("Config: ") + e.what());
  } catch (const std::exception& e) {
    return record(albench::ErrorCode::kInternal, std::string("Internal: ") + e.what());
  } catch (...) {
    return record(albench::ErrorCode::kInternal, "Internal: unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) albench::fail(albench::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const nlohmann::json& j) {
  if (out != nullptr) *out = dup_string(j.dump(2));
}

albench::PoolKind to_kind(albench_pool_kind kind) {
  switch (kind) {
    case ALBENCH_POOL_LABELED: return albench::PoolKind::kLabeled;
    case ALBENCH_POOL_UNLABELED: return albench::PoolKind::kUnlabeled;
    case ALBENCH_POOL_UNUSED: return albench::PoolKind::kUnused;
  }
  albench::fail(albench::ErrorCode::kInvalidArgument, "unknown pool kind");
}

std::vector<std::string> to_strings(const char* const* ids, std::size_t count) {
  require(ids != nullptr || count == 0, "ids is null");
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    require(ids[i] != nullptr, "null id");
    out.emplace_back(ids[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* albench_version(void) { return "0.1.0"; }

const char* albench_status_name(albench_status status) {
  if (status == ALBENCH_OK) return "Ok";
  return albench::error_code_name(static_cast<albench::ErrorCode>(status));
}

const char* albench_last_error(void) { return g_last_error.c_str(); }

void albench_string_free(char* s) { std::free(s); }

albench_status albench_score(const char* method, const double* probs, size_t passes, size_t samples, size_t classes,
                             double* out_scores) {
  return guarded([&] {
    require(method != nullptr && probs != nullptr && out_scores != nullptr, "null argument");
    albench::McProbs mc(passes, samples, classes);
    std::copy(probs, probs + mc.data.size(), mc.data.begin());
    std::vector<double> scores;
    switch (albench::parse_acquisition(method)) {
      case albench::AcquisitionKind::kEntropy: scores = albench::score_entropy(mc); break;
      case albench::AcquisitionKind::kBald: scores = albench::score_bald(mc); break;
      case albench::AcquisitionKind::kVariationRatio: scores = albench::score_variation_ratio(mc); break;
      default: albench::fail(albench::ErrorCode::kInvalidArgument, std::string("method ") + method +
                                                                        " does not score MC probabilities");
    }
    std::copy(scores.begin(), scores.end(), out_scores);
  });
}

albench_status albench_select_top_k(const char* const* ids, const double* scores, size_t count, size_t k,
                                    size_t* out_indices) {
  return guarded([&] {
    require((scores != nullptr || count == 0) && (out_indices != nullptr || k == 0), "null argument");
    const auto names = to_strings(ids, count);
    const auto chosen = albench::select_top_k(albench::attach_ids(names, {scores, count}), k);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      out_indices[i] = static_cast<std::size_t>(std::find(names.begin(), names.end(), chosen[i]) - names.begin());
    }
  });
}

albench_status albench_compute_metrics(const int* predictions, const int* labels, size_t count, int minority_class,
                                       int num_classes, double out_metrics[5], int* out_zero_denominator) {
  return guarded([&] {
    require((predictions != nullptr && labels != nullptr) || count == 0, "null input");
    require(out_metrics != nullptr, "null output");
    const auto m = albench::compute_metrics({predictions, count}, {labels, count}, minority_class, num_classes);
    for (std::size_t i = 0; i < 5; ++i) out_metrics[i] = albench::metric_value(m, i);
    if (out_zero_denominator != nullptr) *out_zero_denominator = m.zero_denominator ? 1 : 0;
  });
}

albench_status albench_mean_sem(const double* values, size_t count, double* out_mean, double* out_sem) {
  return guarded([&] {
    require((values != nullptr || count == 0) && out_mean != nullptr && out_sem != nullptr, "null argument");
    const auto s = albench::mean_sem({values, count});
    *out_mean = s.mean;
    *out_sem = s.sem;
  });
}

albench_status albench_pool_create(const char* const* ids, const int* labels, size_t count, size_t num_classes,
                                   int minority_class, const albench_imbalance* spec, uint64_t seed,
                                   albench_pool** out) {
  return guarded([&] {
    require(labels != nullptr && spec != nullptr && out != nullptr, "null argument");
    const auto names = to_strings(ids, count);
    std::vector<albench::Sample> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) samples.push_back({names[i], i, labels[i]});
    std::vector<std::string> classes;
    for (std::size_t c = 0; c < num_classes; ++c) classes.push_back("class" + std::to_string(c));
    auto table = std::make_shared<const albench::SampleTable>(std::move(samples), std::move(classes));
    const albench::ImbalanceSpec imbalance{spec->labeled_minority, spec->labeled_majority_per_class,
                                           spec->unlabeled_minority, spec->unlabeled_majority_per_class};
    *out = new albench_pool{albench::build_al_pools(table, minority_class, imbalance, seed)};
  });
}

void albench_pool_destroy(albench_pool* pool) { delete pool; }

albench_status albench_pool_size(const albench_pool* pool, albench_pool_kind kind, size_t* out) {
  return guarded([&] {
    require(pool != nullptr && out != nullptr, "null argument");
    *out = pool->state.size(to_kind(kind));
  });
}

albench_status albench_pool_class_counts(const albench_pool* pool, albench_pool_kind kind, int64_t* out_counts,
                                         size_t num_classes) {
  return guarded([&] {
    require(pool != nullptr && out_counts != nullptr, "null argument");
    const auto counts = pool->state.class_counts(to_kind(kind));
    if (counts.size() != num_classes) albench::fail(albench::ErrorCode::kLengthMismatch, "class count mismatch");
    std::copy(counts.begin(), counts.end(), out_counts);
  });
}

albench_status albench_pool_oracle_label(albench_pool* pool, const char* const* ids, size_t count, int* out_labels) {
  return guarded([&] {
    require(pool != nullptr && (out_labels != nullptr || count == 0), "null argument");
    auto [next, labels] = albench::oracle_label(pool->state, to_strings(ids, count));
    std::copy(labels.begin(), labels.end(), out_labels);
    pool->state = std::move(next);
  });
}

albench_status albench_pool_replenish(albench_pool* pool, const int64_t* moved_counts, size_t num_classes,
                                      uint64_t seed, int64_t* out_shortfall) {
  return guarded([&] {
    require(pool != nullptr && moved_counts != nullptr, "null argument");
    auto [next, shortfall] =
        albench::replenish(pool->state, albench::ClassCounts(moved_counts, moved_counts + num_classes), seed);
    if (out_shortfall != nullptr) std::copy(shortfall.begin(), shortfall.end(), out_shortfall);
    pool->state = std::move(next);
  });
}

albench_status albench_pool_to_json(const albench_pool* pool, char** out_json) {
  return guarded([&] {
    require(pool != nullptr && out_json != nullptr, "null argument");
    emit(out_json, pool->state.to_json());
  });
}

void albench_patchify_defaults(albench_patchify_options* options) {
  if (options == nullptr) return;
  const albench::PatchifyConfig d;
  *options = {d.patch_size, d.class_patches_per_image, d.background_patches_per_image, d.attempts_per_patch,
              d.seed};
}

albench_status albench_patchify(const char* annotation_file, const char* images_dir, const char* out_dir,
                                const albench_patchify_options* options, char** out_stats_json) {
  return guarded([&] {
    require(annotation_file != nullptr && images_dir != nullptr && out_dir != nullptr, "null path");
    albench::PatchifyConfig config;
    if (options != nullptr) {
      config = {options->patch_size, options->class_patches_per_image, options->background_patches_per_image,
                options->attempts_per_patch, options->seed};
    }
    const auto result = albench::patchify_dataset(annotation_file, images_dir, out_dir, config);
    emit(out_stats_json, result.statistics);
  });
}

albench_status albench_experiment_load(const char* config_file, albench_experiment** out) {
  return guarded([&] {
    require(config_file != nullptr && out != nullptr, "null argument");
    *out = new albench_experiment{albench::ExperimentConfig::load(config_file)};
  });
}

void albench_experiment_destroy(albench_experiment* experiment) { delete experiment; }

albench_status albench_experiment_run(albench_experiment* experiment, int resume, char** out_summary_json) {
  return guarded([&] {
    require(experiment != nullptr, "null experiment");
    albench::RunOptions options;
    options.resume = resume != 0;
    const auto records = albench::run_repeats(experiment->config, options);
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : records) {
      auto j = r.to_json();
      j["directory"] = albench::run_directory(experiment->config, r.repeat).string();
      runs.push_back(std::move(j));
    }
    emit(out_summary_json, {{"name", experiment->config.name}, {"runs", runs}});
  });
}

albench_status albench_sweep(const char* sweep_config_file, char** out_summary_json) {
  return guarded([&] {
    require(sweep_config_file != nullptr, "null path");
    const auto sweep = albench::SweepConfig::load(sweep_config_file);
    albench::ReportInput input;
    input.sweep = albench::run_sweep(sweep);
    emit(out_summary_json, albench::summary_json(input));
  });
}

albench_status albench_report(const char* runs_dir, const char* out_dir, char** out_summary_json) {
  return guarded([&] {
    require(runs_dir != nullptr, "null path");
    const std::filesystem::path root(runs_dir);
    auto input = albench::aggregate_runs(albench::load_runs(root));
    input.sweep = albench::load_sweeps(root);
    const auto target = out_dir != nullptr ? std::filesystem::path(out_dir) : root / "report";
    const auto files = albench::emit_report(input, target);
    auto summary = albench::summary_json(input);
    summary["files"] = nlohmann::json::array();
    for (const auto& f : files) summary["files"].push_back(f.string());
    emit(out_summary_json, summary);
  });
}

}  // extern "C"
