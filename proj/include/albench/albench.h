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

/* C interface to the albench core. Every call returns an albench_status;
 * on failure albench_last_error() holds a message for the calling thread.
 * Strings returned through `char**` are owned by the caller and released
 * with albench_string_free(). */
#ifndef ALBENCH_ALBENCH_H_
#define ALBENCH_ALBENCH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ALBENCH_BUILDING)
#define ALBENCH_API __attribute__((visibility("default")))
#else
#define ALBENCH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum albench_status {
  ALBENCH_OK = 0,
  ALBENCH_INVALID_ARGUMENT = 1,
  ALBENCH_EMPTY_CLASS = 2,
  ALBENCH_INSUFFICIENT_SAMPLES = 3,
  ALBENCH_NOT_IN_UNLABELED = 4,
  ALBENCH_K_TOO_LARGE = 5,
  ALBENCH_MISSING_MINORITY = 6,
  ALBENCH_MISSING_IMAGE = 7,
  ALBENCH_MALFORMED_ANNOTATION = 8,
  ALBENCH_CONFIG = 9,
  ALBENCH_IO = 10,
  ALBENCH_POOL_EXHAUSTED = 11,
  ALBENCH_LENGTH_MISMATCH = 12,
  ALBENCH_EMPTY_INPUT = 13,
  ALBENCH_SHAPE_MISMATCH = 14,
  ALBENCH_BATCH_TOO_SMALL = 15,
  ALBENCH_INTERNAL = 16,
} albench_status;

typedef enum albench_pool_kind {
  ALBENCH_POOL_LABELED = 0,
  ALBENCH_POOL_UNLABELED = 1,
  ALBENCH_POOL_UNUSED = 2,
} albench_pool_kind;

ALBENCH_API const char* albench_version(void);
ALBENCH_API const char* albench_status_name(albench_status status);
ALBENCH_API const char* albench_last_error(void);
ALBENCH_API void albench_string_free(char* s);

/* Acquisition scores from MC-dropout probabilities laid out [pass][sample][class].
 * `method` is "entropy", "bald" or "variation-ratio". */
ALBENCH_API albench_status albench_score(const char* method, const double* probs, size_t passes, size_t samples,
                                         size_t classes, double* out_scores);

/* Indices (into `ids`) of the k highest scores, ties broken by ascending id. */
ALBENCH_API albench_status albench_select_top_k(const char* const* ids, const double* scores, size_t count, size_t k,
                                                size_t* out_indices);

/* out_metrics: minority recall, minority precision, majority macro recall,
 * majority macro precision, overall accuracy. */
ALBENCH_API albench_status albench_compute_metrics(const int* predictions, const int* labels, size_t count,
                                                   int minority_class, int num_classes, double out_metrics[5],
                                                   int* out_zero_denominator);

ALBENCH_API albench_status albench_mean_sem(const double* values, size_t count, double* out_mean, double* out_sem);

/* Pools over an in-memory id/label table. */
typedef struct albench_pool albench_pool;

typedef struct albench_imbalance {
  int64_t labeled_minority;
  int64_t labeled_majority_per_class;
  int64_t unlabeled_minority;
  int64_t unlabeled_majority_per_class;
} albench_imbalance;

ALBENCH_API albench_status albench_pool_create(const char* const* ids, const int* labels, size_t count,
                                               size_t num_classes, int minority_class,
                                               const albench_imbalance* spec, uint64_t seed, albench_pool** out);
ALBENCH_API void albench_pool_destroy(albench_pool* pool);
ALBENCH_API albench_status albench_pool_size(const albench_pool* pool, albench_pool_kind kind, size_t* out);
ALBENCH_API albench_status albench_pool_class_counts(const albench_pool* pool, albench_pool_kind kind,
                                                     int64_t* out_counts, size_t num_classes);
/* Moves `ids` from unlabeled to labeled; writes their true labels. All or nothing. */
ALBENCH_API albench_status albench_pool_oracle_label(albench_pool* pool, const char* const* ids, size_t count,
                                                     int* out_labels);
ALBENCH_API albench_status albench_pool_replenish(albench_pool* pool, const int64_t* moved_counts,
                                                  size_t num_classes, uint64_t seed, int64_t* out_shortfall);
ALBENCH_API albench_status albench_pool_to_json(const albench_pool* pool, char** out_json);

typedef struct albench_patchify_options {
  int patch_size;
  int class_patches_per_image;
  int background_patches_per_image;
  int attempts_per_patch;
  uint64_t seed;
} albench_patchify_options;

ALBENCH_API void albench_patchify_defaults(albench_patchify_options* options);
/* out_stats_json may be NULL. */
ALBENCH_API albench_status albench_patchify(const char* annotation_file, const char* images_dir, const char* out_dir,
                                            const albench_patchify_options* options, char** out_stats_json);

/* An experiment loaded from a JSON config file. */
typedef struct albench_experiment albench_experiment;

ALBENCH_API albench_status albench_experiment_load(const char* config_file, albench_experiment** out);
ALBENCH_API void albench_experiment_destroy(albench_experiment* experiment);
/* Runs every repeat; out_summary_json (may be NULL) lists the run records. */
ALBENCH_API albench_status albench_experiment_run(albench_experiment* experiment, int resume,
                                                  char** out_summary_json);

ALBENCH_API albench_status albench_sweep(const char* sweep_config_file, char** out_summary_json);

/* Writes summary.csv, curves.svg, sweep.svg (when sweeps exist) and
 * summary.json into out_dir (NULL: runs_dir/report). */
ALBENCH_API albench_status albench_report(const char* runs_dir, const char* out_dir, char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* ALBENCH_ALBENCH_H_ */
