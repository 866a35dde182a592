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

// Command-line front end; talks to the library only through the C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "albench/albench.h"

namespace {

int finish(albench_status status, char* json, bool print_json) {
  if (status != ALBENCH_OK) {
    std::fprintf(stderr, "albench: %s\n", albench_last_error());
    return static_cast<int>(status);
  }
  if (print_json && json != nullptr) std::printf("%s\n", json);
  albench_string_free(json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-imbalanced active learning benchmark"};
  app.set_version_flag("--version", albench_version());
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Do not print the JSON summary");

  albench_patchify_options popts;
  albench_patchify_defaults(&popts);
  std::string annotations, images, out;
  auto* patchify = app.add_subcommand("patchify", "Cut class and background patches from COCO polygons");
  patchify->add_option("--annotations", annotations, "COCO annotation JSON")->required()->check(CLI::ExistingFile);
  patchify->add_option("--images", images, "Directory with the source images")->required();
  patchify->add_option("--out", out, "Output directory")->required();
  patchify->add_option("--patch-size", popts.patch_size, "Square patch side in pixels")->capture_default_str();
  patchify->add_option("--class-patches", popts.class_patches_per_image, "Class patches per image")
      ->capture_default_str();
  patchify->add_option("--bg-patches", popts.background_patches_per_image, "Background patches per image")
      ->capture_default_str();
  patchify->add_option("--attempts", popts.attempts_per_patch, "Sampling attempts per patch")->capture_default_str();
  patchify->add_option("--seed", popts.seed, "Random seed")->capture_default_str();

  std::string config;
  bool resume = false;
  auto* run = app.add_subcommand("run", "Run an active-learning experiment");
  run->add_option("--config", config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  run->add_flag("--resume", resume, "Continue from the last committed cycle");

  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "Run an imbalance-ratio sweep");
  sweep->add_option("--config", sweep_config, "Sweep JSON")->required()->check(CLI::ExistingFile);

  std::string runs_dir, report_out;
  auto* report = app.add_subcommand("report", "Aggregate runs into CSV, SVG and JSON");
  report->add_option("--runs", runs_dir, "Directory containing runs")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", report_out, "Output directory (default: <runs>/report)");

  CLI11_PARSE(app, argc, argv);

  char* json = nullptr;
  albench_status status = ALBENCH_OK;
  if (*patchify) {
    status = albench_patchify(annotations.c_str(), images.c_str(), out.c_str(), &popts, &json);
  } else if (*run) {
    albench_experiment* experiment = nullptr;
    status = albench_experiment_load(config.c_str(), &experiment);
    if (status == ALBENCH_OK) status = albench_experiment_run(experiment, resume ? 1 : 0, &json);
    albench_experiment_destroy(experiment);
  } else if (*sweep) {
    status = albench_sweep(sweep_config.c_str(), &json);
  } else {
    status = albench_report(runs_dir.c_str(), report_out.empty() ? nullptr : report_out.c_str(), &json);
  }
  return finish(status, json, !quiet);
}
