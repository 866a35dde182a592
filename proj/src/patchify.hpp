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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "geometry.hpp"
#include "seed.hpp"

namespace albench {

inline constexpr const char* kBackgroundClass = "Background";

struct InstanceAnnotation {
  std::string image_id;
  std::string annotation_id;
  std::string category;
  std::vector<geom::Ring> rings;
};

struct ImageDims {
  int width = 0;
  int height = 0;
};

struct PatchSpec {
  std::string image_id;
  int cx = 0;
  int cy = 0;
  int size = 0;
  std::string category;

  // [cx - size/2, cx - size/2 + size) on both axes.
  geom::Rect window() const {
    const int lo_x = cx - size / 2;
    const int lo_y = cy - size / 2;
    return {lo_x, lo_y, lo_x + size, lo_y + size};
  }
};

struct PatchifyConfig {
  int patch_size = 160;
  int class_patches_per_image = 100;
  int background_patches_per_image = 10;
  // Resampling budget for each desired patch.
  int attempts_per_patch = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class RejectReason { kOverlap, kForeignClass, kOutOfBounds };

const char* reject_reason_name(RejectReason reason);

// nullopt means accept. Criteria are checked in the order overlap, foreign
// class, out of bounds.
std::optional<RejectReason> validate_patch(const PatchSpec& candidate, std::span<const PatchSpec> accepted,
                                           std::span<const InstanceAnnotation> annotations, ImageDims dims);

struct PatchifyStats {
  std::int64_t class_requested = 0;
  std::int64_t class_accepted = 0;
  std::int64_t background_requested = 0;
  std::int64_t background_accepted = 0;
  // Draws whose center missed the instance polygon.
  std::int64_t center_outside = 0;
  std::array<std::int64_t, 3> rejections{};  // indexed by RejectReason

  void merge(const PatchifyStats& other);
};

struct ImagePatches {
  std::vector<PatchSpec> patches;
  PatchifyStats stats;
};

// Class patches first (budget spread round-robin over the instances in a
// shuffled order, centers drawn inside the instance), then background
// patches (centers anywhere in the image).
ImagePatches patchify_image(std::span<const InstanceAnnotation> annotations, ImageDims dims,
                            const PatchifyConfig& config, Rng& rng);

struct ManifestRow {
  std::string patch_path;
  std::string source_image;
  int cx = 0;
  int cy = 0;
  std::string category;
};

struct CocoImage {
  std::string id;
  std::string file_name;
  ImageDims dims;
};

struct CocoDataset {
  std::vector<CocoImage> images;  // sorted by id
  std::map<std::string, std::vector<InstanceAnnotation>> annotations_by_image;
};

// Polygon segmentations only; RLE masks are rejected as malformed.
CocoDataset parse_coco(const nlohmann::json& doc);
CocoDataset load_coco(const std::filesystem::path& annotation_file);

std::uint64_t image_seed(std::uint64_t seed, const std::string& image_id);

struct PatchifyResult {
  std::vector<ManifestRow> manifest;
  PatchifyStats totals;
  nlohmann::json statistics;
};

// Writes <out>/patches/<category>/<image>_<k>.png, <out>/manifest.csv and
// <out>/stats.json. Every referenced image is checked before anything is
// written.
PatchifyResult patchify_dataset(const std::filesystem::path& annotation_file,
                                const std::filesystem::path& images_dir, const std::filesystem::path& out_dir,
                                const PatchifyConfig& config);

std::vector<ManifestRow> filter_classes(std::span<const ManifestRow> manifest, std::int64_t min_samples,
                                        std::span<const std::string> drop_classes);

void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows);
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

std::map<std::string, std::int64_t> class_histogram(std::span<const ManifestRow> rows);

}  // namespace albench
