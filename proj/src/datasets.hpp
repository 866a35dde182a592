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
#include <memory>
#include <string>
#include <vector>

#include "image.hpp"
#include "pools.hpp"

namespace albench {

struct LabeledDataset {
  std::vector<std::string> class_list;
  std::shared_ptr<ImageStore> images;
  std::vector<Sample> samples;
};

// A dataset that ships with a fixed train/test partition.
struct SplitDataset {
  std::vector<std::string> class_list;
  std::shared_ptr<ImageStore> images;
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// CIFAR-10 binary distribution: data_batch_{1..5}.bin, test_batch.bin and
// optionally batches.meta.txt. `classes` selects and orders a subset of the
// ten labels (empty = all ten); labels are remapped to positions in it.
SplitDataset load_cifar10(const std::filesystem::path& dir, const std::vector<int>& classes = {});

// Writes records in the CIFAR-10 binary layout (label byte + 3072 planar RGB
// bytes). Used to build fixtures.
void write_cifar10_batch(const std::filesystem::path& file, const std::vector<std::uint8_t>& labels,
                         const std::vector<std::vector<std::uint8_t>>& chw_images);

// CSV manifest of `relative_path,label` (header optional). Images are resized
// to `shape` when their size differs. `class_order` fixes the class list;
// empty sorts the label names.
LabeledDataset load_image_folder(const std::filesystem::path& root, const std::filesystem::path& manifest,
                                 ImageShape shape, const std::vector<std::string>& class_order = {});

// Manifest written by the patch converter: `patch_path,source_image,cx,cy,category`
// with paths relative to the manifest's directory.
LabeledDataset load_patch_manifest(const std::filesystem::path& manifest, ImageShape shape,
                                   const std::vector<std::string>& class_order = {});

enum class SyntheticKind { kSeparable, kTextured };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kSeparable;
  int num_classes = 3;
  int per_class = 100;
  int image_size = 16;
  double noise = 0.08;
  std::uint64_t seed = 0;
};

// Procedural image classification data. Separable: every class is a distinct
// flat color plus pixel noise. Textured: every class is a stripe orientation
// with random phase, frequency, tint and noise.
LabeledDataset make_synthetic(const SyntheticSpec& spec);

}  // namespace albench
