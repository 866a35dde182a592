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

#include <cstddef>
#include <span>
#include <vector>

#include "geometry.hpp"
#include "image.hpp"
#include "seed.hpp"

namespace albench {

struct LabeledRef {
  std::size_t image_index = 0;
  int label = 0;

  bool operator==(const LabeledRef&) const = default;
};

// Brings every present class up to the largest class count: each sample of a
// class with n members is repeated floor(max/n) times, and max mod n distinct
// members (seeded draw) get one extra copy.
std::vector<LabeledRef> oversample_balance(std::span<const LabeledRef> samples, Rng& rng);

// CHW float image with values in [0, 1].
struct FloatImage {
  ImageShape shape;
  std::vector<float> chw;
};

FloatImage to_float(ImageShape shape, std::span<const std::uint8_t> chw);

struct AugmentConfig {
  double flip_prob = 0.5;
  // Shift/scale/rotate are drawn together, as are brightness/contrast.
  double affine_prob = 0.5;
  double shift_limit = 0.1;  // fraction of the image side
  double scale_limit = 0.1;
  double rotate_limit_deg = 15.0;
  double color_prob = 0.5;
  double brightness_limit = 0.2;
  double contrast_limit = 0.2;
};

struct AugmentDraw {
  bool flip = false;
  bool affine = false;
  double shift_x = 0;  // fraction of width
  double shift_y = 0;
  double scale = 1;
  double angle_deg = 0;
  bool color = false;
  double brightness = 0;  // additive
  double contrast = 1;    // multiplicative
};

AugmentDraw draw_augmentation(const AugmentConfig& config, Rng& rng);
FloatImage apply_augmentation(const FloatImage& image, const AugmentDraw& draw);
FloatImage augment_sample(const FloatImage& image, const AugmentConfig& config, Rng& rng);

FloatImage flip_horizontal(const FloatImage& image);

// N images plus N soft label rows over `num_classes` classes.
struct Batch {
  ImageShape shape;
  int num_classes = 0;
  std::vector<float> images;
  std::vector<float> labels;

  std::size_t size() const { return shape.pixels() == 0 ? 0 : images.size() / shape.pixels(); }
};

Batch one_hot_batch(ImageShape shape, std::span<const FloatImage> images, std::span<const int> labels,
                    int num_classes);

struct BatchAugmentConfig {
  double mixup_alpha = 0.2;
  double cutmix_alpha = 1.0;
  double prob = 0.5;
};

enum class BatchMix { kNone, kMixUp, kCutMix };

// x_i' = lambda x_i + (1 - lambda) x_partner[i]; labels mix identically.
Batch mixup(const Batch& batch, double lambda, std::span<const std::size_t> partner);

// Pastes `box` from each partner image; labels mix by pasted area. Returns
// the batch and the effective weight of the original image.
std::pair<Batch, double> cutmix(const Batch& batch, const geom::Rect& box, std::span<const std::size_t> partner);

// Box with area fraction about (1 - lambda) at a uniform center, clipped to
// the image.
geom::Rect cutmix_box(ImageShape shape, double lambda, Rng& rng);

struct BatchAugmentResult {
  Batch batch;
  BatchMix applied = BatchMix::kNone;
  double lambda = 1.0;
};

// With probability config.prob applies MixUp or CutMix (fair coin) using a
// random partner permutation and lambda ~ Beta(alpha, alpha).
BatchAugmentResult batch_augment(const Batch& batch, const BatchAugmentConfig& config, Rng& rng);

}  // namespace albench
