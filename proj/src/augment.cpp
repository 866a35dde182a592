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

#include "augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace albench {

std::vector<LabeledRef> oversample_balance(std::span<const LabeledRef> samples, Rng& rng) {
  if (samples.empty()) fail(ErrorCode::kEmptyInput, "oversample_balance needs at least one sample");
  int max_label = 0;
  for (const auto& s : samples) {
    if (s.label < 0) fail(ErrorCode::kInvalidArgument, "negative label");
    max_label = std::max(max_label, s.label);
  }
  std::vector<std::vector<LabeledRef>> by_class(max_label + 1);
  for (const auto& s : samples) by_class[s.label].push_back(s);
  std::size_t target = 0;
  for (const auto& members : by_class) target = std::max(target, members.size());

  std::vector<LabeledRef> out;
  out.reserve(target * by_class.size());
  for (auto& members : by_class) {
    if (members.empty()) continue;
    const std::size_t copies = target / members.size();
    for (std::size_t k = 0; k < copies; ++k) out.insert(out.end(), members.begin(), members.end());
    const std::size_t extra = target - copies * members.size();
    if (extra > 0) {
      std::vector<std::size_t> order(members.size());
      std::iota(order.begin(), order.end(), 0);
      shuffle_range(order.begin(), order.end(), rng);
      for (std::size_t k = 0; k < extra; ++k) out.push_back(members[order[k]]);
    }
  }
  return out;
}

FloatImage to_float(ImageShape shape, std::span<const std::uint8_t> chw) {
  FloatImage img{shape, std::vector<float>(chw.size())};
  for (std::size_t i = 0; i < chw.size(); ++i) img.chw[i] = static_cast<float>(chw[i]) / 255.0f;
  return img;
}

AugmentDraw draw_augmentation(const AugmentConfig& config, Rng& rng) {
  AugmentDraw d;
  d.flip = uniform01(rng) < config.flip_prob;
  d.affine = uniform01(rng) < config.affine_prob;
  if (d.affine) {
    d.shift_x = uniform_real(rng, -config.shift_limit, config.shift_limit);
    d.shift_y = uniform_real(rng, -config.shift_limit, config.shift_limit);
    d.scale = 1.0 + uniform_real(rng, -config.scale_limit, config.scale_limit);
    d.angle_deg = uniform_real(rng, -config.rotate_limit_deg, config.rotate_limit_deg);
  }
  d.color = uniform01(rng) < config.color_prob;
  if (d.color) {
    d.brightness = uniform_real(rng, -config.brightness_limit, config.brightness_limit);
    d.contrast = 1.0 + uniform_real(rng, -config.contrast_limit, config.contrast_limit);
  }
  return d;
}

FloatImage flip_horizontal(const FloatImage& image) {
  FloatImage out = image;
  const int w = image.shape.width;
  const int rows = image.shape.channels * image.shape.height;
  for (int r = 0; r < rows; ++r) {
    const float* src = image.chw.data() + static_cast<std::size_t>(r) * w;
    float* dst = out.chw.data() + static_cast<std::size_t>(r) * w;
    for (int x = 0; x < w; ++x) dst[x] = src[w - 1 - x];
  }
  return out;
}

namespace {

// Reflect-101 border: -1 -> 1, n -> n - 2.
int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

FloatImage warp_affine(const FloatImage& image, const AugmentDraw& d) {
  const int w = image.shape.width, h = image.shape.height, channels = image.shape.channels;
  FloatImage out = image;
  const double theta = d.angle_deg * M_PI / 180.0;
  const double cos_t = std::cos(theta) / d.scale, sin_t = std::sin(theta) / d.scale;
  const double cx = 0.5 * (w - 1), cy = 0.5 * (h - 1);
  const double tx = d.shift_x * w, ty = d.shift_y * h;
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Inverse map: src = R(-theta) (dst - center - shift) / scale + center.
      const double u = x - cx - tx, v = y - cy - ty;
      const double sx = cos_t * u + sin_t * v + cx;
      const double sy = -sin_t * u + cos_t * v + cy;
      const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0, fy = sy - y0;
      const int xa = reflect101(x0, w), xb = reflect101(x0 + 1, w);
      const int ya = reflect101(y0, h), yb = reflect101(y0 + 1, h);
      for (int c = 0; c < channels; ++c) {
        const float* p = image.chw.data() + c * plane;
        const double top = (1 - fx) * p[ya * w + xa] + fx * p[ya * w + xb];
        const double bottom = (1 - fx) * p[yb * w + xa] + fx * p[yb * w + xb];
        out.chw[c * plane + y * w + x] = static_cast<float>((1 - fy) * top + fy * bottom);
      }
    }
  }
  return out;
}

}  // namespace

FloatImage apply_augmentation(const FloatImage& image, const AugmentDraw& d) {
  FloatImage out = d.flip ? flip_horizontal(image) : image;
  if (d.affine) out = warp_affine(out, d);
  if (d.color) {
    for (float& v : out.chw) {
      v = static_cast<float>(std::clamp(d.contrast * v + d.brightness, 0.0, 1.0));
    }
  }
  return out;
}

FloatImage augment_sample(const FloatImage& image, const AugmentConfig& config, Rng& rng) {
  return apply_augmentation(image, draw_augmentation(config, rng));
}

Batch one_hot_batch(ImageShape shape, std::span<const FloatImage> images, std::span<const int> labels,
                    int num_classes) {
  if (images.size() != labels.size()) fail(ErrorCode::kLengthMismatch, "images and labels differ in length");
  Batch b{shape, num_classes, {}, std::vector<float>(labels.size() * num_classes, 0.0f)};
  b.images.reserve(images.size() * shape.pixels());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!(images[i].shape == shape)) fail(ErrorCode::kShapeMismatch, "batch images must share a shape");
    if (labels[i] < 0 || labels[i] >= num_classes) fail(ErrorCode::kInvalidArgument, "label out of range");
    b.images.insert(b.images.end(), images[i].chw.begin(), images[i].chw.end());
    b.labels[i * num_classes + labels[i]] = 1.0f;
  }
  return b;
}

namespace {

void check_partner(const Batch& batch, std::span<const std::size_t> partner) {
  if (partner.size() != batch.size()) fail(ErrorCode::kLengthMismatch, "partner permutation has the wrong length");
  for (std::size_t p : partner) {
    if (p >= batch.size()) fail(ErrorCode::kInvalidArgument, "partner index out of range");
  }
}

void mix_labels(const Batch& in, Batch& out, double lambda, std::span<const std::size_t> partner) {
  const int k = in.num_classes;
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (int c = 0; c < k; ++c) {
      out.labels[i * k + c] = static_cast<float>(lambda * in.labels[i * k + c] +
                                                 (1.0 - lambda) * in.labels[partner[i] * k + c]);
    }
  }
}

}  // namespace

Batch mixup(const Batch& batch, double lambda, std::span<const std::size_t> partner) {
  check_partner(batch, partner);
  Batch out = batch;
  const std::size_t px = batch.shape.pixels();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const float* a = batch.images.data() + i * px;
    const float* b = batch.images.data() + partner[i] * px;
    float* o = out.images.data() + i * px;
    for (std::size_t k = 0; k < px; ++k) o[k] = static_cast<float>(lambda * a[k] + (1.0 - lambda) * b[k]);
  }
  mix_labels(batch, out, lambda, partner);
  return out;
}

std::pair<Batch, double> cutmix(const Batch& batch, const geom::Rect& box, std::span<const std::size_t> partner) {
  check_partner(batch, partner);
  const int w = batch.shape.width, h = batch.shape.height;
  const geom::Rect clipped{std::clamp<std::int64_t>(box.x0, 0, w), std::clamp<std::int64_t>(box.y0, 0, h),
                           std::clamp<std::int64_t>(box.x1, 0, w), std::clamp<std::int64_t>(box.y1, 0, h)};
  const std::int64_t area = std::max<std::int64_t>(0, clipped.x1 - clipped.x0) *
                            std::max<std::int64_t>(0, clipped.y1 - clipped.y0);
  const double lambda = 1.0 - static_cast<double>(area) / (static_cast<double>(w) * h);
  Batch out = batch;
  const std::size_t px = batch.shape.pixels();
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  if (area > 0) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const float* src = batch.images.data() + partner[i] * px;
      float* dst = out.images.data() + i * px;
      for (int c = 0; c < batch.shape.channels; ++c) {
        for (auto y = clipped.y0; y < clipped.y1; ++y) {
          for (auto x = clipped.x0; x < clipped.x1; ++x) dst[c * plane + y * w + x] = src[c * plane + y * w + x];
        }
      }
    }
  }
  mix_labels(batch, out, lambda, partner);
  return {std::move(out), lambda};
}

geom::Rect cutmix_box(ImageShape shape, double lambda, Rng& rng) {
  const double ratio = std::sqrt(std::clamp(1.0 - lambda, 0.0, 1.0));
  const auto cut_w = static_cast<std::int64_t>(shape.width * ratio);
  const auto cut_h = static_cast<std::int64_t>(shape.height * ratio);
  const auto cx = uniform_int(rng, 0, shape.width - 1);
  const auto cy = uniform_int(rng, 0, shape.height - 1);
  return {std::clamp<std::int64_t>(cx - cut_w / 2, 0, shape.width),
          std::clamp<std::int64_t>(cy - cut_h / 2, 0, shape.height),
          std::clamp<std::int64_t>(cx + cut_w / 2, 0, shape.width),
          std::clamp<std::int64_t>(cy + cut_h / 2, 0, shape.height)};
}

BatchAugmentResult batch_augment(const Batch& batch, const BatchAugmentConfig& config, Rng& rng) {
  if (batch.size() < 2) fail(ErrorCode::kBatchTooSmall, "batch augmentation needs at least 2 samples");
  if (uniform01(rng) >= config.prob) return {batch, BatchMix::kNone, 1.0};
  std::vector<std::size_t> partner(batch.size());
  std::iota(partner.begin(), partner.end(), 0);
  shuffle_range(partner.begin(), partner.end(), rng);
  if (uniform01(rng) < 0.5) {
    const double lambda = sample_beta(rng, config.mixup_alpha, config.mixup_alpha);
    return {mixup(batch, lambda, partner), BatchMix::kMixUp, lambda};
  }
  const double lambda = sample_beta(rng, config.cutmix_alpha, config.cutmix_alpha);
  auto [mixed, effective] = cutmix(batch, cutmix_box(batch.shape, lambda, rng), partner);
  return {std::move(mixed), BatchMix::kCutMix, effective};
}

}  // namespace albench
