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
#include <cstdint>
#include <span>
#include <vector>

#include "error.hpp"

namespace albench {

struct ImageShape {
  int channels = 3;
  int height = 32;
  int width = 32;

  std::size_t pixels() const { return static_cast<std::size_t>(channels) * height * width; }
  bool operator==(const ImageShape&) const = default;
};

// Contiguous CHW uint8 images of a single shape. Samples refer to images by
// their index in the store.
class ImageStore {
 public:
  ImageStore() = default;
  explicit ImageStore(ImageShape shape) : shape_(shape) {}

  const ImageShape& shape() const { return shape_; }
  std::size_t size() const { return shape_.pixels() == 0 ? 0 : pixels_.size() / shape_.pixels(); }

  std::size_t add(std::span<const std::uint8_t> chw) {
    if (chw.size() != shape_.pixels()) {
      fail(ErrorCode::kShapeMismatch, "image has " + std::to_string(chw.size()) + " values, store expects " +
                                          std::to_string(shape_.pixels()));
    }
    pixels_.insert(pixels_.end(), chw.begin(), chw.end());
    return size() - 1;
  }

  std::span<const std::uint8_t> image(std::size_t index) const {
    return {pixels_.data() + index * shape_.pixels(), shape_.pixels()};
  }

  void reserve(std::size_t count) { pixels_.reserve(count * shape_.pixels()); }

 private:
  ImageShape shape_;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace albench
