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
#include <vector>

namespace albench {

// Interleaved (HWC) 8-bit image as decoded from disk; RGB order for 3
// channels.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> hwc;
};

// Throws MissingImage when the file is absent and Io when decoding fails.
RasterImage read_image(const std::filesystem::path& path, int channels = 3);

// PNG, lossless.
void write_png(const std::filesystem::path& path, const RasterImage& image);

RasterImage crop(const RasterImage& image, int x0, int y0, int width, int height);
RasterImage resize(const RasterImage& image, int width, int height);

// HWC -> CHW.
std::vector<std::uint8_t> to_chw(const RasterImage& image);

}  // namespace albench
