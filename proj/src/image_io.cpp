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

#include "image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "error.hpp"

namespace albench {

namespace {

cv::Mat as_mat(const RasterImage& image) {
  const int type = CV_8UC(image.channels);
  return cv::Mat(image.height, image.width, type, const_cast<std::uint8_t*>(image.hwc.data()));
}

RasterImage from_mat(const cv::Mat& mat) {
  RasterImage out;
  out.width = mat.cols;
  out.height = mat.rows;
  out.channels = mat.channels();
  cv::Mat contiguous = mat.isContinuous() ? mat : mat.clone();
  out.hwc.assign(contiguous.data, contiguous.data + contiguous.total() * contiguous.elemSize());
  return out;
}

}  // namespace

RasterImage read_image(const std::filesystem::path& path, int channels) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kMissingImage, path.string());
  const int flag = channels == 1 ? cv::IMREAD_GRAYSCALE : cv::IMREAD_COLOR;
  cv::Mat mat = cv::imread(path.string(), flag);
  if (mat.empty()) fail(ErrorCode::kIo, "cannot decode image " + path.string());
  if (channels == 3) cv::cvtColor(mat, mat, cv::COLOR_BGR2RGB);
  return from_mat(mat);
}

void write_png(const std::filesystem::path& path, const RasterImage& image) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  cv::Mat mat = as_mat(image);
  cv::Mat bgr;
  if (image.channels == 3) {
    cv::cvtColor(mat, bgr, cv::COLOR_RGB2BGR);
  } else {
    bgr = mat;
  }
  if (!cv::imwrite(path.string(), bgr)) fail(ErrorCode::kIo, "cannot write " + path.string());
}

RasterImage crop(const RasterImage& image, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || x0 + width > image.width || y0 + height > image.height) {
    fail(ErrorCode::kInvalidArgument, "crop window outside the image");
  }
  return from_mat(as_mat(image)(cv::Rect(x0, y0, width, height)));
}

RasterImage resize(const RasterImage& image, int width, int height) {
  if (image.width == width && image.height == height) return image;
  cv::Mat out;
  cv::resize(as_mat(image), out, cv::Size(width, height), 0, 0, cv::INTER_AREA);
  auto r = from_mat(out);
  r.channels = image.channels;
  return r;
}

std::vector<std::uint8_t> to_chw(const RasterImage& image) {
  std::vector<std::uint8_t> chw(image.hwc.size());
  const std::size_t plane = static_cast<std::size_t>(image.width) * image.height;
  for (std::size_t p = 0; p < plane; ++p) {
    for (int c = 0; c < image.channels; ++c) chw[c * plane + p] = image.hwc[p * image.channels + c];
  }
  return chw;
}

}  // namespace albench
