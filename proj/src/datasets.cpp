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

#include "datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "csv.hpp"
#include "error.hpp"
#include "image_io.hpp"
#include "seed.hpp"

namespace albench {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kCifarPixels = 3 * 32 * 32;
constexpr std::array<const char*, 10> kCifarNames = {"airplane", "automobile", "bird", "cat", "deer",
                                                     "dog",      "frog",       "horse", "ship", "truck"};

std::vector<std::string> cifar_class_names(const fs::path& dir) {
  std::vector<std::string> names(kCifarNames.begin(), kCifarNames.end());
  std::ifstream meta(dir / "batches.meta.txt");
  std::string line;
  std::vector<std::string> read;
  while (meta && std::getline(meta, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) read.push_back(line);
  }
  if (read.size() == 10) names = read;
  return names;
}

void read_cifar_file(const fs::path& file, const std::string& prefix, const std::vector<int>& remap,
                     ImageStore& store, std::vector<Sample>& out) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open CIFAR-10 batch " + file.string());
  std::vector<std::uint8_t> record(kCifarPixels + 1);
  std::size_t index = 0;
  while (in.read(reinterpret_cast<char*>(record.data()), static_cast<std::streamsize>(record.size()))) {
    const int raw = record[0];
    if (raw > 9) fail(ErrorCode::kIo, file.string() + ": label byte " + std::to_string(raw) + " out of range");
    if (remap[raw] >= 0) {
      const std::size_t image = store.add(std::span<const std::uint8_t>(record.data() + 1, kCifarPixels));
      char id[64];
      std::snprintf(id, sizeof id, "%s-%05zu", prefix.c_str(), index);
      out.push_back(Sample{id, image, remap[raw]});
    }
    ++index;
  }
  if (in.gcount() != 0) fail(ErrorCode::kIo, file.string() + " has a truncated record");
}

std::string stem_label(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
  return s;
}

LabeledDataset load_labeled_paths(const std::vector<std::pair<fs::path, std::string>>& entries,
                                  const std::vector<std::string>& ids, ImageShape shape,
                                  const std::vector<std::string>& class_order) {
  LabeledDataset ds;
  if (class_order.empty()) {
    std::set<std::string> names;
    for (const auto& e : entries) names.insert(e.second);
    ds.class_list.assign(names.begin(), names.end());
  } else {
    ds.class_list = class_order;
  }
  std::map<std::string, int> label_of;
  for (std::size_t i = 0; i < ds.class_list.size(); ++i) label_of[ds.class_list[i]] = static_cast<int>(i);

  ds.images = std::make_shared<ImageStore>(shape);
  ds.images->reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto it = label_of.find(entries[i].second);
    if (it == label_of.end()) continue;  // class filtered out by class_order
    RasterImage img = read_image(entries[i].first, shape.channels);
    img = resize(img, shape.width, shape.height);
    const std::size_t index = ds.images->add(to_chw(img));
    ds.samples.push_back(Sample{ids[i], index, it->second});
  }
  return ds;
}

}  // namespace

SplitDataset load_cifar10(const fs::path& dir, const std::vector<int>& classes) {
  std::vector<int> chosen = classes;
  if (chosen.empty()) {
    for (int c = 0; c < 10; ++c) chosen.push_back(c);
  }
  std::vector<int> remap(10, -1);
  const auto names = cifar_class_names(dir);
  SplitDataset ds;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const int c = chosen[i];
    if (c < 0 || c > 9 || remap[c] >= 0) fail(ErrorCode::kConfig, "invalid CIFAR-10 class selection");
    remap[c] = static_cast<int>(i);
    ds.class_list.push_back(names[c]);
  }
  ds.images = std::make_shared<ImageStore>(ImageShape{3, 32, 32});
  for (int b = 1; b <= 5; ++b) {
    read_cifar_file(dir / ("data_batch_" + std::to_string(b) + ".bin"), "cifar-train" + std::to_string(b), remap,
                    *ds.images, ds.train);
  }
  read_cifar_file(dir / "test_batch.bin", "cifar-test", remap, *ds.images, ds.test);
  return ds;
}

void write_cifar10_batch(const fs::path& file, const std::vector<std::uint8_t>& labels,
                         const std::vector<std::vector<std::uint8_t>>& chw_images) {
  if (labels.size() != chw_images.size()) fail(ErrorCode::kLengthMismatch, "labels and images differ in length");
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + file.string());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (chw_images[i].size() != kCifarPixels) fail(ErrorCode::kShapeMismatch, "CIFAR images are 3x32x32");
    out.put(static_cast<char>(labels[i]));
    out.write(reinterpret_cast<const char*>(chw_images[i].data()), static_cast<std::streamsize>(kCifarPixels));
  }
}

LabeledDataset load_image_folder(const fs::path& root, const fs::path& manifest, ImageShape shape,
                                 const std::vector<std::string>& class_order) {
  auto rows = csv::read_file(manifest);
  if (!rows.empty() && rows.front().size() >= 2 && rows.front()[0] == "relative_path") rows.erase(rows.begin());
  std::vector<std::pair<fs::path, std::string>> entries;
  std::vector<std::string> ids;
  for (const auto& row : rows) {
    if (row.size() < 2) fail(ErrorCode::kIo, manifest.string() + ": expected `relative_path,label` rows");
    entries.emplace_back(root / row[0], stem_label(row[1]));
    ids.push_back(row[0]);
  }
  return load_labeled_paths(entries, ids, shape, class_order);
}

LabeledDataset load_patch_manifest(const fs::path& manifest, ImageShape shape,
                                   const std::vector<std::string>& class_order) {
  auto rows = csv::read_file(manifest);
  if (!rows.empty() && !rows.front().empty() && rows.front()[0] == "patch_path") rows.erase(rows.begin());
  std::vector<std::pair<fs::path, std::string>> entries;
  std::vector<std::string> ids;
  const fs::path base = manifest.parent_path();
  for (const auto& row : rows) {
    if (row.size() != 5) fail(ErrorCode::kIo, manifest.string() + ": expected 5 columns per row");
    entries.emplace_back(base / row[0], stem_label(row[4]));
    ids.push_back(row[0]);
  }
  return load_labeled_paths(entries, ids, shape, class_order);
}

LabeledDataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.num_classes < 2 || spec.per_class < 1 || spec.image_size < 4) {
    fail(ErrorCode::kConfig, "synthetic dataset needs >= 2 classes, >= 1 sample per class, size >= 4");
  }
  // Evenly spaced hues, fully saturated.
  auto palette = [&](int c) {
    const double h = 6.0 * c / spec.num_classes;
    const double x = 1.0 - std::abs(std::fmod(h, 2.0) - 1.0);
    std::array<double, 3> rgb{};
    switch (static_cast<int>(h)) {
      case 0: rgb = {1, x, 0}; break;
      case 1: rgb = {x, 1, 0}; break;
      case 2: rgb = {0, 1, x}; break;
      case 3: rgb = {0, x, 1}; break;
      case 4: rgb = {x, 0, 1}; break;
      default: rgb = {1, 0, x}; break;
    }
    for (auto& v : rgb) v = 0.15 + 0.7 * v;
    return rgb;
  };

  LabeledDataset ds;
  const int n = spec.image_size;
  ds.images = std::make_shared<ImageStore>(ImageShape{3, n, n});
  for (int c = 0; c < spec.num_classes; ++c) ds.class_list.push_back("class" + std::to_string(c));
  const SeedChain chain = SeedChain(spec.seed).mix("synthetic");
  std::vector<std::uint8_t> chw(3 * n * n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int k = 0; k < spec.per_class; ++k) {
      Rng rng = chain.mix(static_cast<std::uint64_t>(c)).mix(static_cast<std::uint64_t>(k)).rng();
      std::array<double, 3> tint{};
      double angle = 0, freq = 0, phase = 0;
      if (spec.kind == SyntheticKind::kSeparable) {
        tint = palette(c);
      } else {
        for (auto& t : tint) t = uniform_real(rng, 0.3, 0.9);
        angle = M_PI * c / spec.num_classes + uniform_real(rng, -0.15, 0.15);
        freq = uniform_real(rng, 1.5, 2.5) * 2.0 * M_PI / n;
        phase = uniform_real(rng, 0.0, 2.0 * M_PI);
      }
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          double base = 1.0;
          if (spec.kind == SyntheticKind::kTextured) {
            const double u = x * std::cos(angle) + y * std::sin(angle);
            base = 0.5 + 0.45 * std::sin(freq * u + phase);
          }
          for (int ch = 0; ch < 3; ++ch) {
            const double v = tint[ch] * base + spec.noise * gauss(rng);
            chw[(ch * n + y) * n + x] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
          }
        }
      }
      const std::size_t index = ds.images->add(chw);
      ds.samples.push_back(Sample{"syn-c" + std::to_string(c) + "-" + std::to_string(k), index, c});
    }
  }
  return ds;
}

}  // namespace albench
