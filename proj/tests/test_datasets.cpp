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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "datasets.hpp"
#include "experiment.hpp"
#include "image_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace albench;

namespace {

constexpr std::size_t kCifarPixels = 3 * 32 * 32;

// Record r of a batch has label (r + batch) % 10 and every byte equal to a
// value derived from (batch, r), so the loader's bookkeeping is checkable.
std::uint8_t fill_value(int batch, int r) { return static_cast<std::uint8_t>((batch * 37 + r * 11) & 0xff); }

void write_fake_cifar(const fs::path& dir, int per_batch) {
  for (int b = 1; b <= 6; ++b) {
    std::vector<std::uint8_t> labels;
    std::vector<std::vector<std::uint8_t>> images;
    for (int r = 0; r < per_batch; ++r) {
      labels.push_back(static_cast<std::uint8_t>((r + b) % 10));
      images.emplace_back(kCifarPixels, fill_value(b, r));
    }
    const std::string name = b <= 5 ? "data_batch_" + std::to_string(b) + ".bin" : "test_batch.bin";
    write_cifar10_batch(dir / name, labels, images);
  }
}

RasterImage solid(int w, int h, std::uint8_t v) {
  RasterImage img;
  img.width = w;
  img.height = h;
  img.channels = 3;
  img.hwc.assign(static_cast<std::size_t>(w) * h * 3, v);
  return img;
}

}  // namespace

TEST_CASE("cifar-10 binary batches round trip with class subsets") {
  testutil::ScratchDir tmp("cifar");
  write_fake_cifar(tmp.path, 20);

  const SplitDataset all = load_cifar10(tmp.path);
  CHECK(all.class_list.size() == 10);
  CHECK(all.class_list[0] == "airplane");
  CHECK(all.class_list[9] == "truck");
  CHECK(all.train.size() == 100);
  CHECK(all.test.size() == 20);
  CHECK(all.images->shape().width == 32);
  std::set<std::string> ids;
  for (const auto& s : all.train) ids.insert(s.id);
  for (const auto& s : all.test) ids.insert(s.id);
  CHECK(ids.size() == 120);
  // Batch 1, record 3: label 4, pixels fill_value(1, 3).
  const Sample& s = all.train[3];
  CHECK(s.true_label == 4);
  CHECK(all.images->image(s.image_index)[0] == fill_value(1, 3));
  CHECK(all.images->image(s.image_index)[kCifarPixels - 1] == fill_value(1, 3));

  const SplitDataset sub = load_cifar10(tmp.path, {7, 2});
  CHECK(sub.class_list == std::vector<std::string>{"horse", "bird"});
  CHECK(sub.train.size() == 20);
  int horses = 0;
  for (const auto& t : sub.train) horses += t.true_label == 0;
  CHECK(horses == 10);

  std::ofstream(tmp.path / "batches.meta.txt") << "a\nb\nc\nd\ne\nf\ng\nh\ni\nj\n";
  CHECK(load_cifar10(tmp.path, {1}).class_list == std::vector<std::string>{"b"});

  CHECK_ERROR_CODE(load_cifar10(tmp.path, {3, 3}), ErrorCode::kConfig);
  CHECK_ERROR_CODE(load_cifar10(tmp.path, {10}), ErrorCode::kConfig);
  CHECK_ERROR_CODE(write_cifar10_batch(tmp.path / "x.bin", {1}, {}), ErrorCode::kLengthMismatch);
}

TEST_CASE("cifar-10 loader rejects missing and damaged batches") {
  testutil::ScratchDir tmp("cifar_bad");
  write_fake_cifar(tmp.path, 4);
  fs::remove(tmp.path / "data_batch_3.bin");
  CHECK_ERROR_CODE(load_cifar10(tmp.path), ErrorCode::kIo);
  write_fake_cifar(tmp.path, 4);
  std::ofstream(tmp.path / "test_batch.bin", std::ios::app | std::ios::binary) << "xyz";
  CHECK_ERROR_CODE(load_cifar10(tmp.path), ErrorCode::kIo);
  write_fake_cifar(tmp.path, 4);
  std::vector<std::vector<std::uint8_t>> one(1, std::vector<std::uint8_t>(kCifarPixels, 0));
  write_cifar10_batch(tmp.path / "test_batch.bin", {12}, one);
  CHECK_ERROR_CODE(load_cifar10(tmp.path), ErrorCode::kIo);
}

TEST_CASE("experiment config drives the cifar-10 source") {
  testutil::ScratchDir tmp("cifar_exp");
  write_fake_cifar(tmp.path / "cifar", 60);
  const nlohmann::json j = {
      {"name", "c"},
      {"output_dir", (tmp.path / "runs").string()},
      {"dataset", {{"source", "cifar10"}, {"path", (tmp.path / "cifar").string()}, {"cifar_classes", {0, 1, 2}}}},
      {"imbalance",
       {{"labeled_minority", 2},
        {"labeled_majority_per_class", 6},
        {"unlabeled_minority", 4},
        {"unlabeled_majority_per_class", 10}}},
      {"acquisition", {{"method", "discriminator"}}},
      {"train", {{"epochs", 1}, {"width", 8}, {"batch_size", 16}}},
      {"cycles", 1},
      {"samples_per_cycle", 3},
      {"repeats", 1},
      {"save_checkpoints", false}};
  const auto cfg = ExperimentConfig::from_json(j);
  const auto data = load_experiment_data(cfg.dataset, cfg.seed);
  CHECK(data.class_list == std::vector<std::string>{"airplane", "automobile", "bird"});
  // 5 batches x 60 records, 3 of 10 labels.
  CHECK(data.train->size() == 90);
  CHECK(data.test.size() == 18);
  const auto rec = run_experiment(cfg, data, 0, {.persist = false});
  CHECK(rec.metrics.size() == 2);
  CHECK(rec.metrics[1].labeled_pool_size == 2 + 2 * 6 + 3);

  nlohmann::json missing = j;
  missing["dataset"].erase("path");
  CHECK_ERROR_CODE(ExperimentConfig::from_json(missing), ErrorCode::kConfig);
}

TEST_CASE("image folder manifest with resize and class order") {
  testutil::ScratchDir tmp("folder");
  write_png(tmp.path / "a" / "x.png", solid(20, 10, 50));
  write_png(tmp.path / "b" / "y.png", solid(8, 8, 200));
  write_png(tmp.path / "b" / "z.png", solid(8, 8, 100));
  std::ofstream(tmp.path / "m.csv") << "relative_path,label\na/x.png,cat\nb/y.png,dog\nb/z.png,dog\n";

  const auto ds = load_image_folder(tmp.path, tmp.path / "m.csv", {3, 8, 8});
  CHECK(ds.class_list == std::vector<std::string>{"cat", "dog"});
  REQUIRE(ds.samples.size() == 3);
  CHECK(ds.images->image(ds.samples[0].image_index)[0] == 50);
  CHECK(ds.images->image(ds.samples[1].image_index)[5] == 200);

  const auto ordered = load_image_folder(tmp.path, tmp.path / "m.csv", {3, 8, 8}, {"dog"});
  CHECK(ordered.class_list == std::vector<std::string>{"dog"});
  CHECK(ordered.samples.size() == 2);

  std::ofstream(tmp.path / "bad.csv") << "a/x.png,cat\nmissing.png,cat\n";
  CHECK_ERROR_CODE(load_image_folder(tmp.path, tmp.path / "bad.csv", {3, 8, 8}), ErrorCode::kMissingImage);
  CHECK_ERROR_CODE(load_image_folder(tmp.path, tmp.path / "nope.csv", {3, 8, 8}), ErrorCode::kIo);
}

TEST_CASE("patch manifest paths resolve against the manifest directory") {
  testutil::ScratchDir tmp("manifest");
  write_png(tmp.path / "p" / "patches" / "crack" / "a.png", solid(16, 16, 9));
  write_png(tmp.path / "p" / "patches" / "Background" / "b.png", solid(16, 16, 90));
  std::ofstream(tmp.path / "p" / "manifest.csv")
      << "patch_path,source_image,cx,cy,category\npatches/crack/a.png,img.png,40,40,crack\n"
         "patches/Background/b.png,img.png,90,90,Background\n";
  const auto ds = load_patch_manifest(tmp.path / "p" / "manifest.csv", {3, 16, 16});
  CHECK(ds.class_list == std::vector<std::string>{"Background", "crack"});
  REQUIRE(ds.samples.size() == 2);
  CHECK(ds.samples[0].true_label == 1);
  CHECK(ds.samples[0].id != ds.samples[1].id);
  CHECK(ds.images->image(ds.samples[0].image_index)[0] == 9);
}

TEST_CASE("synthetic datasets are seeded and balanced") {
  SyntheticSpec spec;
  spec.num_classes = 4;
  spec.per_class = 25;
  spec.seed = 3;
  for (auto kind : {SyntheticKind::kSeparable, SyntheticKind::kTextured}) {
    spec.kind = kind;
    const auto a = make_synthetic(spec);
    const auto b = make_synthetic(spec);
    REQUIRE(a.samples.size() == 100);
    std::vector<int> counts(4, 0);
    for (const auto& s : a.samples) ++counts[s.true_label];
    CHECK(counts == std::vector<int>{25, 25, 25, 25});
    bool same = true;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      const auto x = a.images->image(a.samples[i].image_index);
      const auto y = b.images->image(b.samples[i].image_index);
      same = same && std::equal(x.begin(), x.end(), y.begin());
    }
    CHECK(same);
    spec.seed = 4;
    const auto c = make_synthetic(spec);
    spec.seed = 3;
    const auto x = a.images->image(0);
    const auto z = c.images->image(0);
    CHECK_FALSE(std::equal(x.begin(), x.end(), z.begin()));
  }
}
