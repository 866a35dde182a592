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
#include <random>

#include "coco_fixture.hpp"
#include "geometry.hpp"
#include "patchify.hpp"
#include "test_util.hpp"

using namespace albench;
using geom::Point;
using geom::Rect;
using geom::Ring;
namespace fs = std::filesystem;

namespace {

Ring box(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

InstanceAnnotation instance(const std::string& category, std::vector<Ring> rings, const std::string& id = "a") {
  return {"img", id, category, std::move(rings)};
}

PatchSpec patch(int cx, int cy, const std::string& category, int size = 160) { return {"img", cx, cy, size, category}; }

// Covered area estimated on a fine grid with the angle-sum oracle.
double raster_area(const Ring& ring, const Rect& rect, double step) {
  double area = 0;
  for (double y = rect.y0 + step / 2; y < rect.y1; y += step) {
    for (double x = rect.x0 + step / 2; x < rect.x1; x += step) {
      if (fixture::inside_by_angle(x, y, ring)) area += step * step;
    }
  }
  return area;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("albench_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_json(const fs::path& p, const nlohmann::json& j) { std::ofstream(p) << j.dump(); }

}  // namespace

TEST_CASE("rectangle overlap is positive-area only") {
  CHECK(geom::rects_overlap({0, 0, 10, 10}, {5, 5, 15, 15}));
  CHECK(geom::rects_overlap({0, 0, 10, 10}, {2, 2, 3, 3}));
  CHECK_FALSE(geom::rects_overlap({0, 0, 10, 10}, {10, 0, 20, 10}));
  CHECK_FALSE(geom::rects_overlap({0, 0, 10, 10}, {10, 10, 20, 20}));
}

TEST_CASE("nonzero winding") {
  const Ring ccw = box(0, 0, 4, 4);
  const Ring cw(ccw.rbegin(), ccw.rend());
  CHECK(geom::winding_number({2, 2}, ccw) == -geom::winding_number({2, 2}, cw));
  CHECK(std::abs(geom::winding_number({2, 2}, ccw)) == 1);
  CHECK(geom::winding_number({5, 2}, ccw) == 0);
  // Pentagram: the center is wound twice, so it is inside under nonzero
  // winding (even-odd would call it outside).
  Ring star;
  for (int k = 0; k < 5; ++k) {
    const double a = M_PI / 2 + k * 4 * M_PI / 5;
    star.push_back({10 + 8 * std::cos(a), 10 + 8 * std::sin(a)});
  }
  CHECK(std::abs(geom::winding_number({10, 10}, star)) == 2);
  CHECK(geom::point_in_ring({10, 10}, star));
  const std::vector<Ring> two{box(0, 0, 1, 1), box(5, 5, 6, 6)};
  CHECK(geom::point_in_rings({5.5, 5.5}, two));
  CHECK_FALSE(geom::point_in_rings({3, 3}, two));
}

TEST_CASE("covered area") {
  CHECK(geom::signed_area(box(0, 0, 2, 3)) == doctest::Approx(6));
  CHECK(geom::clipped_area(box(2, 2, 4, 4), {0, 0, 10, 10}) == doctest::Approx(4));
  CHECK(geom::clipped_area(box(-5, -5, 5, 5), {0, 0, 10, 10}) == doctest::Approx(25));
  CHECK(geom::clipped_area(box(10, 0, 12, 5), {0, 0, 10, 10}) == 0.0);
  // Bow tie: signed area cancels but both lobes cover the rectangle.
  const Ring bowtie{{0, 0}, {4, 4}, {4, 0}, {0, 4}};
  CHECK(geom::signed_area(bowtie) == doctest::Approx(0));
  CHECK(geom::clipped_area(bowtie, {-1, -1, 5, 5}) == doctest::Approx(8));
  CHECK(geom::rect_intersects_rings({-1, -1, 5, 5}, std::vector<Ring>{bowtie}));
  CHECK_FALSE(geom::rect_intersects_rings({4, 0, 8, 4}, std::vector<Ring>{box(0, 0, 4, 4)}));
}

TEST_CASE("covered area agrees with a fine raster") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto flat = fixture::random_ring(gen, 20, 20, 15, 40, 40);
    Ring ring;
    for (std::size_t k = 0; k + 1 < flat.size(); k += 2) ring.push_back({flat[k], flat[k + 1]});
    if (trial % 3 == 0) std::shuffle(ring.begin(), ring.end(), gen);  // self-intersecting
    const std::int64_t x0 = static_cast<std::int64_t>(gen() % 30), y0 = static_cast<std::int64_t>(gen() % 30);
    const Rect rect{x0, y0, x0 + 4 + static_cast<std::int64_t>(gen() % 20), y0 + 4 + static_cast<std::int64_t>(gen() % 20)};
    const double exact = geom::clipped_area(ring, rect);
    const double approx = raster_area(ring, rect, 0.05);
    // Raster error is bounded by boundary length times the step.
    double perimeter = 0;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const Point a = ring[k], b = ring[(k + 1) % ring.size()];
      perimeter += std::hypot(b.x - a.x, b.y - a.y);
    }
    CHECK(std::abs(exact - approx) <= perimeter * 0.05 + 1e-9);
  }
}

TEST_CASE("validate_patch criteria") {
  const ImageDims big{5184, 3888};
  CHECK(validate_patch(patch(50, 400, "crack"), {}, {}, big) == RejectReason::kOutOfBounds);
  CHECK_FALSE(validate_patch(patch(80, 80, "crack"), {}, {}, big).has_value());
  CHECK_FALSE(validate_patch(patch(5184 - 80, 3888 - 80, "crack"), {}, {}, big).has_value());
  CHECK(validate_patch(patch(79, 400, "crack"), {}, {}, big) == RejectReason::kOutOfBounds);
  CHECK(validate_patch(patch(400, 3888 - 79, "crack"), {}, {}, big) == RejectReason::kOutOfBounds);

  const std::vector<InstanceAnnotation> anns{instance("crack", {box(300, 300, 500, 320)}),
                                             instance("spalling", {box(560, 280, 700, 400)}, "b")};
  CHECK(validate_patch(patch(500, 310, "crack"), {}, anns, big) == RejectReason::kForeignClass);
  CHECK_FALSE(validate_patch(patch(380, 310, "crack"), {}, anns, big).has_value());
  CHECK(validate_patch(patch(380, 310, kBackgroundClass), {}, anns, big) == RejectReason::kForeignClass);
  CHECK_FALSE(validate_patch(patch(2000, 2000, kBackgroundClass), {}, anns, big).has_value());
  // Touching the spalling box edge (x = 560) is allowed.
  CHECK_FALSE(validate_patch(patch(480, 310, "crack"), {}, anns, big).has_value());

  const std::vector<PatchSpec> accepted{patch(2000, 2000, kBackgroundClass)};
  CHECK(validate_patch(patch(2000, 2000, kBackgroundClass), accepted, anns, big) == RejectReason::kOverlap);
  CHECK_FALSE(validate_patch(patch(2160, 2000, kBackgroundClass), accepted, anns, big).has_value());
  // Overlap is reported ahead of the other reasons.
  const std::vector<PatchSpec> near_edge{patch(80, 400, "crack")};
  CHECK(validate_patch(patch(70, 400, "spalling"), near_edge, anns, big) == RejectReason::kOverlap);
  CHECK(validate_patch(patch(580, 300, kBackgroundClass), {}, anns, {600, 600}) == RejectReason::kForeignClass);
}

TEST_CASE("image without instances yields background only") {
  PatchifyConfig cfg;
  cfg.seed = 1;
  Rng rng(1);
  const auto out = patchify_image({}, {1600, 1200}, cfg, rng);
  CHECK(out.stats.class_requested == 0);
  CHECK(out.patches.size() <= 10);
  CHECK(out.patches.size() > 0);
  for (const auto& p : out.patches) CHECK(p.category == kBackgroundClass);
}

TEST_CASE("class patch centers lie inside their instance") {
  PatchifyConfig cfg;
  cfg.patch_size = 32;
  cfg.class_patches_per_image = 40;
  Rng rng(5);
  const std::vector<InstanceAnnotation> anns{instance("crack", {box(100, 100, 500, 300)})};
  const auto out = patchify_image(anns, {600, 400}, cfg, rng);
  int class_patches = 0;
  for (const auto& p : out.patches) {
    if (p.category != "crack") continue;
    ++class_patches;
    CHECK(p.cx >= 100);
    CHECK(p.cx <= 500);
    CHECK(p.cy >= 100);
    CHECK(p.cy <= 300);
  }
  CHECK(class_patches == out.stats.class_accepted);
  CHECK(class_patches > 20);
}

TEST_CASE("dense annotations under-yield without overlaps") {
  // A 480x480 image fits at most 9 disjoint 160 patches.
  PatchifyConfig cfg;
  Rng rng(9);
  const std::vector<InstanceAnnotation> anns{instance("crack", {box(0, 0, 480, 480)})};
  const auto out = patchify_image(anns, {480, 480}, cfg, rng);
  CHECK(out.stats.class_accepted < 100);
  CHECK(out.stats.class_accepted <= 9);
  CHECK(out.stats.rejections[static_cast<int>(RejectReason::kOverlap)] > 0);
  const auto v = fixture::check_patches(out.patches, anns, {480, 480});
  CHECK(v.total() == 0);
}

TEST_CASE("randomized fixtures pass the brute-force oracle") {
  fixture::CocoFixtureSpec spec;
  spec.images = 20;
  spec.seed = 404;
  const CocoDataset coco = parse_coco(fixture::make_coco(spec));
  PatchifyConfig cfg;
  cfg.patch_size = 48;
  cfg.class_patches_per_image = 30;
  cfg.background_patches_per_image = 6;
  cfg.attempts_per_patch = 50;
  std::int64_t emitted = 0;
  for (const auto& img : coco.images) {
    const auto& anns = coco.annotations_by_image.at(img.id);
    Rng rng(image_seed(7, img.id));
    const auto out = patchify_image(anns, img.dims, cfg, rng);
    CHECK(out.stats.class_accepted <= cfg.class_patches_per_image);
    CHECK(out.stats.background_accepted <= cfg.background_patches_per_image);
    CHECK(static_cast<std::int64_t>(out.patches.size()) == out.stats.class_accepted + out.stats.background_accepted);
    const auto v = fixture::check_patches(out.patches, anns, img.dims);
    CHECK(v.out_of_bounds == 0);
    CHECK(v.overlap == 0);
    CHECK(v.foreign == 0);
    CHECK(v.center_outside == 0);
    emitted += static_cast<std::int64_t>(out.patches.size());

    Rng again(image_seed(7, img.id));
    const auto twin = patchify_image(anns, img.dims, cfg, again);
    REQUIRE(twin.patches.size() == out.patches.size());
    for (std::size_t k = 0; k < twin.patches.size(); ++k) {
      CHECK(twin.patches[k].cx == out.patches[k].cx);
      CHECK(twin.patches[k].cy == out.patches[k].cy);
    }
  }
  CHECK(emitted > 200);
}

TEST_CASE("analytic foreign-class test agrees with the raster mask") {
  fixture::CocoFixtureSpec spec;
  spec.images = 6;
  spec.seed = 17;
  const CocoDataset coco = parse_coco(fixture::make_coco(spec));
  std::mt19937_64 gen(3);
  int raster_hits = 0;
  for (const auto& img : coco.images) {
    const auto& anns = coco.annotations_by_image.at(img.id);
    const fixture::RasterOracle raster(anns, img.dims);
    for (int k = 0; k < 300; ++k) {
      const int size = 16 + static_cast<int>(gen() % 64);
      const int cx = size / 2 + static_cast<int>(gen() % (img.dims.width - size));
      const int cy = size / 2 + static_cast<int>(gen() % (img.dims.height - size));
      const PatchSpec cand{img.id, cx, cy, size, kBackgroundClass};
      const bool hit = raster.foreign_pixels(cand.window(), kBackgroundClass) > 0;
      const auto verdict = validate_patch(cand, {}, anns, img.dims);
      raster_hits += hit;
      // Any covered pixel center implies positive-area intersection.
      if (hit) CHECK(verdict == RejectReason::kForeignClass);
    }
  }
  CHECK(raster_hits > 50);
}

TEST_CASE("coco parsing rejects malformed input") {
  auto base = [] {
    return nlohmann::json{{"images", {{{"id", 1}, {"file_name", "a.png"}, {"width", 100}, {"height", 80}}}},
                          {"categories", {{{"id", 1}, {"name", "crack"}}}},
                          {"annotations", nlohmann::json::array()}};
  };
  auto with_ann = [&](nlohmann::json ann) {
    auto doc = base();
    doc["annotations"].push_back(ann);
    return doc;
  };
  CHECK(parse_coco(base()).images.size() == 1);
  CHECK_ERROR_CODE(parse_coco(with_ann({{"id", 5}, {"image_id", 1}, {"category_id", 1},
                                        {"segmentation", {{"counts", "abc"}, {"size", {80, 100}}}}})),
                   ErrorCode::kMalformedAnnotation);
  CHECK_ERROR_CODE(parse_coco(with_ann({{"id", 5}, {"image_id", 1}, {"category_id", 1},
                                        {"segmentation", {{1, 1, 5, 5}}}})),
                   ErrorCode::kMalformedAnnotation);
  CHECK_ERROR_CODE(parse_coco(with_ann({{"id", 5}, {"image_id", 1}, {"category_id", 1},
                                        {"segmentation", {{1, 1, 5, 5, 101, 5}}}})),
                   ErrorCode::kMalformedAnnotation);
  CHECK_ERROR_CODE(parse_coco(with_ann({{"id", 5}, {"image_id", 2}, {"category_id", 1},
                                        {"segmentation", {{1, 1, 5, 5, 1, 5}}}})),
                   ErrorCode::kMalformedAnnotation);
  auto reserved = with_ann({{"id", 5}, {"image_id", 1}, {"category_id", 2}, {"segmentation", {{1, 1, 5, 5, 1, 5}}}});
  reserved["categories"].push_back({{"id", 2}, {"name", "Background"}});
  CHECK_ERROR_CODE(parse_coco(reserved), ErrorCode::kMalformedAnnotation);
  try {
    parse_coco(with_ann({{"id", 77}, {"image_id", 1}, {"category_id", 1}, {"segmentation", {{1, 1}}}}));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("77") != std::string::npos);
  }
}

TEST_CASE("patchify_dataset writes patches, manifest and statistics") {
  TempDir tmp("patchify_dataset");
  fixture::CocoFixtureSpec spec;
  spec.images = 3;
  spec.seed = 12;
  const auto doc = fixture::make_coco(spec);
  write_json(tmp.path / "ann.json", doc);
  fixture::write_images(doc, tmp.path / "images", 1);
  PatchifyConfig cfg;
  cfg.patch_size = 40;
  cfg.class_patches_per_image = 12;
  cfg.background_patches_per_image = 4;
  cfg.seed = 99;
  const auto result = patchify_dataset(tmp.path / "ann.json", tmp.path / "images", tmp.path / "out", cfg);

  // Same count as re-running the per-image sampler with the per-image seed.
  const CocoDataset coco = parse_coco(doc);
  std::size_t expected = 0;
  for (const auto& img : coco.images) {
    Rng rng(image_seed(cfg.seed, img.id));
    expected += patchify_image(coco.annotations_by_image.at(img.id), img.dims, cfg, rng).patches.size();
  }
  CHECK(result.manifest.size() == expected);
  const auto rows = read_manifest(tmp.path / "out" / "manifest.csv");
  REQUIRE(rows.size() == expected);
  for (const auto& r : rows) {
    const auto png = read_image(tmp.path / "out" / r.patch_path, 3);
    CHECK(png.width == 40);
    CHECK(png.height == 40);
  }
  std::ifstream stats_in(tmp.path / "out" / "stats.json");
  nlohmann::json stats;
  stats_in >> stats;
  CHECK(stats["patches"] == expected);
  CHECK(stats["rejections"].contains("overlap"));
  CHECK(stats["rejections"].contains("foreign_class"));
  CHECK(stats["rejections"].contains("out_of_bounds"));

  // Deterministic under the seed.
  const auto again = patchify_dataset(tmp.path / "ann.json", tmp.path / "images", tmp.path / "out2", cfg);
  REQUIRE(again.manifest.size() == result.manifest.size());
  for (std::size_t i = 0; i < again.manifest.size(); ++i) {
    CHECK(again.manifest[i].patch_path == result.manifest[i].patch_path);
    CHECK(again.manifest[i].cx == result.manifest[i].cx);
  }
}

TEST_CASE("patchify_dataset edge cases") {
  TempDir tmp("patchify_edges");
  const nlohmann::json doc{{"images", {{{"id", 1}, {"file_name", "blank.png"}, {"width", 200}, {"height", 150}}}},
                           {"categories", nlohmann::json::array()},
                           {"annotations", nlohmann::json::array()}};
  write_json(tmp.path / "ann.json", doc);
  fixture::write_images(doc, tmp.path / "images", 2);
  PatchifyConfig cfg;
  cfg.patch_size = 32;
  const auto result = patchify_dataset(tmp.path / "ann.json", tmp.path / "images", tmp.path / "out", cfg);
  CHECK_FALSE(result.manifest.empty());
  for (const auto& r : result.manifest) CHECK(r.category == kBackgroundClass);

  auto missing = doc;
  missing["images"].push_back({{"id", 2}, {"file_name", "gone.png"}, {"width", 10}, {"height", 10}});
  write_json(tmp.path / "missing.json", missing);
  CHECK_ERROR_CODE(patchify_dataset(tmp.path / "missing.json", tmp.path / "images", tmp.path / "out3", cfg),
                   ErrorCode::kMissingImage);
  CHECK_FALSE(fs::exists(tmp.path / "out3"));
}

TEST_CASE("class filtering") {
  std::vector<ManifestRow> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({"p", "s", 0, 0, "crack"});
  for (int i = 0; i < 9; ++i) rows.push_back({"p", "s", 0, 0, "rust"});
  for (int i = 0; i < 40; ++i) rows.push_back({"p", "s", 0, 0, "net-crack"});
  const auto kept = filter_classes(rows, 10, {});
  const auto hist = class_histogram(kept);
  CHECK(hist.size() == 2);
  CHECK_FALSE(hist.contains("rust"));
  CHECK(filter_classes(rows, 0, {}).size() == rows.size());
  const std::vector<std::string> drop{"net-crack"};
  const auto dropped = class_histogram(filter_classes(rows, 0, drop));
  CHECK_FALSE(dropped.contains("net-crack"));
  CHECK(dropped.at("rust") == 9);
}

TEST_CASE("config validation") {
  PatchifyConfig cfg;
  cfg.attempts_per_patch = 0;
  CHECK_ERROR_CODE(cfg.validate(), ErrorCode::kConfig);
}
