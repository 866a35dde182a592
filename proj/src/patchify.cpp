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

#include "patchify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "csv.hpp"
#include "error.hpp"
#include "image_io.hpp"

namespace albench {

namespace fs = std::filesystem;

void PatchifyConfig::validate() const {
  if (patch_size <= 0 || class_patches_per_image <= 0 || background_patches_per_image <= 0 ||
      attempts_per_patch <= 0) {
    fail(ErrorCode::kConfig, "patchify parameters must all be positive");
  }
}

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::kOverlap: return "overlap";
    case RejectReason::kForeignClass: return "foreign_class";
    case RejectReason::kOutOfBounds: return "out_of_bounds";
  }
  return "?";
}

void PatchifyStats::merge(const PatchifyStats& o) {
  class_requested += o.class_requested;
  class_accepted += o.class_accepted;
  background_requested += o.background_requested;
  background_accepted += o.background_accepted;
  center_outside += o.center_outside;
  for (std::size_t i = 0; i < rejections.size(); ++i) rejections[i] += o.rejections[i];
}

std::optional<RejectReason> validate_patch(const PatchSpec& candidate, std::span<const PatchSpec> accepted,
                                           std::span<const InstanceAnnotation> annotations, ImageDims dims) {
  const geom::Rect win = candidate.window();
  for (const PatchSpec& other : accepted) {
    if (other.image_id == candidate.image_id && geom::rects_overlap(win, other.window())) {
      return RejectReason::kOverlap;
    }
  }
  for (const InstanceAnnotation& ann : annotations) {
    if (ann.category == candidate.category) continue;
    if (geom::rect_intersects_rings(win, ann.rings)) return RejectReason::kForeignClass;
  }
  if (win.x0 < 0 || win.y0 < 0 || win.x1 > dims.width || win.y1 > dims.height) return RejectReason::kOutOfBounds;
  return std::nullopt;
}

namespace {

struct Bounds {
  std::int64_t x0, y0, x1, y1;  // inclusive
};

Bounds instance_bounds(const InstanceAnnotation& ann) {
  double minx = INFINITY, miny = INFINITY, maxx = -INFINITY, maxy = -INFINITY;
  for (const auto& ring : ann.rings) {
    for (const auto& p : ring) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  return {static_cast<std::int64_t>(std::floor(minx)), static_cast<std::int64_t>(std::floor(miny)),
          static_cast<std::int64_t>(std::ceil(maxx)), static_cast<std::int64_t>(std::ceil(maxy))};
}

}  // namespace

ImagePatches patchify_image(std::span<const InstanceAnnotation> annotations, ImageDims dims,
                            const PatchifyConfig& config, Rng& rng) {
  config.validate();
  ImagePatches out;
  const std::string image_id = annotations.empty() ? std::string() : annotations.front().image_id;

  auto try_slot = [&](const std::string& category, auto&& draw_center) {
    for (int attempt = 0; attempt < config.attempts_per_patch; ++attempt) {
      std::optional<std::pair<int, int>> center = draw_center();
      if (!center) {
        ++out.stats.center_outside;
        continue;
      }
      PatchSpec cand{image_id, center->first, center->second, config.patch_size, category};
      const auto verdict = validate_patch(cand, out.patches, annotations, dims);
      if (!verdict) {
        out.patches.push_back(std::move(cand));
        return true;
      }
      ++out.stats.rejections[static_cast<std::size_t>(*verdict)];
    }
    return false;
  };

  std::vector<std::size_t> order(annotations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_range(order.begin(), order.end(), rng);

  if (!annotations.empty()) {
    out.stats.class_requested = config.class_patches_per_image;
    for (int slot = 0; slot < config.class_patches_per_image; ++slot) {
      const InstanceAnnotation& ann = annotations[order[slot % order.size()]];
      const Bounds b = instance_bounds(ann);
      const bool ok = try_slot(ann.category, [&]() -> std::optional<std::pair<int, int>> {
        const auto x = uniform_int(rng, b.x0, b.x1);
        const auto y = uniform_int(rng, b.y0, b.y1);
        if (!geom::point_in_rings({static_cast<double>(x), static_cast<double>(y)}, ann.rings)) return std::nullopt;
        return std::pair<int, int>{static_cast<int>(x), static_cast<int>(y)};
      });
      out.stats.class_accepted += ok;
    }
  }

  out.stats.background_requested = config.background_patches_per_image;
  for (int slot = 0; slot < config.background_patches_per_image; ++slot) {
    const bool ok = try_slot(kBackgroundClass, [&]() -> std::optional<std::pair<int, int>> {
      return std::pair<int, int>{static_cast<int>(uniform_int(rng, 0, dims.width - 1)),
                                 static_cast<int>(uniform_int(rng, 0, dims.height - 1))};
    });
    out.stats.background_accepted += ok;
  }
  return out;
}

std::uint64_t image_seed(std::uint64_t seed, const std::string& image_id) {
  return SeedChain(seed).mix("patchify").mix(image_id).value();
}

namespace {

std::string id_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  fail(ErrorCode::kMalformedAnnotation, "ids must be integers or strings");
}

bool numeric_less(const std::string& a, const std::string& b) {
  const bool an = !a.empty() && std::all_of(a.begin(), a.end(), ::isdigit);
  const bool bn = !b.empty() && std::all_of(b.begin(), b.end(), ::isdigit);
  if (an && bn) return a.size() != b.size() ? a.size() < b.size() : a < b;
  if (an != bn) return an;
  return a < b;
}

}  // namespace

CocoDataset parse_coco(const nlohmann::json& doc) {
  CocoDataset out;
  if (!doc.is_object() || !doc.contains("images")) fail(ErrorCode::kMalformedAnnotation, "missing `images` array");
  std::map<std::string, std::string> category_names;
  if (doc.contains("categories")) {
    for (const auto& c : doc.at("categories")) category_names[id_string(c.at("id"))] = c.at("name").get<std::string>();
  }
  std::map<std::string, ImageDims> dims_of;
  for (const auto& img : doc.at("images")) {
    try {
      CocoImage ci{id_string(img.at("id")), img.at("file_name").get<std::string>(),
                   {img.at("width").get<int>(), img.at("height").get<int>()}};
      if (ci.dims.width <= 0 || ci.dims.height <= 0) fail(ErrorCode::kMalformedAnnotation, "non-positive size");
      if (!dims_of.emplace(ci.id, ci.dims).second) fail(ErrorCode::kMalformedAnnotation, "duplicate image id");
      out.images.push_back(std::move(ci));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kMalformedAnnotation, std::string("image entry: ") + e.what());
    }
  }
  std::sort(out.images.begin(), out.images.end(),
            [](const CocoImage& a, const CocoImage& b) { return numeric_less(a.id, b.id); });

  const auto annotations = doc.value("annotations", nlohmann::json::array());
  for (const auto& a : annotations) {
    const std::string ann_id = a.contains("id") ? id_string(a.at("id")) : std::string("?");
    auto bad = [&](const std::string& why) {
      fail(ErrorCode::kMalformedAnnotation, "annotation " + ann_id + ": " + why);
    };
    if (!a.contains("image_id") || !a.contains("category_id") || !a.contains("segmentation")) {
      bad("needs image_id, category_id and segmentation");
    }
    InstanceAnnotation inst;
    inst.annotation_id = ann_id;
    inst.image_id = id_string(a.at("image_id"));
    auto dims = dims_of.find(inst.image_id);
    if (dims == dims_of.end()) bad("references unknown image " + inst.image_id);
    auto cat = category_names.find(id_string(a.at("category_id")));
    if (cat == category_names.end()) bad("references unknown category");
    inst.category = cat->second;
    if (inst.category == kBackgroundClass) bad("category name `Background` is reserved");
    const auto& seg = a.at("segmentation");
    if (!seg.is_array() || seg.empty()) bad("segmentation must be a non-empty list of polygons");
    for (const auto& poly : seg) {
      if (!poly.is_array()) bad("segmentation must be polygons (RLE is not supported)");
      if (poly.size() < 6 || poly.size() % 2 != 0) bad("each ring needs >= 3 vertices");
      geom::Ring ring;
      for (std::size_t k = 0; k + 1 < poly.size(); k += 2) {
        if (!poly[k].is_number() || !poly[k + 1].is_number()) bad("non-numeric vertex");
        const double x = poly[k].get<double>();
        const double y = poly[k + 1].get<double>();
        if (!(x >= 0 && y >= 0 && x <= dims->second.width && y <= dims->second.height)) {
          bad("vertex (" + std::to_string(x) + ", " + std::to_string(y) + ") lies outside image " + inst.image_id);
        }
        ring.push_back({x, y});
      }
      inst.rings.push_back(std::move(ring));
    }
    out.annotations_by_image[inst.image_id].push_back(std::move(inst));
  }
  return out;
}

CocoDataset load_coco(const fs::path& annotation_file) {
  std::ifstream in(annotation_file);
  if (!in) fail(ErrorCode::kIo, "cannot open " + annotation_file.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformedAnnotation, annotation_file.string() + ": " + e.what());
  }
  return parse_coco(doc);
}

std::map<std::string, std::int64_t> class_histogram(std::span<const ManifestRow> rows) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& r : rows) ++counts[r.category];
  return counts;
}

namespace {

std::string safe_name(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

}  // namespace

PatchifyResult patchify_dataset(const fs::path& annotation_file, const fs::path& images_dir, const fs::path& out_dir,
                                const PatchifyConfig& config) {
  config.validate();
  const CocoDataset coco = load_coco(annotation_file);
  for (const auto& img : coco.images) {
    if (!fs::exists(images_dir / img.file_name)) {
      fail(ErrorCode::kMissingImage, "image " + img.id + " (" + (images_dir / img.file_name).string() + ")");
    }
  }

  PatchifyResult result;
  std::vector<PatchifyStats> per_image(coco.images.size());
  std::vector<std::vector<PatchSpec>> patches(coco.images.size());
  static const std::vector<InstanceAnnotation> kNone;
  // Patch generation only needs geometry; pixels are read afterwards.
  for (std::size_t i = 0; i < coco.images.size(); ++i) {
    const CocoImage& img = coco.images[i];
    auto it = coco.annotations_by_image.find(img.id);
    const auto& anns = it == coco.annotations_by_image.end() ? kNone : it->second;
    Rng rng(image_seed(config.seed, img.id));
    ImagePatches ip = patchify_image(anns, img.dims, config, rng);
    for (auto& p : ip.patches) p.image_id = img.id;
    per_image[i] = ip.stats;
    patches[i] = std::move(ip.patches);
    result.totals.merge(ip.stats);
  }

  nlohmann::json under_yield = nlohmann::json::array();
  for (std::size_t i = 0; i < coco.images.size(); ++i) {
    const CocoImage& img = coco.images[i];
    if (!patches[i].empty()) {
      RasterImage raster = read_image(images_dir / img.file_name, 3);
      if (raster.width != img.dims.width || raster.height != img.dims.height) {
        fail(ErrorCode::kMalformedAnnotation, "image " + img.id + " is " + std::to_string(raster.width) + "x" +
                                                  std::to_string(raster.height) + " but annotated as " +
                                                  std::to_string(img.dims.width) + "x" +
                                                  std::to_string(img.dims.height));
      }
      const std::string stem = safe_name(fs::path(img.file_name).stem().string());
      for (std::size_t k = 0; k < patches[i].size(); ++k) {
        const PatchSpec& p = patches[i][k];
        const geom::Rect w = p.window();
        const fs::path rel = fs::path("patches") / safe_name(p.category) /
                             (stem + "_" + safe_name(img.id) + "_" + std::to_string(k) + ".png");
        write_png(out_dir / rel,
                  crop(raster, static_cast<int>(w.x0), static_cast<int>(w.y0), p.size, p.size));
        result.manifest.push_back({rel.generic_string(), img.file_name, p.cx, p.cy, p.category});
      }
    }
    const auto& s = per_image[i];
    if (s.class_accepted < s.class_requested || s.background_accepted < s.background_requested) {
      under_yield.push_back({{"image", img.file_name},
                             {"class_requested", s.class_requested},
                             {"class_accepted", s.class_accepted},
                             {"background_requested", s.background_requested},
                             {"background_accepted", s.background_accepted}});
    }
  }
  fs::create_directories(out_dir);
  write_manifest(out_dir / "manifest.csv", result.manifest);

  const auto& t = result.totals;
  nlohmann::json rejections;
  for (RejectReason r : {RejectReason::kOverlap, RejectReason::kForeignClass, RejectReason::kOutOfBounds}) {
    rejections[reject_reason_name(r)] = t.rejections[static_cast<std::size_t>(r)];
  }
  rejections["center_outside_instance"] = t.center_outside;
  result.statistics = {{"images", coco.images.size()},
                       {"patches", result.manifest.size()},
                       {"per_class", class_histogram(result.manifest)},
                       {"rejections", rejections},
                       {"class_patches_requested", t.class_requested},
                       {"class_patches_accepted", t.class_accepted},
                       {"background_patches_requested", t.background_requested},
                       {"background_patches_accepted", t.background_accepted},
                       {"under_yield", under_yield},
                       {"config",
                        {{"patch_size", config.patch_size},
                         {"class_patches_per_image", config.class_patches_per_image},
                         {"background_patches_per_image", config.background_patches_per_image},
                         {"attempts_per_patch", config.attempts_per_patch},
                         {"seed", config.seed}}}};
  std::ofstream stats(out_dir / "stats.json");
  stats << result.statistics.dump(2) << "\n";
  if (!stats) fail(ErrorCode::kIo, "cannot write stats.json");
  return result;
}

std::vector<ManifestRow> filter_classes(std::span<const ManifestRow> manifest, std::int64_t min_samples,
                                        std::span<const std::string> drop_classes) {
  const auto counts = class_histogram(manifest);
  const std::set<std::string> drop(drop_classes.begin(), drop_classes.end());
  std::vector<ManifestRow> out;
  for (const auto& row : manifest) {
    if (drop.contains(row.category) || counts.at(row.category) < min_samples) continue;
    out.push_back(row);
  }
  return out;
}

void write_manifest(const fs::path& path, std::span<const ManifestRow> rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << "patch_path,source_image,cx,cy,category\n";
  for (const auto& r : rows) {
    out << csv::join({r.patch_path, r.source_image, std::to_string(r.cx), std::to_string(r.cy), r.category}) << "\n";
  }
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  auto rows = csv::read_file(path);
  if (!rows.empty() && rows.front()[0] == "patch_path") rows.erase(rows.begin());
  std::vector<ManifestRow> out;
  for (const auto& r : rows) {
    if (r.size() != 5) fail(ErrorCode::kIo, path.string() + ": expected 5 columns per row");
    out.push_back({r[0], r[1], std::stoi(r[2]), std::stoi(r[3]), r[4]});
  }
  return out;
}

}  // namespace albench
