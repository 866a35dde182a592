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

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace albench::geom {

bool rects_overlap(const Rect& a, const Rect& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

namespace {

// > 0 when p is left of the directed line a->b.
double side(Point a, Point b, Point p) { return (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y); }

}  // namespace

int winding_number(Point p, const Ring& ring) {
  int wn = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && side(a, b, p) > 0) ++wn;
    } else if (b.y <= p.y && side(a, b, p) < 0) {
      --wn;
    }
  }
  return wn;
}

bool point_in_ring(Point p, const Ring& ring) { return ring.size() >= 3 && winding_number(p, ring) != 0; }

bool point_in_rings(Point p, std::span<const Ring> rings) {
  for (const Ring& r : rings) {
    if (point_in_ring(p, r)) return true;
  }
  return false;
}

double signed_area(const Ring& ring) {
  double twice = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

// Area of {p in rect : winding(p) != 0}, exact for self-intersecting rings
// (a clipped bow tie has zero signed area but positive covered area).
// Horizontal slabs are cut at every vertex, edge/edge crossing and edge/rect
// crossing, so inside a slab the edge order is fixed and every covered width
// is linear in y; the midpoint width times the slab height is then exact.
double clipped_area(const Ring& ring, const Rect& rect) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  const double rx0 = static_cast<double>(rect.x0), rx1 = static_cast<double>(rect.x1);
  const double ry0 = static_cast<double>(rect.y0), ry1 = static_cast<double>(rect.y1);
  std::vector<double> cuts{ry0, ry1};
  auto add_cut = [&](double y) {
    if (y > ry0 && y < ry1) cuts.push_back(y);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = ring[i], b = ring[(i + 1) % n];
    add_cut(a.y);
    for (double x : {rx0, rx1}) {
      if ((a.x - x) * (b.x - x) < 0) add_cut(a.y + (x - a.x) / (b.x - a.x) * (b.y - a.y));
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Point c = ring[j], d = ring[(j + 1) % n];
      const double den = (b.x - a.x) * (d.y - c.y) - (b.y - a.y) * (d.x - c.x);
      if (den == 0) continue;
      const double t = ((c.x - a.x) * (d.y - c.y) - (c.y - a.y) * (d.x - c.x)) / den;
      const double u = ((c.x - a.x) * (b.y - a.y) - (c.y - a.y) * (b.x - a.x)) / den;
      if (t > 0 && t < 1 && u > 0 && u < 1) add_cut(a.y + t * (b.y - a.y));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double area = 0;
  std::vector<std::pair<double, int>> crossings;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double h = cuts[k + 1] - cuts[k];
    if (h <= 0) continue;
    const double ym = 0.5 * (cuts[k] + cuts[k + 1]);
    crossings.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = ring[i], b = ring[(i + 1) % n];
      if ((a.y <= ym) == (b.y <= ym)) continue;
      crossings.emplace_back(a.x + (ym - a.y) / (b.y - a.y) * (b.x - a.x), b.y > a.y ? 1 : -1);
    }
    std::sort(crossings.begin(), crossings.end());
    int wn = 0;
    for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
      wn += crossings[c].second;
      if (wn == 0) continue;
      const double lo = std::max(crossings[c].first, rx0);
      const double hi = std::min(crossings[c + 1].first, rx1);
      if (hi > lo) area += (hi - lo) * h;
    }
  }
  return area;
}

bool rect_intersects_rings(const Rect& rect, std::span<const Ring> rings) {
  // Guards against round-off slivers along shared edges.
  constexpr double kMinArea = 1e-9;
  for (const Ring& ring : rings) {
    if (ring.size() < 3) continue;
    double minx = ring[0].x, maxx = ring[0].x, miny = ring[0].y, maxy = ring[0].y;
    for (const Point& p : ring) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
    if (maxx <= rect.x0 || minx >= rect.x1 || maxy <= rect.y0 || miny >= rect.y1) continue;
    if (clipped_area(ring, rect) > kMinArea) return true;
  }
  return false;
}

}  // namespace albench::geom
