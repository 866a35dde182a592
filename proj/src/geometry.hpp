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
#include <span>
#include <vector>

namespace albench::geom {

struct Point {
  double x = 0;
  double y = 0;
};

// Closed ring; the closing edge from back() to front() is implicit.
using Ring = std::vector<Point>;

// Half-open integer window [x0, x1) x [y0, y1).
struct Rect {
  std::int64_t x0 = 0;
  std::int64_t y0 = 0;
  std::int64_t x1 = 0;
  std::int64_t y1 = 0;

  std::int64_t area() const { return (x1 - x0) * (y1 - y0); }
};

// Touching edges do not count.
bool rects_overlap(const Rect& a, const Rect& b);

// Nonzero winding rule.
int winding_number(Point p, const Ring& ring);
bool point_in_ring(Point p, const Ring& ring);
// Rings of one instance are a union.
bool point_in_rings(Point p, std::span<const Ring> rings);

double signed_area(const Ring& ring);

// Area of rect covered by the ring under the nonzero winding rule.
double clipped_area(const Ring& ring, const Rect& rect);

bool rect_intersects_rings(const Rect& rect, std::span<const Ring> rings);

}  // namespace albench::geom
