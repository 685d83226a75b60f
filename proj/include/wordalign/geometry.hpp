// Copyright 2026 The wordalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WORDALIGN_GEOMETRY_HPP_
#define WORDALIGN_GEOMETRY_HPP_

#include <array>
#include <span>
#include <string>
#include <vector>

namespace wordalign {

/// Axis-aligned word box. Pixel coordinates, y grows downward.
/// Extremes are left, right, top, bottom; the box is valid when
/// left < right and top < bottom.
struct BBox {
  double l = 0.0;
  double r = 0.0;
  double t = 0.0;
  double b = 0.0;

  double width() const { return r - l; }
  double height() const { return b - t; }
  bool valid() const;

  /// Serialization order is [l, t, r, b].
  std::array<double, 4> to_ltrb() const { return {l, t, r, b}; }
  static BBox from_ltrb(const std::array<double, 4> &v) {
    return BBox{v[0], v[2], v[1], v[3]};
  }

  friend bool operator==(const BBox &, const BBox &) = default;
};

struct Page {
  std::string page_id;
  double width = 0.0;
  double height = 0.0;
};

double area(const BBox &box);
double intersection_area(const BBox &a, const BBox &b);
/// Area of the smallest axis-aligned rectangle containing both boxes.
double bounding_union_area(const BBox &a, const BBox &b);
double iou(const BBox &a, const BBox &b);

/// Clamps to [0,width]x[0,height].
BBox clamp_to_page(const BBox &box, const Page &page);

/// Clamps every box onto the page and throws ValidationError listing the
/// indices of boxes that end up with zero width or height.
void validate_boxes(std::span<BBox> boxes, const Page &page);

/// Indices of degenerate (non-positive width or height) boxes.
std::vector<std::size_t> degenerate_indices(std::span<const BBox> boxes);

}  // namespace wordalign

#endif  // WORDALIGN_GEOMETRY_HPP_
