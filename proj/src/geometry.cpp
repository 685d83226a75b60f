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

#include "wordalign/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "wordalign/error.hpp"

namespace wordalign {

bool BBox::valid() const {
  return std::isfinite(l) && std::isfinite(r) && std::isfinite(t) &&
         std::isfinite(b) && l < r && t < b;
}

double area(const BBox &box) { return (box.r - box.l) * (box.b - box.t); }

double intersection_area(const BBox &a, const BBox &b) {
  double w = std::min(a.r, b.r) - std::max(a.l, b.l);
  double h = std::min(a.b, b.b) - std::max(a.t, b.t);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double bounding_union_area(const BBox &a, const BBox &b) {
  double w = std::max(a.r, b.r) - std::min(a.l, b.l);
  double h = std::max(a.b, b.b) - std::min(a.t, b.t);
  return w * h;
}

double iou(const BBox &a, const BBox &b) {
  if (a == b) return 1.0;
  double inter = intersection_area(a, b);
  if (inter == 0.0) return 0.0;
  return inter / (area(a) + area(b) - inter);
}

BBox clamp_to_page(const BBox &box, const Page &page) {
  auto clamp = [](double v, double hi) { return std::clamp(v, 0.0, hi); };
  return BBox{clamp(box.l, page.width), clamp(box.r, page.width),
              clamp(box.t, page.height), clamp(box.b, page.height)};
}

std::vector<std::size_t> degenerate_indices(std::span<const BBox> boxes) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    if (!boxes[i].valid()) bad.push_back(i);
  return bad;
}

void validate_boxes(std::span<BBox> boxes, const Page &page) {
  if (!(page.width > 0.0) || !(page.height > 0.0))
    throw ValidationError("invalid page", "page '" + page.page_id +
                                              "' must have positive width and height");
  for (auto &box : boxes) box = clamp_to_page(box, page);
  auto bad = degenerate_indices(boxes);
  if (bad.empty()) return;
  std::string list;
  for (std::size_t i = 0; i < bad.size(); ++i) {
    if (i) list += ", ";
    list += std::to_string(bad[i]);
  }
  throw ValidationError("degenerate box",
                        "page '" + page.page_id +
                            "': zero width or height at box indices [" + list + "]");
}

}  // namespace wordalign
