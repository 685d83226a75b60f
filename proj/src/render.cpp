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

#include "wordalign/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wordalign {

namespace {

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string mass_color(double p) {
  p = std::clamp(p, 0.0, 1.0);
  int r = static_cast<int>(std::lround(40 + 215 * p));
  int b = static_cast<int>(std::lround(255 - 215 * p));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, 60, b);
  return buf;
}

void rect(std::ostringstream &out, const BBox &box, const std::string &attrs) {
  out << "<rect x=\"" << num(box.l) << "\" y=\"" << num(box.t) << "\" width=\"" << num(box.width())
      << "\" height=\"" << num(box.height()) << "\" " << attrs << "/>";
}

}  // namespace

std::string render_svg(const io::AlignmentDocument &doc, const PageTruth *truth) {
  constexpr double kMin = PosteriorMatrix::kSparseThreshold;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(doc.width) << "\" height=\""
      << num(doc.height) << "\" viewBox=\"0 0 " << num(doc.width) << ' ' << num(doc.height)
      << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(doc.width) << "\" height=\"" << num(doc.height)
      << "\" fill=\"white\"/>\n";

  if (truth) {
    out << "<g class=\"truth\">\n";
    for (const auto &b : truth->boxes) {
      rect(out, b.box, "class=\"truth\" fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"4 3\"");
      out << "<text x=\"" << num(b.box.l) << "\" y=\"" << num(b.box.b + 10)
          << "\" font-size=\"9\" fill=\"#555555\">" << escape(b.label) << "</text>\n";
    }
    out << "</g>\n";
  }

  for (const auto &pos : doc.positions) {
    const io::PosteriorEntry *best = nullptr;
    out << "<g class=\"position\" data-k=\"" << pos.k << "\">\n";
    for (const auto &e : pos.posterior) {
      if (e.p < kMin) continue;
      if (!best || e.p > best->p) best = &e;
      rect(out, e.box,
           "class=\"posterior\" fill=\"" + mass_color(e.p) + "\" fill-opacity=\"" +
               num(0.35 * e.p) + "\" stroke=\"" + mass_color(e.p) + "\" data-p=\"" +
               std::to_string(e.p) + "\"");
      out << '\n';
    }
    if (best) {
      out << "<text x=\"" << num(best->box.l + 2) << "\" y=\"" << num(best->box.t + 12)
          << "\" font-size=\"11\" fill=\"black\">" << escape(std::to_string(pos.k) + ":" + pos.word)
          << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace wordalign
