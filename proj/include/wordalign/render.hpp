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

#ifndef WORDALIGN_RENDER_HPP_
#define WORDALIGN_RENDER_HPP_

#include <string>

#include "wordalign/io.hpp"
#include "wordalign/retrieval.hpp"

namespace wordalign {

/// Static SVG overlay: posterior boxes colored by mass (blue low, red high),
/// the top box of each position labeled with its word, ground truth dashed.
/// Entries below the sparsification threshold are never drawn.
std::string render_svg(const io::AlignmentDocument &doc, const PageTruth *truth = nullptr);

}  // namespace wordalign

#endif  // WORDALIGN_RENDER_HPP_
