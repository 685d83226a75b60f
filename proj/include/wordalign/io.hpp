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

// JSON file formats. All files are UTF-8 JSON; boxes are [l, t, r, b].
//
//   proposals   {page_id, width, height, proposals: [{box, score, embedding}]}
//   transcript  {page_id, lines: [[token, ...], ...]}
//   truth       {page_id, width, height, boxes: [{box, label}]}
//   alignment   {page_id, width, height, params,
//                positions: [{k, word, viterbi_box_index, viterbi_box,
//                             posterior: [{index, box, p}]}],
//                weak_annotations: [{box, label, confidence, k}]}
//   results     {t_o?, queries: [{query, results: [{page_id, index, box, similarity}]}]}
//
// Page-level files may also hold a JSON array of page objects.

#ifndef WORDALIGN_IO_HPP_
#define WORDALIGN_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wordalign/alignment.hpp"
#include "wordalign/retrieval.hpp"

namespace wordalign::io {

using Json = nlohmann::ordered_json;

/// Throws IoError when unreadable, ValidationError("schema") on bad JSON.
Json read_json_file(const std::filesystem::path &path);

/// Writes to a temporary sibling and renames over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &contents);

/// Canonical text form used for every emitted file.
std::string dump(const Json &j);

/// A single page object becomes a one-element list.
std::vector<Json> page_objects(const Json &j, bool *was_array = nullptr);

Json box_to_json(const BBox &box);
BBox box_from_json(const Json &j);

Json params_to_json(const AlignmentParams &params);
AlignmentParams params_from_json(const Json &j);

Json to_json(const ProposalSet &proposals);
ProposalSet proposals_from_json(const Json &j);

Json to_json(const Transcript &transcript);
Transcript transcript_from_json(const Json &j);

Json to_json(const PageTruth &truth);
PageTruth truth_from_json(const Json &j);

struct PosteriorEntry {
  std::size_t index = 0;  // proposal index
  BBox box;
  double p = 0.0;
  friend bool operator==(const PosteriorEntry &, const PosteriorEntry &) = default;
};

struct PositionRecord {
  std::size_t k = 0;  // 1-based transcript position
  std::string word;
  std::size_t viterbi_box_index = 0;
  BBox viterbi_box;
  std::vector<PosteriorEntry> posterior;  // ascending by index, p >= 1e-6
  friend bool operator==(const PositionRecord &, const PositionRecord &) = default;
};

struct AnnotationRecord {
  BBox box;
  std::string label;
  double confidence = 0.0;
  std::size_t k = 0;  // 1-based transcript position
  friend bool operator==(const AnnotationRecord &, const AnnotationRecord &) = default;
};

/// Serialized alignment of one page.
struct AlignmentDocument {
  std::string page_id;
  double width = 0.0;
  double height = 0.0;
  AlignmentParams params;
  std::vector<PositionRecord> positions;
  std::vector<AnnotationRecord> weak_annotations;

  /// Highest-posterior box of each position (lowest index on ties).
  std::vector<AlignedBox> posterior_boxes() const;
  std::vector<AlignedBox> viterbi_boxes() const;
};

AlignmentDocument make_document(const AlignmentResult &result, const Transcript &transcript);
Json to_json(const AlignmentDocument &doc);
AlignmentDocument alignment_from_json(const Json &j);

Json to_json(const RankedResult &result);
RankedResult ranked_from_json(const Json &j);
Json results_to_json(const std::vector<RankedResult> &results);
std::vector<RankedResult> results_from_json(const Json &j);

}  // namespace wordalign::io

#endif  // WORDALIGN_IO_HPP_
