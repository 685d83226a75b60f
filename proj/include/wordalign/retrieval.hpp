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

#ifndef WORDALIGN_RETRIEVAL_HPP_
#define WORDALIGN_RETRIEVAL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wordalign/alignment.hpp"
#include "wordalign/geometry.hpp"
#include "wordalign/params.hpp"

namespace wordalign {

// ---------------------------------------------------------------------------
// Filtering and search

struct ScoredBox {
  BBox box;
  double score = 0.0;
};

/// Subset with score >= threshold, order preserved.
ProposalSet score_filter(const ProposalSet &proposals, double threshold);
std::vector<std::size_t> score_filter_indices(const ProposalSet &proposals, double threshold);

/// Greedy non-max suppression. Repeatedly keeps the best remaining item and
/// drops every item whose IoU with it exceeds `overlap_threshold`; equal
/// scores go to the lower index. A threshold of 0 drops any positive
/// overlap. Returns surviving indices in selection order.
std::vector<std::size_t> nms(std::span<const ScoredBox> items, double overlap_threshold);

/// Proposal indices that survive score thresholding followed by NMS on the
/// wordness score, ascending.
std::vector<std::size_t> build_database(const ProposalSet &proposals,
                                        const AlignmentParams &params);

struct Hit {
  std::size_t index = 0;  // proposal index
  double similarity = 0.0;
};

/// Cosine ranking of `candidates` against `query` with zero-overlap NMS on
/// the similarity; sorted by descending similarity, lower index first on ties.
std::vector<Hit> rank_candidates(const ProposalSet &proposals,
                                 std::span<const std::size_t> candidates,
                                 const WordEmbedding &query, Exec exec = Exec::kParallel);

struct RankedEntry {
  std::string page_id;
  std::size_t index = 0;
  BBox box;
  double similarity = 0.0;
};

struct RankedResult {
  std::string query;
  std::vector<RankedEntry> entries;  // similarities non-increasing
};

/// Query-by-string search over one page. Throws UnembeddableToken.
RankedResult search(const std::string &query, const ProposalSet &database,
                    const AlignmentParams &params, Exec exec = Exec::kParallel);

/// Searches every page and merges the per-page rankings.
RankedResult search_pages(const std::string &query, std::span<const ProposalSet> pages,
                          const AlignmentParams &params, Exec exec = Exec::kParallel);

// ---------------------------------------------------------------------------
// Metrics

struct TruthBox {
  BBox box;
  std::string label;
};

struct PageTruth {
  std::string page_id;
  double width = 0.0;
  double height = 0.0;
  std::vector<TruthBox> boxes;
};

struct GroundTruth {
  std::vector<PageTruth> pages;

  const PageTruth *find(const std::string &page_id) const;
  /// Number of ground-truth boxes carrying `label` across all pages.
  std::size_t count_label(const std::string &label) const;
  /// Unique labels in first-appearance order.
  std::vector<std::string> unique_labels() const;
};

/// Per-rank relevance after one-to-one matching: an entry is relevant iff it
/// overlaps an unmatched ground-truth box of the query label with IoU > t_o.
std::vector<bool> relevance(const RankedResult &result, const GroundTruth &truth, double t_o);

/// (1/R) * sum_k P_k * r_k over a relevance vector.
double average_precision(const std::vector<bool> &relevant, std::size_t num_relevant);

/// nullopt when the query label has no ground-truth instances.
std::optional<double> average_precision(const RankedResult &result, const GroundTruth &truth,
                                        double t_o);

struct MapReport {
  double value = 0.0;
  std::size_t num_queries = 0;  // queries that contributed
  std::vector<std::string> skipped;
};

/// Mean AP over the queries with at least one relevant instance. Throws
/// ValidationError when no query remains.
MapReport mean_average_precision(std::span<const RankedResult> queries,
                                 const GroundTruth &truth, double t_o);

struct AlignedBox {
  BBox box;
  std::string label;
};

/// Fraction of aligned boxes that overlap some ground-truth box with
/// IoU > 0.5 and carry the label of the ground-truth box they overlap most,
/// over max(m, n). A page with neither is 1.0.
double alignment_accuracy(std::span<const AlignedBox> aligned, const PageTruth &truth);

}  // namespace wordalign

#endif  // WORDALIGN_RETRIEVAL_HPP_
