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

#include "wordalign/retrieval.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <map>
#include <numeric>
#include <set>

#include "wordalign/error.hpp"
#include "wordalign/log.hpp"

namespace wordalign {

namespace {
std::atomic<int> g_verbosity{static_cast<int>(Verbosity::kWarn)};
}

void set_verbosity(Verbosity v) { g_verbosity = static_cast<int>(v); }
Verbosity verbosity() { return static_cast<Verbosity>(g_verbosity.load()); }

void warn(const std::string &message) {
  if (g_verbosity >= static_cast<int>(Verbosity::kWarn))
    std::cerr << "wordalign: warning: " << message << '\n';
}

void info(const std::string &message) {
  if (g_verbosity >= static_cast<int>(Verbosity::kInfo)) std::cerr << "wordalign: " << message << '\n';
}

// ---------------------------------------------------------------------------
// Filtering and search

std::vector<std::size_t> score_filter_indices(const ProposalSet &proposals, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < proposals.entries.size(); ++i)
    if (proposals.entries[i].score >= threshold) out.push_back(i);
  return out;
}

ProposalSet score_filter(const ProposalSet &proposals, double threshold) {
  ProposalSet out;
  out.page = proposals.page;
  for (std::size_t i : score_filter_indices(proposals, threshold))
    out.entries.push_back(proposals.entries[i]);
  return out;
}

std::vector<std::size_t> nms(std::span<const ScoredBox> items, double overlap_threshold) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].score > items[b].score;
  });
  std::vector<bool> removed(items.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    std::size_t i = order[oi];
    if (removed[i]) continue;
    kept.push_back(i);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      std::size_t j = order[oj];
      if (!removed[j] && iou(items[i].box, items[j].box) > overlap_threshold) removed[j] = true;
    }
  }
  return kept;
}

std::vector<std::size_t> build_database(const ProposalSet &proposals,
                                        const AlignmentParams &params) {
  auto candidates = score_filter_indices(proposals, params.score_threshold);
  std::vector<ScoredBox> items;
  items.reserve(candidates.size());
  for (std::size_t i : candidates)
    items.push_back({proposals.entries[i].box, proposals.entries[i].score});
  std::vector<std::size_t> out;
  for (std::size_t k : nms(items, params.nms_overlap)) out.push_back(candidates[k]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Hit> rank_candidates(const ProposalSet &proposals,
                                 std::span<const std::size_t> candidates,
                                 const WordEmbedding &query, Exec exec) {
  std::vector<WordEmbedding> db;
  db.reserve(candidates.size());
  for (std::size_t i : candidates) db.push_back(proposals.entries[i].embedding);
  auto sims = exec == Exec::kSerial ? kernels::serial::cosine_scores(db, query)
                                    : kernels::parallel::cosine_scores(db, query);
  std::vector<ScoredBox> items;
  items.reserve(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c)
    items.push_back({proposals.entries[candidates[c]].box, sims[c]});
  // nms already returns survivors best-first with the lower-index tie rule.
  std::vector<Hit> out;
  for (std::size_t c : nms(items, 0.0)) out.push_back({candidates[c], sims[c]});
  return out;
}

RankedResult search(const std::string &query, const ProposalSet &database,
                    const AlignmentParams &params, Exec exec) {
  RankedResult out;
  out.query = query;
  auto q = dctow(normalize_token(query));
  auto candidates = build_database(database, params);
  for (const auto &hit : rank_candidates(database, candidates, q, exec))
    out.entries.push_back(
        {database.page.page_id, hit.index, database.entries[hit.index].box, hit.similarity});
  return out;
}

RankedResult search_pages(const std::string &query, std::span<const ProposalSet> pages,
                          const AlignmentParams &params, Exec exec) {
  RankedResult out;
  out.query = query;
  for (const auto &page : pages) {
    auto r = search(query, page, params, exec);
    out.entries.insert(out.entries.end(), r.entries.begin(), r.entries.end());
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const RankedEntry &a, const RankedEntry &b) {
                     return a.similarity > b.similarity;
                   });
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

const PageTruth *GroundTruth::find(const std::string &page_id) const {
  for (const auto &p : pages)
    if (p.page_id == page_id) return &p;
  return nullptr;
}

std::size_t GroundTruth::count_label(const std::string &label) const {
  std::size_t n = 0;
  for (const auto &p : pages)
    for (const auto &b : p.boxes) n += b.label == label;
  return n;
}

std::vector<std::string> GroundTruth::unique_labels() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto &p : pages)
    for (const auto &b : p.boxes)
      if (seen.insert(b.label).second) out.push_back(b.label);
  return out;
}

std::vector<bool> relevance(const RankedResult &result, const GroundTruth &truth, double t_o) {
  std::map<std::string, std::vector<bool>> matched;
  std::vector<bool> out;
  out.reserve(result.entries.size());
  for (const auto &entry : result.entries) {
    const PageTruth *page = truth.find(entry.page_id);
    bool hit = false;
    if (page) {
      auto &used = matched[entry.page_id];
      used.resize(page->boxes.size(), false);
      double best = t_o;
      std::size_t best_i = page->boxes.size();
      for (std::size_t i = 0; i < page->boxes.size(); ++i) {
        if (used[i] || page->boxes[i].label != result.query) continue;
        double o = iou(entry.box, page->boxes[i].box);
        if (o > best) {
          best = o;
          best_i = i;
        }
      }
      if (best_i < page->boxes.size()) {
        used[best_i] = true;
        hit = true;
      }
    }
    out.push_back(hit);
  }
  return out;
}

double average_precision(const std::vector<bool> &relevant, std::size_t num_relevant) {
  if (num_relevant == 0) throw ValidationError("no relevant items", "AP needs R_q >= 1");
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < relevant.size(); ++k) {
    if (!relevant[k]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(num_relevant);
}

std::optional<double> average_precision(const RankedResult &result, const GroundTruth &truth,
                                        double t_o) {
  std::size_t r = truth.count_label(result.query);
  if (r == 0) return std::nullopt;
  return average_precision(relevance(result, truth, t_o), r);
}

MapReport mean_average_precision(std::span<const RankedResult> queries,
                                 const GroundTruth &truth, double t_o) {
  MapReport report;
  double sum = 0.0;
  for (const auto &q : queries) {
    auto ap = average_precision(q, truth, t_o);
    if (!ap) {
      warn("query '" + q.query + "' has no ground-truth instances; skipped");
      report.skipped.push_back(q.query);
      continue;
    }
    sum += *ap;
    ++report.num_queries;
  }
  if (report.num_queries == 0)
    throw ValidationError("empty query set", "no query has ground-truth instances");
  report.value = sum / static_cast<double>(report.num_queries);
  return report;
}

double alignment_accuracy(std::span<const AlignedBox> aligned, const PageTruth &truth) {
  const std::size_t n = aligned.size();
  const std::size_t m = truth.boxes.size();
  if (n == 0 && m == 0) {
    warn("page '" + truth.page_id + "' has neither aligned nor ground-truth boxes");
    return 1.0;
  }
  std::size_t correct = 0;
  for (const auto &a : aligned) {
    double best = 0.0;
    std::size_t best_i = m;
    for (std::size_t i = 0; i < m; ++i) {
      double o = iou(a.box, truth.boxes[i].box);
      if (o > best) {
        best = o;
        best_i = i;
      }
    }
    bool overlaps = best > 0.5;
    bool label_matches = best_i < m && truth.boxes[best_i].label == a.label;
    correct += overlaps && label_matches;
  }
  return static_cast<double>(correct) / static_cast<double>(std::max(m, n));
}

}  // namespace wordalign
