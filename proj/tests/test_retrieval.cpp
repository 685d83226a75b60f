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

#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "wordalign/error.hpp"
#include "wordalign/log.hpp"
#include "wordalign/retrieval.hpp"
#include "wordalign/synth.hpp"

using namespace wordalign;

namespace {

BBox box(double l, double r, double t, double b) { return BBox{l, r, t, b}; }

RankedResult ranked(const std::string &query, const std::vector<BBox> &boxes,
                    const std::string &page = "p") {
  RankedResult r;
  r.query = query;
  double sim = 1.0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    r.entries.push_back({page, i, boxes[i], sim});
    sim -= 0.01;
  }
  return r;
}

}  // namespace

TEST_CASE("score_filter") {
  ProposalSet ps;
  ps.page = Page{"p", 100, 100};
  for (double s : {0.2, 0.6, 0.9}) ps.entries.push_back({box(0, 10, 0, 10), s, dctow("a")});
  CHECK(score_filter(ps, 0.0).entries.size() == 3);
  CHECK(score_filter(ps, 1.0 + 1e-9).entries.empty());
  auto kept = score_filter(ps, 0.5);
  REQUIRE(kept.entries.size() == 2);
  CHECK(kept.entries[0].score == 0.6);
  CHECK(kept.entries[1].score == 0.9);
}

TEST_CASE("nms") {
  std::vector<ScoredBox> single = {{box(0, 10, 0, 10), 0.3}};
  CHECK(nms(single, 0.5) == std::vector<std::size_t>{0});

  std::vector<ScoredBox> twins = {{box(0, 10, 0, 10), 0.8}, {box(0, 10, 0, 10), 0.9}};
  CHECK(nms(twins, 0.5) == std::vector<std::size_t>{1});

  std::vector<ScoredBox> disjoint = {{box(0, 10, 0, 10), 0.8}, {box(20, 30, 0, 10), 0.9}};
  for (double th : {0.0, 0.3, 1.0}) CHECK(nms(disjoint, th).size() == 2);

  // zero threshold suppresses any positive overlap, touching is fine
  std::vector<ScoredBox> sliver = {{box(0, 10, 0, 10), 0.9}, {box(9.9, 20, 0, 10), 0.7},
                                   {box(10, 20, 20, 30), 0.5}, {box(20, 30, 20, 30), 0.4}};
  CHECK(nms(sliver, 0.0) == std::vector<std::size_t>{0, 2, 3});

  // equal scores go to the lower index
  std::vector<ScoredBox> tie = {{box(0, 10, 0, 10), 0.5}, {box(2, 12, 0, 10), 0.5}};
  CHECK(nms(tie, 0.1) == std::vector<std::size_t>{0});
}

TEST_CASE("nms survivors are permutation invariant and mutually non-suppressing") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoredBox> items;
    for (int i = 0; i < 40; ++i) items.push_back({testing::random_box(rng, 300, 200), rng.uniform01()});
    double th = rng.uniform(0.0, 0.7);
    auto kept = nms(items, th);
    for (std::size_t a = 0; a < kept.size(); ++a)
      for (std::size_t b = a + 1; b < kept.size(); ++b)
        CHECK(iou(items[kept[a]].box, items[kept[b]].box) <= th);

    std::vector<std::size_t> perm(items.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    std::vector<ScoredBox> shuffled;
    for (auto p : perm) shuffled.push_back(items[p]);
    std::vector<std::size_t> mapped;
    for (auto k : nms(shuffled, th)) mapped.push_back(perm[k]);
    CHECK(mapped == kept);
  }
}

TEST_CASE("search") {
  AlignmentParams params;
  ProposalSet ps;
  ps.page = Page{"p", 400, 100};
  Rng noise(1);
  ps.entries.push_back({box(0, 50, 0, 30), 0.9, perturb_embedding(dctow("fort"), 0.2, noise)});
  ps.entries.push_back({box(100, 150, 0, 30), 0.9, dctow("orders")});
  ps.entries.push_back({box(200, 250, 0, 30), 0.9, dctow("regiment")});
  auto r = search("Orders", ps, params);
  REQUIRE(!r.entries.empty());
  CHECK(r.entries[0].index == 1);
  CHECK(r.entries[0].similarity == doctest::Approx(1.0));
  for (std::size_t i = 1; i < r.entries.size(); ++i)
    CHECK(r.entries[i].similarity <= r.entries[i - 1].similarity);

  ProposalSet empty;
  empty.page = Page{"e", 10, 10};
  CHECK(search("orders", empty, params).entries.empty());
  CHECK_THROWS_AS(search("!!", ps, params), UnembeddableToken);

  // small overlap (IoU < nms_overlap) survives the score NMS but not the
  // zero-overlap similarity NMS
  Rng rng(2);
  ProposalSet pair;
  pair.page = Page{"q", 400, 100};
  WordEmbedding target = dctow("march");
  auto with_similarity = [&](double c) {
    auto noise = random_unit_embedding(rng);
    double along = 0.0;
    auto t = target.normalized();
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) along += noise[i] * t[i];
    WordEmbedding orth;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) orth[i] = noise[i] - along * t[i];
    orth = orth.normalized();
    WordEmbedding e;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) e[i] = c * t[i] + std::sqrt(1 - c * c) * orth[i];
    return e;
  };
  pair.entries.push_back({box(0, 100, 0, 30), 0.8, with_similarity(0.7)});
  pair.entries.push_back({box(80, 180, 0, 30), 0.8, with_similarity(0.9)});
  auto pr = search("march", pair, params);
  REQUIRE(pr.entries.size() == 1);
  CHECK(pr.entries[0].index == 1);
  CHECK(pr.entries[0].similarity == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("average_precision") {
  CHECK(average_precision(std::vector<bool>{true}, 1) == 1.0);
  CHECK(average_precision(std::vector<bool>{true, false, true}, 2) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(average_precision(std::vector<bool>{false, false}, 3) == 0.0);
  CHECK_THROWS_AS(average_precision(std::vector<bool>{true}, 0), ValidationError);

  GroundTruth truth;
  truth.pages.push_back({"p", 100, 100, {{box(0, 10, 0, 10), "fort"}, {box(20, 30, 0, 10), "fort"},
                                         {box(40, 50, 0, 10), "march"}}});
  // rank 1 hits, rank 2 duplicates the same instance, rank 3 hits the second
  auto r = ranked("fort", {box(0, 10, 0, 10), box(0.5, 10, 0, 10), box(20, 30, 0, 10)});
  auto rel = relevance(r, truth, 0.5);
  CHECK(rel == std::vector<bool>{true, false, true});
  CHECK(*average_precision(r, truth, 0.5) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));

  // label must match
  auto wrong = ranked("march", {box(0, 10, 0, 10)});
  CHECK(*average_precision(wrong, truth, 0.5) == 0.0);
  // unknown label is skipped
  CHECK(!average_precision(ranked("widow", {box(0, 10, 0, 10)}), truth, 0.5).has_value());
  // another page's box never matches
  CHECK(*average_precision(ranked("march", {box(40, 50, 0, 10)}, "other"), truth, 0.5) == 0.0);
}

TEST_CASE("AP is perfect iff the relevant items lead, and ignores the irrelevant tail order") {
  Rng rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 20));
    std::vector<bool> rel(n);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += (rel[i] = rng.uniform01() < 0.4);
    if (count == 0) continue;
    double ap = average_precision(rel, count);
    CHECK(ap >= 0.0);
    CHECK(ap <= 1.0 + 1e-15);
    bool leading = std::all_of(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(count),
                               [](bool b) { return b; });
    CHECK((std::abs(ap - 1.0) < 1e-12) == leading);
    // appending irrelevant items does not move AP
    auto longer = rel;
    longer.insert(longer.end(), 5, false);
    CHECK(average_precision(longer, count) == ap);
  }
}

TEST_CASE("mean_average_precision") {
  GroundTruth truth;
  truth.pages.push_back({"p", 100, 100, {{box(0, 10, 0, 10), "fort"}, {box(20, 30, 0, 10), "march"}}});
  std::vector<RankedResult> one = {ranked("fort", {box(0, 10, 0, 10)})};
  CHECK(mean_average_precision(one, truth, 0.5).value == 1.0);

  std::vector<RankedResult> two = {ranked("fort", {box(0, 10, 0, 10)}),
                                   ranked("march", {box(60, 70, 0, 10), box(20, 30, 0, 10)})};
  auto rep = mean_average_precision(two, truth, 0.5);
  CHECK(rep.value == doctest::Approx(0.75));
  CHECK(rep.num_queries == 2);

  set_verbosity(Verbosity::kQuiet);
  std::vector<RankedResult> skip = {ranked("fort", {box(0, 10, 0, 10)}), ranked("widow", {})};
  auto srep = mean_average_precision(skip, truth, 0.5);
  CHECK(srep.num_queries == 1);
  CHECK(srep.skipped == std::vector<std::string>{"widow"});
  std::vector<RankedResult> only_skipped = {ranked("widow", {})};
  CHECK_THROWS_AS(mean_average_precision(only_skipped, truth, 0.5), ValidationError);
  CHECK_THROWS_AS(mean_average_precision(std::vector<RankedResult>{}, truth, 0.5), ValidationError);
  set_verbosity(Verbosity::kWarn);
}

TEST_CASE("alignment_accuracy") {
  PageTruth truth{"p", 100, 100, {{box(0, 10, 0, 10), "a"}, {box(20, 30, 0, 10), "b"}, {box(40, 50, 0, 10), "c"}}};
  std::vector<AlignedBox> exact = {{box(0, 10, 0, 10), "a"}, {box(20, 30, 0, 10), "b"}, {box(40, 50, 0, 10), "c"}};
  CHECK(alignment_accuracy(exact, truth) == 1.0);

  std::vector<AlignedBox> two_right = {{box(0, 10, 0, 10), "a"}, {box(20, 30, 0, 10), "x"}, {box(41, 50, 0, 10), "c"}};
  CHECK(alignment_accuracy(two_right, truth) == doctest::Approx(2.0 / 3.0));

  // overlap must exceed one half
  std::vector<AlignedBox> shifted = {{box(5, 15, 0, 10), "a"}};
  CHECK(alignment_accuracy(shifted, truth) == 0.0);

  // duplicate matches to one ground-truth box are not penalized
  PageTruth small{"p", 100, 100, {{box(0, 10, 0, 10), "a"}, {box(20, 30, 0, 10), "b"}}};
  std::vector<AlignedBox> dup = {{box(0, 10, 0, 10), "a"}, {box(0.5, 10, 0, 10), "a"}, {box(20, 30, 0, 10), "b"}};
  CHECK(alignment_accuracy(dup, small) == 1.0);

  set_verbosity(Verbosity::kQuiet);
  CHECK(alignment_accuracy({}, PageTruth{"empty", 1, 1, {}}) == 1.0);
  set_verbosity(Verbosity::kWarn);
  CHECK(alignment_accuracy({}, truth) == 0.0);

  std::vector<AlignedBox> reversed(two_right.rbegin(), two_right.rend());
  CHECK(alignment_accuracy(reversed, truth) == alignment_accuracy(two_right, truth));
}

TEST_CASE("zero-noise simulator page retrieves perfectly") {
  SynthConfig cfg;
  cfg.seed = 8;
  cfg.noise_sigma = 0.0;
  cfg.decoy_ratio = 0.0;
  auto page = generate_page(cfg);
  GroundTruth truth;
  truth.pages.push_back(page.truth);
  AlignmentParams params;
  std::vector<RankedResult> results;
  for (const auto &q : truth.unique_labels()) results.push_back(search(q, page.proposals, params));
  CHECK(mean_average_precision(results, truth, 0.5).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mean_average_precision(results, truth, 0.25).value == doctest::Approx(1.0).epsilon(1e-15));
}
