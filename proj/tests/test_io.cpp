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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "wordalign/error.hpp"
#include "wordalign/io.hpp"
#include "wordalign/render.hpp"
#include "wordalign/synth.hpp"

using namespace wordalign;
using io::Json;

namespace {

SynthPage small_page(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.lines = 3;
  cfg.words_per_line_min = 2;
  cfg.words_per_line_max = 4;
  cfg.decoy_ratio = 1.0;
  return generate_page(cfg);
}

}  // namespace

TEST_CASE("parse, serialize, parse is the identity for every format") {
  AlignmentParams params;
  params.harvest_mode = HarvestMode::kSoft;
  params.tau = 0.2;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto page = small_page(seed);

    auto pj = io::to_json(page.proposals);
    auto pj2 = io::to_json(io::proposals_from_json(Json::parse(io::dump(pj))));
    CHECK(io::dump(pj) == io::dump(pj2));

    auto tj = io::to_json(page.transcript);
    CHECK(io::dump(io::to_json(io::transcript_from_json(Json::parse(io::dump(tj))))) == io::dump(tj));

    auto gj = io::to_json(page.truth);
    CHECK(io::dump(io::to_json(io::truth_from_json(Json::parse(io::dump(gj))))) == io::dump(gj));

    auto result = align_page(page.proposals, page.transcript, params);
    auto doc = io::make_document(result, page.transcript);
    auto aj = io::to_json(doc);
    auto doc2 = io::alignment_from_json(Json::parse(io::dump(aj)));
    CHECK(doc2.positions == doc.positions);
    CHECK(doc2.weak_annotations == doc.weak_annotations);
    CHECK(doc2.params == doc.params);
    CHECK(io::dump(io::to_json(doc2)) == io::dump(aj));

    std::vector<RankedResult> results;
    for (const auto &w : page.transcript.unique_words()) results.push_back(search(w, page.proposals, params));
    auto rj = io::results_to_json(results);
    CHECK(io::dump(io::results_to_json(io::results_from_json(Json::parse(io::dump(rj))))) == io::dump(rj));
  }
}

TEST_CASE("alignment document contents") {
  auto page = small_page(3);
  AlignmentParams params;
  auto result = align_page(page.proposals, page.transcript, params);
  auto doc = io::make_document(result, page.transcript);
  REQUIRE(doc.positions.size() == page.transcript.size());
  for (std::size_t k = 0; k < doc.positions.size(); ++k) {
    const auto &pos = doc.positions[k];
    CHECK(pos.k == k + 1);
    CHECK(pos.word == page.transcript.positions()[k].word);
    CHECK(pos.viterbi_box == page.proposals.entries[pos.viterbi_box_index].box);
    double sum = 0.0;
    for (std::size_t e = 0; e < pos.posterior.size(); ++e) {
      CHECK(pos.posterior[e].p >= PosteriorMatrix::kSparseThreshold);
      CHECK(pos.posterior[e].box == page.proposals.entries[pos.posterior[e].index].box);
      if (e > 0) CHECK(pos.posterior[e].index > pos.posterior[e - 1].index);
      sum += pos.posterior[e].p;
    }
    CHECK(sum <= 1.0 + 1e-9);
    CHECK(sum >= 1.0 - 1e-6 * static_cast<double>(result.states.size()));
  }
  CHECK(io::to_json(doc)["params"]["epsilon"] == 0.01);
  CHECK(io::to_json(doc)["params"]["emission_exponent_sign"] == "neg");
}

TEST_CASE("schema violations") {
  auto expect_schema = [](const std::string &text, auto parse) {
    try {
      parse(Json::parse(text));
      FAIL("expected a validation error for " << text);
    } catch (const ValidationError &) {
    }
  };
  auto proposals = [](const Json &j) { return io::proposals_from_json(j); };
  expect_schema(R"({"page_id":"p","width":10,"height":10})", proposals);
  expect_schema(R"({"page_id":"p","width":10,"height":10,"proposals":[{"box":[0,0,5],"score":0.5,"embedding":[]}]})",
                proposals);
  std::string emb107 = "[" + std::string([] {
    std::string s;
    for (int i = 0; i < 107; ++i) s += (i ? ",1" : "1");
    return s;
  }()) + "]";
  expect_schema(R"({"page_id":"p","width":10,"height":10,"proposals":[{"box":[0,0,5,5],"score":0.5,"embedding":)" +
                    emb107 + "}]}",
                proposals);
  std::string emb108 = "[" + std::string([] {
    std::string s;
    for (int i = 0; i < 108; ++i) s += (i ? ",1" : "1");
    return s;
  }()) + "]";
  // degenerate box and score out of range
  expect_schema(R"({"page_id":"p","width":10,"height":10,"proposals":[{"box":[3,0,3,5],"score":0.5,"embedding":)" +
                    emb108 + "}]}",
                proposals);
  expect_schema(R"({"page_id":"p","width":10,"height":10,"proposals":[{"box":[0,0,3,5],"score":1.5,"embedding":)" +
                    emb108 + "}]}",
                proposals);
  CHECK_NOTHROW(proposals(Json::parse(
      R"({"page_id":"p","width":10,"height":10,"proposals":[{"box":[0,0,3,5],"score":0.5,"embedding":)" + emb108 +
      "}]}")));

  auto transcript = [](const Json &j) { return io::transcript_from_json(j); };
  expect_schema(R"({"page_id":"p","lines":"abc"})", transcript);
  expect_schema(R"({"page_id":"p","lines":[[1,2]]})", transcript);
  expect_schema(R"({"page_id":"p","lines":[[]]})", transcript);
  expect_schema(R"({"page_id":"p","lines":[["ok","&"]]})", transcript);

  auto truth = [](const Json &j) { return io::truth_from_json(j); };
  expect_schema(R"({"page_id":"p","boxes":[{"box":[0,0,1,1],"label":""}]})", truth);

  auto results = [](const Json &j) { return io::results_from_json(j); };
  expect_schema(R"({"queries":[{"query":"a","results":[{"page_id":"p","box":[0,0,1,1],"similarity":0.1},
                                                      {"page_id":"p","box":[0,0,1,1],"similarity":0.5}]}]})",
                results);
}

TEST_CASE("page_objects accepts single pages and arrays") {
  bool was_array = true;
  auto one = io::page_objects(Json::parse(R"({"page_id":"a"})"), &was_array);
  CHECK(one.size() == 1);
  CHECK(!was_array);
  auto two = io::page_objects(Json::parse(R"([{"page_id":"a"},{"page_id":"b"}])"), &was_array);
  CHECK(two.size() == 2);
  CHECK(was_array);
  CHECK_THROWS_AS(io::page_objects(Json::parse("3")), ValidationError);
}

TEST_CASE("file helpers") {
  auto dir = std::filesystem::temp_directory_path() / "wordalign_io_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "x.json";
  io::write_file_atomic(path, "{\"a\": 1}\n");
  CHECK(io::read_json_file(path)["a"] == 1);
  CHECK(!std::filesystem::exists(dir / "x.json.tmp"));
  CHECK_THROWS_AS(io::read_json_file(dir / "missing.json"), IoError);
  io::write_file_atomic(dir / "bad.json", "{nope");
  CHECK_THROWS_AS(io::read_json_file(dir / "bad.json"), ValidationError);
  CHECK_THROWS_AS(io::write_file_atomic(dir / "no" / "such" / "dir.json", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("render_svg") {
  io::AlignmentDocument doc;
  doc.page_id = "r";
  doc.width = 300;
  doc.height = 100;
  for (std::size_t k = 1; k <= 3; ++k) {
    io::PositionRecord pos;
    pos.k = k;
    pos.word = "w" + std::to_string(k);
    BBox b{10.0 + 90.0 * static_cast<double>(k - 1), 80.0 + 90.0 * static_cast<double>(k - 1), 10, 40};
    pos.viterbi_box = b;
    pos.posterior.push_back({k, b, 0.9});
    pos.posterior.push_back({k + 10, BBox{0, 5, 60, 70}, 1e-7});
    doc.positions.push_back(pos);
  }
  auto svg = render_svg(doc);
  auto count = [&](const std::string &needle) {
    std::size_t n = 0;
    for (std::size_t at = svg.find(needle); at != std::string::npos; at = svg.find(needle, at + 1)) ++n;
    return n;
  };
  CHECK(count("class=\"posterior\"") == 3);
  CHECK(count("<text") == 3);
  CHECK(svg.find("1:w1") != std::string::npos);
  CHECK(svg.find("y=\"60.00\"") == std::string::npos);  // the 1e-7 entries
  CHECK(count("stroke-dasharray") == 0);

  PageTruth truth{"r", 300, 100, {{BBox{10, 80, 10, 40}, "w1"}, {BBox{100, 170, 10, 40}, "w<2>"}}};
  auto with_truth = render_svg(doc, &truth);
  CHECK(with_truth.find("stroke-dasharray") != std::string::npos);
  CHECK(with_truth.find("w&lt;2&gt;") != std::string::npos);
}
