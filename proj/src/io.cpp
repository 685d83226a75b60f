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

#include "wordalign/io.hpp"

#include <fstream>
#include <sstream>

#include "wordalign/error.hpp"

namespace wordalign::io {

namespace {

[[noreturn]] void schema_error(const std::string &what) { throw ValidationError("schema", what); }

const Json &field(const Json &j, const char *key) {
  if (!j.is_object()) schema_error(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json &j, const char *what) {
  if (!j.is_number()) schema_error(std::string("'") + what + "' must be a number");
  return j.get<double>();
}

std::string string_value(const Json &j, const char *what) {
  if (!j.is_string()) schema_error(std::string("'") + what + "' must be a string");
  return j.get<std::string>();
}

std::size_t index_value(const Json &j, const char *what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    schema_error(std::string("'") + what + "' must be a non-negative integer");
  return j.get<std::size_t>();
}

const Json &array(const Json &j, const char *what) {
  if (!j.is_array()) schema_error(std::string("'") + what + "' must be an array");
  return j;
}

}  // namespace

Json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error &e) {
    schema_error("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename onto '" + path.string() + "': " + ec.message());
}

std::string dump(const Json &j) { return j.dump(1) + "\n"; }

std::vector<Json> page_objects(const Json &j, bool *was_array) {
  if (was_array) *was_array = j.is_array();
  if (j.is_array()) return std::vector<Json>(j.begin(), j.end());
  if (j.is_object()) return {j};
  schema_error("expected a page object or an array of page objects");
}

Json box_to_json(const BBox &box) {
  auto v = box.to_ltrb();
  return Json::array({v[0], v[1], v[2], v[3]});
}

BBox box_from_json(const Json &j) {
  if (!j.is_array() || j.size() != 4) schema_error("box must be [l, t, r, b]");
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) v[i] = number(j[i], "box");
  return BBox::from_ltrb(v);
}

Json params_to_json(const AlignmentParams &p) {
  Json j;
  j["epsilon"] = p.epsilon;
  j["top_k"] = p.top_k;
  j["tau"] = p.tau;
  j["score_threshold"] = p.score_threshold;
  j["nms_overlap"] = p.nms_overlap;
  j["harvest_mode"] = to_string(p.harvest_mode);
  j["emission_exponent_sign"] = to_string(p.emission_sign);
  return j;
}

AlignmentParams params_from_json(const Json &j) {
  AlignmentParams p;
  p.epsilon = number(field(j, "epsilon"), "epsilon");
  p.top_k = static_cast<int>(index_value(field(j, "top_k"), "top_k"));
  p.tau = number(field(j, "tau"), "tau");
  p.score_threshold = number(field(j, "score_threshold"), "score_threshold");
  p.nms_overlap = number(field(j, "nms_overlap"), "nms_overlap");
  p.harvest_mode = parse_harvest_mode(string_value(field(j, "harvest_mode"), "harvest_mode"));
  p.emission_sign = parse_exponent_sign(
      string_value(field(j, "emission_exponent_sign"), "emission_exponent_sign"));
  return p;
}

Json to_json(const ProposalSet &proposals) {
  Json j;
  j["page_id"] = proposals.page.page_id;
  j["width"] = proposals.page.width;
  j["height"] = proposals.page.height;
  Json list = Json::array();
  for (const auto &e : proposals.entries) {
    Json item;
    item["box"] = box_to_json(e.box);
    item["score"] = e.score;
    auto v = e.embedding.values();
    item["embedding"] = Json(std::vector<double>(v.begin(), v.end()));
    list.push_back(std::move(item));
  }
  j["proposals"] = std::move(list);
  return j;
}

ProposalSet proposals_from_json(const Json &j) {
  ProposalSet out;
  out.page.page_id = string_value(field(j, "page_id"), "page_id");
  out.page.width = number(field(j, "width"), "width");
  out.page.height = number(field(j, "height"), "height");
  for (const auto &item : array(field(j, "proposals"), "proposals")) {
    Proposal p;
    p.box = box_from_json(field(item, "box"));
    p.score = number(field(item, "score"), "score");
    const auto &emb = array(field(item, "embedding"), "embedding");
    std::vector<double> values;
    for (const auto &v : emb) values.push_back(number(v, "embedding"));
    p.embedding = WordEmbedding::from_values(values);
    out.entries.push_back(std::move(p));
  }
  out.validate();
  return out;
}

Json to_json(const Transcript &transcript) {
  Json j;
  j["page_id"] = transcript.page_id();
  j["lines"] = transcript.lines();
  return j;
}

Transcript transcript_from_json(const Json &j) {
  std::vector<std::vector<std::string>> lines;
  for (const auto &line : array(field(j, "lines"), "lines")) {
    std::vector<std::string> tokens;
    for (const auto &t : array(line, "line")) tokens.push_back(string_value(t, "token"));
    lines.push_back(std::move(tokens));
  }
  return Transcript(string_value(field(j, "page_id"), "page_id"), std::move(lines));
}

Json to_json(const PageTruth &truth) {
  Json j;
  j["page_id"] = truth.page_id;
  j["width"] = truth.width;
  j["height"] = truth.height;
  Json list = Json::array();
  for (const auto &b : truth.boxes) list.push_back({{"box", box_to_json(b.box)}, {"label", b.label}});
  j["boxes"] = std::move(list);
  return j;
}

PageTruth truth_from_json(const Json &j) {
  PageTruth out;
  out.page_id = string_value(field(j, "page_id"), "page_id");
  if (j.contains("width")) out.width = number(j["width"], "width");
  if (j.contains("height")) out.height = number(j["height"], "height");
  std::vector<BBox> boxes;
  for (const auto &item : array(field(j, "boxes"), "boxes")) {
    TruthBox b{box_from_json(field(item, "box")), string_value(field(item, "label"), "label")};
    if (b.label.empty()) schema_error("ground-truth label must be non-empty");
    boxes.push_back(b.box);
    out.boxes.push_back(std::move(b));
  }
  auto bad = degenerate_indices(boxes);
  if (!bad.empty())
    throw ValidationError("degenerate box", "ground truth '" + out.page_id + "' has degenerate box " +
                                                std::to_string(bad.front()));
  return out;
}

std::vector<AlignedBox> AlignmentDocument::posterior_boxes() const {
  std::vector<AlignedBox> out;
  for (const auto &pos : positions) {
    if (pos.posterior.empty()) continue;
    const PosteriorEntry *best = &pos.posterior.front();
    for (const auto &e : pos.posterior)
      if (e.p > best->p) best = &e;
    out.push_back({best->box, pos.word});
  }
  return out;
}

std::vector<AlignedBox> AlignmentDocument::viterbi_boxes() const {
  std::vector<AlignedBox> out;
  for (const auto &pos : positions) out.push_back({pos.viterbi_box, pos.word});
  return out;
}

AlignmentDocument make_document(const AlignmentResult &result, const Transcript &transcript) {
  AlignmentDocument doc;
  doc.page_id = result.page.page_id;
  doc.width = result.page.width;
  doc.height = result.page.height;
  doc.params = result.params;
  const auto &positions = transcript.positions();
  for (std::size_t k = 0; k < result.posteriors.num_positions(); ++k) {
    PositionRecord rec;
    rec.k = k + 1;
    rec.word = positions[k].word;
    rec.viterbi_box_index = result.viterbi_proposal(k);
    rec.viterbi_box = result.states.boxes[result.viterbi_states[k]];
    for (const auto &sp : result.posteriors.sparse(k))
      rec.posterior.push_back({result.states.states[sp.state], result.states.boxes[sp.state], sp.p});
    doc.positions.push_back(std::move(rec));
  }
  for (const auto &a : result.annotations)
    doc.weak_annotations.push_back({a.box, a.label, a.confidence, a.position + 1});
  return doc;
}

Json to_json(const AlignmentDocument &doc) {
  Json j;
  j["page_id"] = doc.page_id;
  j["width"] = doc.width;
  j["height"] = doc.height;
  j["params"] = params_to_json(doc.params);
  Json positions = Json::array();
  for (const auto &pos : doc.positions) {
    Json p;
    p["k"] = pos.k;
    p["word"] = pos.word;
    p["viterbi_box_index"] = pos.viterbi_box_index;
    p["viterbi_box"] = box_to_json(pos.viterbi_box);
    Json post = Json::array();
    for (const auto &e : pos.posterior)
      post.push_back({{"index", e.index}, {"box", box_to_json(e.box)}, {"p", e.p}});
    p["posterior"] = std::move(post);
    positions.push_back(std::move(p));
  }
  j["positions"] = std::move(positions);
  Json ann = Json::array();
  for (const auto &a : doc.weak_annotations)
    ann.push_back({{"box", box_to_json(a.box)}, {"label", a.label}, {"confidence", a.confidence}, {"k", a.k}});
  j["weak_annotations"] = std::move(ann);
  return j;
}

AlignmentDocument alignment_from_json(const Json &j) {
  AlignmentDocument doc;
  doc.page_id = string_value(field(j, "page_id"), "page_id");
  doc.width = number(field(j, "width"), "width");
  doc.height = number(field(j, "height"), "height");
  doc.params = params_from_json(field(j, "params"));
  for (const auto &p : array(field(j, "positions"), "positions")) {
    PositionRecord rec;
    rec.k = index_value(field(p, "k"), "k");
    rec.word = string_value(field(p, "word"), "word");
    rec.viterbi_box_index = index_value(field(p, "viterbi_box_index"), "viterbi_box_index");
    rec.viterbi_box = box_from_json(field(p, "viterbi_box"));
    for (const auto &e : array(field(p, "posterior"), "posterior")) {
      double prob = number(field(e, "p"), "p");
      if (!(prob >= 0.0 && prob <= 1.0)) schema_error("posterior p must lie in [0, 1]");
      rec.posterior.push_back({index_value(field(e, "index"), "index"), box_from_json(field(e, "box")), prob});
    }
    doc.positions.push_back(std::move(rec));
  }
  for (const auto &a : array(field(j, "weak_annotations"), "weak_annotations"))
    doc.weak_annotations.push_back({box_from_json(field(a, "box")),
                                    string_value(field(a, "label"), "label"),
                                    number(field(a, "confidence"), "confidence"),
                                    a.contains("k") ? index_value(a["k"], "k") : 0});
  return doc;
}

Json to_json(const RankedResult &result) {
  Json j;
  j["query"] = result.query;
  Json list = Json::array();
  for (const auto &e : result.entries)
    list.push_back({{"page_id", e.page_id},
                    {"index", e.index},
                    {"box", box_to_json(e.box)},
                    {"similarity", e.similarity}});
  j["results"] = std::move(list);
  return j;
}

RankedResult ranked_from_json(const Json &j) {
  RankedResult out;
  out.query = string_value(field(j, "query"), "query");
  for (const auto &e : array(field(j, "results"), "results")) {
    RankedEntry entry;
    entry.page_id = string_value(field(e, "page_id"), "page_id");
    entry.index = e.contains("index") ? index_value(e["index"], "index") : 0;
    entry.box = box_from_json(field(e, "box"));
    entry.similarity = number(field(e, "similarity"), "similarity");
    out.entries.push_back(std::move(entry));
  }
  for (std::size_t i = 1; i < out.entries.size(); ++i)
    if (out.entries[i].similarity > out.entries[i - 1].similarity)
      schema_error("results for '" + out.query + "' are not sorted by descending similarity");
  return out;
}

Json results_to_json(const std::vector<RankedResult> &results) {
  Json list = Json::array();
  for (const auto &r : results) list.push_back(to_json(r));
  Json j;
  j["queries"] = std::move(list);
  return j;
}

std::vector<RankedResult> results_from_json(const Json &j) {
  std::vector<RankedResult> out;
  for (const auto &q : array(field(j, "queries"), "queries")) out.push_back(ranked_from_json(q));
  return out;
}

}  // namespace wordalign::io
