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

#include "wordalign/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wordalign/error.hpp"
#include "wordalign/retrieval.hpp"

namespace wordalign {

// ---------------------------------------------------------------------------
// Parameters

void AlignmentParams::validate() const {
  auto fail = [](const std::string &what) { throw ValidationError("invalid parameter", what); };
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (top_k < 1) fail("top_k must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) fail("tau must lie in (0, 1]");
  if (!std::isfinite(score_threshold)) fail("score_threshold must be finite");
  if (!(nms_overlap >= 0.0 && nms_overlap <= 1.0)) fail("nms_overlap must lie in [0, 1]");
}

std::string to_string(HarvestMode mode) { return mode == HarvestMode::kHard ? "hard" : "soft"; }
std::string to_string(ExponentSign sign) {
  return sign == ExponentSign::kNegative ? "neg" : "pos";
}

HarvestMode parse_harvest_mode(const std::string &s) {
  if (s == "hard") return HarvestMode::kHard;
  if (s == "soft") return HarvestMode::kSoft;
  throw ValidationError("invalid parameter", "harvest mode must be hard or soft, got '" + s + "'");
}

ExponentSign parse_exponent_sign(const std::string &s) {
  if (s == "neg") return ExponentSign::kNegative;
  if (s == "pos") return ExponentSign::kPositive;
  throw ValidationError("invalid parameter", "exponent sign must be neg or pos, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// Inputs

Transcript::Transcript(std::string page_id, std::vector<std::vector<std::string>> lines,
                       const Alphabet &alphabet)
    : page_id_(std::move(page_id)), lines_(std::move(lines)) {
  std::map<std::string, std::size_t> ids;
  bool first = true;
  for (std::size_t li = 0; li < lines_.size(); ++li) {
    bool new_line = true;
    for (const auto &token : lines_[li]) {
      TranscriptPosition pos;
      pos.token = token;
      pos.word = normalize_token(token, alphabet);
      pos.line = li;
      pos.line_break = !first && new_line;
      auto [it, inserted] = ids.emplace(pos.word, unique_words_.size());
      if (inserted) unique_words_.push_back(pos.word);
      pos.word_id = it->second;
      positions_.push_back(std::move(pos));
      first = false;
      new_line = false;
    }
  }
  if (positions_.empty())
    throw ValidationError("empty transcript", "transcript '" + page_id_ + "' has no tokens");
}

void ProposalSet::validate() {
  std::vector<BBox> boxes;
  boxes.reserve(entries.size());
  for (const auto &e : entries) boxes.push_back(e.box);
  validate_boxes(boxes, page);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].box = boxes[i];
    if (!(entries[i].score >= 0.0 && entries[i].score <= 1.0))
      throw ValidationError("invalid score", "proposal " + std::to_string(i) +
                                                 " has a score outside [0, 1]");
    if (!(entries[i].embedding.norm() > 0.0) || !std::isfinite(entries[i].embedding.norm()))
      throw ValidationError("bad embedding",
                            "proposal " + std::to_string(i) + " has an invalid embedding");
  }
}

// ---------------------------------------------------------------------------
// Likelihoods

namespace {
constexpr double kHalfDim = static_cast<double>(kEmbeddingDim) / 2.0;
}

double log_emission_likelihood(double cosine, ExponentSign sign) {
  double d = cosine - 1.0;
  double e = d * d * kHalfDim;
  return sign == ExponentSign::kNegative ? -e : e;
}

double emission_likelihood(double cosine, ExponentSign sign) {
  return std::exp(log_emission_likelihood(cosine, sign));
}

double emission_likelihood(const WordEmbedding &x, const WordEmbedding &y, ExponentSign sign) {
  return emission_likelihood(cosine_similarity(x, y), sign);
}

double transition_rule(const BBox &i, const BBox &j, bool line_break, double epsilon) {
  if (line_break) return j.b > i.t ? 1.0 : epsilon;
  double h = std::max(i.height(), j.height());
  bool rightward = j.r > i.l;
  bool same_height = i.t - h < j.t && j.t < i.t + h;
  return rightward && same_height ? 1.0 : epsilon;
}

double transition_penalty(const BBox &i, const BBox &j, bool line_break, double epsilon) {
  double ai = area(i);
  double aj = area(j);
  double inter = intersection_area(i, j);
  double overlap = 1.0 - (1.0 - epsilon) * inter / std::min(ai, aj);
  if (line_break) return overlap;
  double gap = epsilon + (1.0 - epsilon) * (ai + aj - inter) / bounding_union_area(i, j);
  return overlap * gap;
}

double transition_likelihood(const BBox &i, const BBox &j, bool line_break, double epsilon) {
  return transition_rule(i, j, line_break, epsilon) *
         transition_penalty(i, j, line_break, epsilon);
}

// ---------------------------------------------------------------------------
// State space

StateSpace state_space_from_indices(const ProposalSet &proposals,
                                    std::vector<std::size_t> indices,
                                    const Transcript &transcript, const AlignmentParams &params,
                                    Exec exec) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.empty())
    throw ValidationError("empty state space",
                          "no proposals survived filtering on page '" + proposals.page.page_id +
                              "'");
  StateSpace out;
  out.states = std::move(indices);
  std::vector<WordEmbedding> state_embeddings;
  for (std::size_t idx : out.states) {
    if (idx >= proposals.entries.size())
      throw ValidationError("invalid state", "state references proposal " + std::to_string(idx) +
                                                 " beyond the proposal list");
    out.boxes.push_back(proposals.entries[idx].box);
    state_embeddings.push_back(proposals.entries[idx].embedding);
  }
  std::vector<WordEmbedding> words;
  for (const auto &w : transcript.unique_words()) words.push_back(dctow(w));
  out.log_emission = exec == Exec::kSerial
                         ? kernels::serial::emission_matrix(state_embeddings, words,
                                                            params.emission_sign)
                         : kernels::parallel::emission_matrix(state_embeddings, words,
                                                              params.emission_sign);
  return out;
}

StateSpace build_state_space(const ProposalSet &proposals, const Transcript &transcript,
                             const AlignmentParams &params, Exec exec) {
  params.validate();
  auto database = build_database(proposals, params);
  std::vector<std::size_t> selected;
  for (const auto &w : transcript.unique_words()) {
    auto hits = rank_candidates(proposals, database, dctow(w), exec);
    std::size_t keep = std::min(hits.size(), static_cast<std::size_t>(params.top_k));
    for (std::size_t h = 0; h < keep; ++h) selected.push_back(hits[h].index);
  }
  return state_space_from_indices(proposals, std::move(selected), transcript, params, exec);
}

HmmModel build_model(const StateSpace &states, const Transcript &transcript,
                     const AlignmentParams &params, Exec exec) {
  if (states.size() == 0) throw ValidationError("empty state space", "model has no states");
  HmmModel model;
  model.num_states = states.size();
  model.log_initial = -std::log(static_cast<double>(states.size()));
  model.log_emission = states.log_emission;
  if (exec == Exec::kSerial)
    kernels::serial::transition_matrices(states.boxes, params.epsilon, model.log_same_line,
                                         model.log_line_break);
  else
    kernels::parallel::transition_matrices(states.boxes, params.epsilon, model.log_same_line,
                                           model.log_line_break);
  for (const auto &p : transcript.positions()) {
    model.word_of_position.push_back(p.word_id);
    model.line_break.push_back(p.line_break);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Inference

std::vector<StateProbability> PosteriorMatrix::sparse(std::size_t k, double threshold) const {
  std::vector<StateProbability> out;
  auto row = dense_.row(k);
  for (std::size_t s = 0; s < row.size(); ++s)
    if (row[s] >= threshold) out.push_back({s, row[s]});
  return out;
}

std::size_t PosteriorMatrix::argmax(std::size_t k) const {
  auto row = dense_.row(k);
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

namespace {

ForwardBackwardTables run_forward_backward(const HmmModel &model, Exec exec) {
  return exec == Exec::kSerial ? kernels::serial::forward_backward(model)
                               : kernels::parallel::forward_backward(model);
}

ViterbiPath run_viterbi(const HmmModel &model, Exec exec) {
  return exec == Exec::kSerial ? kernels::serial::viterbi(model)
                               : kernels::parallel::viterbi(model);
}

}  // namespace

PosteriorMatrix forward_backward(const StateSpace &states, const Transcript &transcript,
                                 const AlignmentParams &params, Exec exec) {
  auto model = build_model(states, transcript, params, exec);
  return PosteriorMatrix(run_forward_backward(model, exec).posterior);
}

std::vector<std::size_t> viterbi(const StateSpace &states, const Transcript &transcript,
                                 const AlignmentParams &params, Exec exec) {
  auto model = build_model(states, transcript, params, exec);
  return run_viterbi(model, exec).states;
}

double path_log_likelihood(const HmmModel &model, std::span<const std::size_t> path) {
  if (path.size() != model.num_positions())
    throw ValidationError("bad path", "path length differs from the number of positions");
  double ll = model.log_initial;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0) ll += model.transition_into(k)(path[k - 1], path[k]);
    ll += model.emission(path[k], k);
  }
  return ll;
}

std::vector<WeakAnnotation> harvest_weak_labels(const PosteriorMatrix &posteriors,
                                                const StateSpace &states,
                                                const Transcript &transcript, double tau,
                                                HarvestMode mode) {
  std::vector<WeakAnnotation> out;
  const auto &positions = transcript.positions();
  for (std::size_t k = 0; k < posteriors.num_positions(); ++k) {
    auto emit = [&](std::size_t s, double p) {
      out.push_back({states.boxes[s], positions[k].word, p, k, states.states[s]});
    };
    if (mode == HarvestMode::kHard) {
      std::size_t s = posteriors.argmax(k);
      if (posteriors(k, s) >= tau) emit(s, posteriors(k, s));
    } else {
      for (const auto &sp : posteriors.sparse(k, tau)) emit(sp.state, sp.p);
    }
  }
  return out;
}

AlignmentResult align_page(const ProposalSet &proposals, const Transcript &transcript,
                           const AlignmentParams &params, Exec exec) {
  if (proposals.page.page_id != transcript.page_id())
    throw ValidationError("page_id mismatch", "transcript page '" + transcript.page_id() +
                                                  "' does not match proposals page '" +
                                                  proposals.page.page_id + "'");
  params.validate();
  AlignmentResult result;
  result.page = proposals.page;
  result.params = params;
  result.states = build_state_space(proposals, transcript, params, exec);
  auto model = build_model(result.states, transcript, params, exec);
  auto tables = run_forward_backward(model, exec);
  auto path = run_viterbi(model, exec);
  result.log_likelihood = tables.log_likelihood;
  result.posteriors = PosteriorMatrix(std::move(tables.posterior));
  result.viterbi_states = std::move(path.states);
  result.viterbi_log_likelihood = path.log_likelihood;
  result.annotations = harvest_weak_labels(result.posteriors, result.states, transcript,
                                           params.tau, params.harvest_mode);
  return result;
}

}  // namespace wordalign
