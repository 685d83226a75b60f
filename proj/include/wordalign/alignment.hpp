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

#ifndef WORDALIGN_ALIGNMENT_HPP_
#define WORDALIGN_ALIGNMENT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wordalign/embedding.hpp"
#include "wordalign/geometry.hpp"
#include "wordalign/hmm.hpp"
#include "wordalign/params.hpp"

namespace wordalign {

// ---------------------------------------------------------------------------
// Inputs

struct TranscriptPosition {
  std::string token;        // as written in the transcript
  std::string word;         // normalized form, the emitted symbol
  std::size_t word_id = 0;  // index into Transcript::unique_words()
  std::size_t line = 0;
  bool line_break = false;  // true iff the previous position is on another line
};

/// Line-structured transcript of one page, flattened to positions in
/// reading order. Repeated words share one symbol.
class Transcript {
 public:
  Transcript() = default;
  /// Throws ValidationError on an empty transcript and UnembeddableToken
  /// when a token normalizes to nothing.
  Transcript(std::string page_id, std::vector<std::vector<std::string>> lines,
             const Alphabet &alphabet = Alphabet::default_alphabet());

  const std::string &page_id() const { return page_id_; }
  const std::vector<std::vector<std::string>> &lines() const { return lines_; }
  const std::vector<TranscriptPosition> &positions() const { return positions_; }
  const std::vector<std::string> &unique_words() const { return unique_words_; }
  std::size_t size() const { return positions_.size(); }

 private:
  std::string page_id_;
  std::vector<std::vector<std::string>> lines_;
  std::vector<TranscriptPosition> positions_;
  std::vector<std::string> unique_words_;
};

struct Proposal {
  BBox box;
  double score = 0.0;  // wordness, in [0, 1]
  WordEmbedding embedding;
};

struct ProposalSet {
  Page page;
  std::vector<Proposal> entries;

  /// Clamps boxes onto the page, then rejects degenerate boxes, scores
  /// outside [0, 1] and zero-norm embeddings.
  void validate();
};

// ---------------------------------------------------------------------------
// Likelihoods

/// exp(-(cos - 1)^2 * 108 / 2); the positive sign flips the exponent.
double emission_likelihood(double cosine, ExponentSign sign = ExponentSign::kNegative);
double emission_likelihood(const WordEmbedding &x, const WordEmbedding &y,
                           ExponentSign sign = ExponentSign::kNegative);
double log_emission_likelihood(double cosine, ExponentSign sign = ExponentSign::kNegative);

/// Reading-order rule. Same line: 1 when box j ends right of where box i
/// starts and the top of j is within one line height of the top of i.
/// Line break: 1 when j extends below the top of i. Otherwise epsilon.
double transition_rule(const BBox &i, const BBox &j, bool line_break, double epsilon);

/// Overlap factor times, on the same line, a gap factor comparing the summed
/// areas against the area of the bounding rectangle.
double transition_penalty(const BBox &i, const BBox &j, bool line_break, double epsilon);

double transition_likelihood(const BBox &i, const BBox &j, bool line_break, double epsilon);

// ---------------------------------------------------------------------------
// State space and inference

struct StateSpace {
  std::vector<std::size_t> states;  // proposal indices, ascending, unique
  std::vector<BBox> boxes;          // box of each state
  Matrix log_emission;              // states x unique transcript words

  std::size_t size() const { return states.size(); }
};

/// Ranks the filtered proposals for every unique transcript word, keeps the
/// top_k of each and merges them. Throws ValidationError("empty state
/// space") when nothing survives filtering.
StateSpace build_state_space(const ProposalSet &proposals, const Transcript &transcript,
                             const AlignmentParams &params, Exec exec = Exec::kParallel);

/// State space over an explicit list of proposal indices, skipping retrieval.
StateSpace state_space_from_indices(const ProposalSet &proposals,
                                    std::vector<std::size_t> indices,
                                    const Transcript &transcript, const AlignmentParams &params,
                                    Exec exec = Exec::kParallel);

HmmModel build_model(const StateSpace &states, const Transcript &transcript,
                     const AlignmentParams &params, Exec exec = Exec::kParallel);

struct StateProbability {
  std::size_t state = 0;  // index into StateSpace::states
  double p = 0.0;
};

/// Posterior over states per position. Dense internally; `sparse` drops
/// entries below the threshold without renormalizing.
class PosteriorMatrix {
 public:
  static constexpr double kSparseThreshold = 1e-6;

  PosteriorMatrix() = default;
  explicit PosteriorMatrix(Matrix dense) : dense_(std::move(dense)) {}

  std::size_t num_positions() const { return dense_.rows(); }
  std::size_t num_states() const { return dense_.cols(); }
  double operator()(std::size_t k, std::size_t state) const { return dense_(k, state); }
  const Matrix &dense() const { return dense_; }

  /// Entries >= threshold at position k, ascending by state.
  std::vector<StateProbability> sparse(std::size_t k,
                                       double threshold = kSparseThreshold) const;
  /// Highest-probability state at k; lowest index on ties.
  std::size_t argmax(std::size_t k) const;

 private:
  Matrix dense_;
};

PosteriorMatrix forward_backward(const StateSpace &states, const Transcript &transcript,
                                 const AlignmentParams &params, Exec exec = Exec::kParallel);

/// Most likely state sequence (indices into StateSpace::states).
std::vector<std::size_t> viterbi(const StateSpace &states, const Transcript &transcript,
                                 const AlignmentParams &params, Exec exec = Exec::kParallel);

/// Joint log-likelihood of one state path under the model.
double path_log_likelihood(const HmmModel &model, std::span<const std::size_t> path);

struct WeakAnnotation {
  BBox box;
  std::string label;
  double confidence = 0.0;
  std::size_t position = 0;        // 0-based transcript position
  std::size_t proposal_index = 0;
};

std::vector<WeakAnnotation> harvest_weak_labels(const PosteriorMatrix &posteriors,
                                                const StateSpace &states,
                                                const Transcript &transcript, double tau,
                                                HarvestMode mode);

struct AlignmentResult {
  Page page;
  AlignmentParams params;
  StateSpace states;
  PosteriorMatrix posteriors;
  std::vector<std::size_t> viterbi_states;     // indices into states.states
  double viterbi_log_likelihood = 0.0;
  double log_likelihood = 0.0;                 // total, from forward-backward
  std::vector<WeakAnnotation> annotations;

  std::size_t viterbi_proposal(std::size_t k) const {
    return states.states[viterbi_states[k]];
  }
  std::size_t posterior_proposal(std::size_t k) const {
    return states.states[posteriors.argmax(k)];
  }
};

/// Throws ValidationError("page_id mismatch") when the inputs disagree.
AlignmentResult align_page(const ProposalSet &proposals, const Transcript &transcript,
                           const AlignmentParams &params, Exec exec = Exec::kParallel);

}  // namespace wordalign

#endif  // WORDALIGN_ALIGNMENT_HPP_
