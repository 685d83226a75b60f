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

#include "wordalign/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wordalign/error.hpp"

namespace wordalign {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

double Rng::normal() {
  double u1 = uniform01();
  double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SynthConfig::validate() const {
  auto check = [](bool ok, const std::string &what) {
    if (!ok) throw ValidationError("invalid synth config", what);
  };
  auto range_ok = [](const Range &r) { return r.lo > 0.0 && r.lo <= r.hi; };
  check(lines >= 1, "lines must be positive");
  check(words_per_line_min >= 1 && words_per_line_min <= words_per_line_max,
        "words per line range must be non-empty and positive");
  check(range_ok(char_width), "char_width range");
  check(box_padding.lo >= 0.0 && box_padding.lo <= box_padding.hi, "box_padding range");
  check(range_ok(box_height), "box_height range");
  check(range_ok(gap), "gap range");
  check(range_ok(line_spacing), "line_spacing range");
  check(baseline_jitter >= 0.0 && baseline_jitter < box_height.lo / 2.0, "baseline_jitter");
  check(margin >= 0.0, "margin");
  check(noise_sigma >= 0.0, "noise_sigma must be non-negative");
  check(decoy_ratio >= 0.0, "decoy_ratio must be non-negative");
  check(true_score.lo >= 0.0 && true_score.lo <= true_score.hi && true_score.hi <= 1.0,
        "true_score range");
  check(decoy_score.lo >= 0.0 && decoy_score.lo <= decoy_score.hi && decoy_score.hi <= 1.0,
        "decoy_score range");
}

const std::vector<std::string> &default_vocabulary() {
  static const std::vector<std::string> words = {
      "the", "of", "and", "to", "in", "that", "it", "with", "as", "for", "his", "was",
      "on", "be", "at", "by", "this", "had", "not", "are", "but", "from", "or", "have",
      "an", "they", "which", "one", "you", "were", "her", "all", "she", "there", "would",
      "their", "we", "him", "been", "has", "when", "who", "will", "more", "no", "if", "out",
      "so", "said", "what", "up", "its", "about", "into", "than", "them", "can", "only",
      "other", "new", "some", "could", "time", "these", "two", "may", "then", "do", "first",
      "any", "my", "now", "such", "like", "our", "over", "man", "me", "even", "most", "made",
      "after", "also", "did", "many", "before", "must", "through", "back", "years", "where",
      "much", "your", "way", "well", "down", "should", "because", "each", "just", "those",
      "people", "how", "too", "little", "state", "good", "very", "make", "world", "still",
      "own", "see", "men", "work", "long", "get", "here", "between", "both", "life", "being",
      "under", "never", "day", "same", "another", "know", "while", "last", "might", "us",
      "great", "old", "year", "off", "come", "since", "against", "go", "came", "right",
      "used", "take", "three", "letter", "sir", "general", "fort", "orders", "regiment",
      "colonel", "captain", "company", "governor", "virginia", "frontier", "soldiers",
      "officers", "provisions", "ammunition", "march", "winchester", "assembly", "council",
      "instructions", "honour", "servant", "obedient", "humble", "majesty", "country",
      "enemy", "indians", "french", "troops", "service", "command", "recruits", "arms",
      "powder", "magazine", "wagons", "horses", "money", "pay", "clothing", "barracks",
      "garrison", "detachment", "expedition", "commission", "express", "intelligence",
      "account", "board", "received", "directed", "desire", "receive", "return", "send",
      "sent", "inform", "immediately", "possible", "necessary", "several", "number",
      "marriage", "daughter", "widow", "parish", "church", "witness", "book", "page", "line",
      "record", "left", "hand", "house", "town", "river", "road", "bridge", "mill", "field",
      "1755", "1756", "1757", "1617", "1618", "1619", "20", "100", "monday", "tuesday",
      "friday", "sunday", "april", "august", "october", "december"};
  return words;
}

WordEmbedding perturb_embedding(const WordEmbedding &clean, double sigma, Rng &rng) {
  WordEmbedding unit = clean.normalized();
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) unit[i] += sigma * rng.normal();
  return unit.normalized();
}

WordEmbedding random_unit_embedding(Rng &rng) {
  WordEmbedding e;
  do {
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) e[i] = rng.normal();
  } while (!(e.norm() > 0.0));
  return e.normalized();
}

namespace {

const std::string &pick(const std::vector<std::string> &vocab, Rng &rng) {
  return vocab[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1))];
}

BBox random_word_box(const SynthConfig &c, const Page &page, Rng &rng) {
  double w = static_cast<double>(rng.uniform_int(2, 9)) * rng.uniform(c.char_width.lo, c.char_width.hi);
  double h = rng.uniform(c.box_height.lo, c.box_height.hi);
  w = std::min(w, page.width * 0.5);
  h = std::min(h, page.height * 0.5);
  double l = rng.uniform(0.0, page.width - w);
  double t = rng.uniform(0.0, page.height - h);
  return BBox{l, l + w, t, t + h};
}

}  // namespace

SynthPage generate_page(const SynthConfig &config) {
  config.validate();
  const auto &vocab = config.vocabulary.empty() ? default_vocabulary() : config.vocabulary;
  if (vocab.empty()) throw ValidationError("invalid synth config", "vocabulary is empty");
  std::vector<WordEmbedding> vocab_embeddings;
  vocab_embeddings.reserve(vocab.size());
  for (const auto &w : vocab) vocab_embeddings.push_back(dctow(normalize_token(w)));

  Rng rng(config.seed);
  SynthPage out;
  out.page.page_id = config.page_id.empty() ? "page-" + std::to_string(config.seed) : config.page_id;

  // Layout: left to right within a line, lines stacked downward.
  std::vector<std::vector<std::string>> lines;
  std::vector<std::size_t> word_vocab;
  std::vector<std::size_t> line_of;
  double y = config.margin + config.baseline_jitter;
  double max_right = 0.0;
  for (int li = 0; li < config.lines; ++li) {
    int count = static_cast<int>(rng.uniform_int(config.words_per_line_min, config.words_per_line_max));
    double x = config.margin + rng.uniform(0.0, 20.0);
    double line_bottom = y;
    std::vector<std::string> tokens;
    for (int wi = 0; wi < count; ++wi) {
      auto vi = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1));
      const std::string label = normalize_token(vocab[vi]);
      double w = static_cast<double>(label.size()) * rng.uniform(config.char_width.lo, config.char_width.hi) +
                 rng.uniform(config.box_padding.lo, config.box_padding.hi);
      double h = rng.uniform(config.box_height.lo, config.box_height.hi);
      double t = y + rng.uniform(-config.baseline_jitter, config.baseline_jitter);
      BBox box{x, x + w, t, t + h};
      out.truth.boxes.push_back({box, label});
      word_vocab.push_back(vi);
      line_of.push_back(static_cast<std::size_t>(li));
      tokens.push_back(label);
      x += w + rng.uniform(config.gap.lo, config.gap.hi);
      line_bottom = std::max(line_bottom, box.b);
      max_right = std::max(max_right, box.r);
    }
    lines.push_back(std::move(tokens));
    y = line_bottom + rng.uniform(config.line_spacing.lo, config.line_spacing.hi) +
        config.baseline_jitter;
  }
  out.page.width = std::ceil(max_right + config.margin);
  out.page.height = std::ceil(y + config.margin);
  out.truth.page_id = out.page.page_id;
  out.truth.width = out.page.width;
  out.truth.height = out.page.height;
  out.transcript = Transcript(out.page.page_id, lines);

  std::vector<Proposal> proposals;
  std::vector<long> owner;  // position index for true boxes, -1 for decoys
  const std::size_t num_true = out.truth.boxes.size();
  for (std::size_t k = 0; k < num_true; ++k) {
    Proposal p;
    p.box = out.truth.boxes[k].box;
    p.score = rng.uniform(config.true_score.lo, config.true_score.hi);
    p.embedding = config.noise_sigma > 0.0
                      ? perturb_embedding(vocab_embeddings[word_vocab[k]], config.noise_sigma, rng)
                      : vocab_embeddings[word_vocab[k]].normalized();
    proposals.push_back(p);
    owner.push_back(static_cast<long>(k));
  }

  const double whole = std::floor(config.decoy_ratio);
  const double frac = config.decoy_ratio - whole;
  for (std::size_t k = 0; k < num_true; ++k) {
    int count = static_cast<int>(whole) + (frac > 0.0 && rng.uniform01() < frac ? 1 : 0);
    const BBox &src = out.truth.boxes[k].box;
    for (int d = 0; d < count; ++d) {
      auto kind = static_cast<DecoyKind>(rng.uniform_int(0, 3));
      BBox box = src;
      switch (kind) {
        case DecoyKind::kShifted: {
          double dx = rng.uniform(0.25, 0.75) * src.width() * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
          double dy = rng.uniform(-0.25, 0.25) * src.height();
          box = BBox{src.l + dx, src.r + dx, src.t + dy, src.b + dy};
          break;
        }
        case DecoyKind::kMerged: {
          bool has_next = k + 1 < num_true && line_of[k + 1] == line_of[k];
          const BBox &other = has_next ? out.truth.boxes[k + 1].box
                                       : (k > 0 && line_of[k - 1] == line_of[k] ? out.truth.boxes[k - 1].box : src);
          box = BBox{std::min(src.l, other.l), std::max(src.r, other.r), std::min(src.t, other.t),
                     std::max(src.b, other.b)};
          if (box == src) box = BBox{src.l, src.r + src.width() * 0.6, src.t, src.b};
          break;
        }
        case DecoyKind::kSplit: {
          double mid = 0.5 * (src.l + src.r);
          box = rng.uniform01() < 0.5 ? BBox{src.l, mid, src.t, src.b} : BBox{mid, src.r, src.t, src.b};
          break;
        }
        case DecoyKind::kRandom:
          box = random_word_box(config, out.page, rng);
          break;
      }
      box = clamp_to_page(box, out.page);
      if (!box.valid()) box = random_word_box(config, out.page, rng);
      Proposal p;
      p.box = box;
      p.score = rng.uniform(config.decoy_score.lo, config.decoy_score.hi);
      if (rng.uniform01() < 0.5) {
        const auto &clean = vocab_embeddings[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(vocab.size()) - 1))];
        p.embedding = config.noise_sigma > 0.0 ? perturb_embedding(clean, config.noise_sigma, rng)
                                               : clean.normalized();
      } else {
        p.embedding = random_unit_embedding(rng);
      }
      proposals.push_back(p);
      owner.push_back(-1);
    }
  }

  // Fisher-Yates with the documented generator so indices carry no signal.
  std::vector<std::size_t> order(proposals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(order[i - 1], order[j]);
  }
  out.proposals.page = out.page;
  out.true_proposal.assign(num_true, 0);
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    std::size_t src = order[slot];
    out.proposals.entries.push_back(proposals[src]);
    if (owner[src] >= 0) out.true_proposal[static_cast<std::size_t>(owner[src])] = slot;
  }
  out.proposals.validate();
  return out;
}

double mean_true_cosine(double sigma, const std::vector<std::string> &vocabulary,
                        std::size_t samples, std::uint64_t seed) {
  if (vocabulary.empty() || samples == 0)
    throw ValidationError("invalid calibration", "need a vocabulary and at least one sample");
  Rng rng(seed);
  double sum = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto clean = dctow(normalize_token(pick(vocabulary, rng)));
    sum += cosine_similarity(clean, perturb_embedding(clean, sigma, rng));
  }
  return sum / static_cast<double>(samples);
}

double calibrate_noise_sigma(double target, const std::vector<std::string> &vocabulary,
                             std::size_t samples, std::uint64_t seed) {
  if (!(target > 0.0 && target < 1.0))
    throw ValidationError("invalid calibration", "target cosine must lie in (0, 1)");
  // Same seed at every sigma gives common random numbers, so the mean is
  // monotone in sigma and bisection is well defined.
  double lo = 0.0;
  double hi = 1.0;
  while (mean_true_cosine(hi, vocabulary, samples, seed) > target) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mean_true_cosine(mid, vocabulary, samples, seed) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Oracles

namespace {

std::size_t checked_path_count(std::size_t n, std::size_t k) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > kMaxEnumeratedPaths / std::max<std::size_t>(n, 1))
      throw ValidationError("instance too large", "N^K exceeds the enumeration limit");
    total *= n;
  }
  return total;
}

/// Advances `path` as an odometer with the last position least significant.
void next_path(std::vector<std::size_t> &path, std::size_t n) {
  for (std::size_t k = path.size(); k-- > 0;) {
    if (++path[k] < n) return;
    path[k] = 0;
  }
}

double joint_log_likelihood(const StateSpace &states, const Transcript &transcript,
                            const AlignmentParams &params, const std::vector<std::size_t> &path) {
  const auto &positions = transcript.positions();
  double ll = -std::log(static_cast<double>(states.size()));
  for (std::size_t k = 0; k < path.size(); ++k) {
    ll += states.log_emission(path[k], positions[k].word_id);
    if (k > 0)
      ll += std::log(transition_likelihood(states.boxes[path[k - 1]], states.boxes[path[k]],
                                           positions[k].line_break, params.epsilon));
  }
  return ll;
}

}  // namespace

PosteriorMatrix brute_force_posteriors(const StateSpace &states, const Transcript &transcript,
                                       const AlignmentParams &params) {
  const std::size_t n = states.size();
  const std::size_t len = transcript.size();
  const std::size_t total = checked_path_count(n, len);

  std::vector<double> joints(total);
  std::vector<std::size_t> path(len, 0);
  for (std::size_t p = 0; p < total; ++p, next_path(path, n))
    joints[p] = joint_log_likelihood(states, transcript, params, path);
  double peak = *std::max_element(joints.begin(), joints.end());

  Matrix marg(len, n, 0.0);
  double z = 0.0;
  std::fill(path.begin(), path.end(), 0);
  for (std::size_t p = 0; p < total; ++p, next_path(path, n)) {
    double w = std::exp(joints[p] - peak);
    z += w;
    for (std::size_t k = 0; k < len; ++k) marg(k, path[k]) += w;
  }
  for (std::size_t k = 0; k < len; ++k)
    for (std::size_t s = 0; s < n; ++s) marg(k, s) /= z;
  return PosteriorMatrix(std::move(marg));
}

BruteForcePath brute_force_viterbi(const StateSpace &states, const Transcript &transcript,
                                   const AlignmentParams &params) {
  const std::size_t n = states.size();
  const std::size_t len = transcript.size();
  const std::size_t total = checked_path_count(n, len);
  BruteForcePath best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> path(len, 0);
  for (std::size_t p = 0; p < total; ++p, next_path(path, n)) {
    double ll = joint_log_likelihood(states, transcript, params, path);
    if (ll > best.log_likelihood) {
      best.log_likelihood = ll;
      best.states = path;
    }
  }
  return best;
}

}  // namespace wordalign
