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

#ifndef WORDALIGN_SYNTH_HPP_
#define WORDALIGN_SYNTH_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wordalign/alignment.hpp"
#include "wordalign/embedding.hpp"
#include "wordalign/retrieval.hpp"

namespace wordalign {

/// Seedable generator with a fully specified output sequence: the standard
/// 64-bit Mersenne Twister, with the derived distributions written out here
/// (std:: distributions are implementation-defined).
///   uniform01   = (next() >> 11) * 2^-53
///   uniform_int = lo + next() % (hi - lo + 1)
///   normal      = Box-Muller, sqrt(-2 ln(1 - u1)) * cos(2 pi u2), no caching
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Inclusive on both ends.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double normal();

 private:
  std::mt19937_64 engine_;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Default additive-noise scale; calibrated so that the mean cosine between a
/// word's DCToW and its noisy copy is 0.80 over the default vocabulary.
inline constexpr double kDefaultNoiseSigma = 0.0722;

struct SynthConfig {
  std::uint64_t seed = 1;
  std::string page_id;             // empty: "page-<seed>"
  int lines = 12;
  int words_per_line_min = 7;
  int words_per_line_max = 10;
  Range char_width{11.0, 17.0};    // box width = characters * char_width + padding
  Range box_padding{6.0, 14.0};
  Range box_height{30.0, 42.0};
  Range gap{10.0, 30.0};
  Range line_spacing{14.0, 26.0};
  double baseline_jitter = 3.0;
  double margin = 40.0;
  double noise_sigma = kDefaultNoiseSigma;
  double decoy_ratio = 3.0;        // decoys per true box
  Range true_score{0.7, 1.0};
  Range decoy_score{0.05, 0.65};
  std::vector<std::string> vocabulary;  // empty: default_vocabulary()

  /// Throws ValidationError on empty or inverted ranges.
  void validate() const;
};

enum class DecoyKind { kShifted, kMerged, kSplit, kRandom };

struct SynthPage {
  Page page;
  PageTruth truth;                       // reading order
  Transcript transcript;
  ProposalSet proposals;                 // true boxes and decoys, shuffled
  std::vector<std::size_t> true_proposal;  // proposal index of each position
};

const std::vector<std::string> &default_vocabulary();

/// Unit-normalized dctow(word) plus isotropic Gaussian noise, renormalized.
WordEmbedding perturb_embedding(const WordEmbedding &clean, double sigma, Rng &rng);
WordEmbedding random_unit_embedding(Rng &rng);

SynthPage generate_page(const SynthConfig &config);

/// Monte Carlo mean of cos(dctow(w), perturbed) over random vocabulary words.
double mean_true_cosine(double sigma, const std::vector<std::string> &vocabulary,
                        std::size_t samples, std::uint64_t seed);

/// Bisection on sigma with common random numbers so that the Monte Carlo
/// mean true-pair cosine hits `target`.
double calibrate_noise_sigma(double target, const std::vector<std::string> &vocabulary,
                             std::size_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exhaustive oracles for the dynamic programs. They enumerate every state
// sequence and evaluate transitions straight from the boxes.

inline constexpr std::size_t kMaxEnumeratedPaths = 50000;

PosteriorMatrix brute_force_posteriors(const StateSpace &states, const Transcript &transcript,
                                       const AlignmentParams &params);

struct BruteForcePath {
  std::vector<std::size_t> states;
  double log_likelihood = 0.0;
};

/// Lexicographically first path among the maxima.
BruteForcePath brute_force_viterbi(const StateSpace &states, const Transcript &transcript,
                                   const AlignmentParams &params);

}  // namespace wordalign

#endif  // WORDALIGN_SYNTH_HPP_
