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

// Test-only oracles and instance generators. Nothing here calls into the
// code paths it is used to check.

#ifndef WORDALIGN_TESTS_ORACLES_HPP_
#define WORDALIGN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wordalign/alignment.hpp"
#include "wordalign/embedding.hpp"
#include "wordalign/synth.hpp"

namespace wordalign::testing {

/// DCToW by building the dense |alphabet| x L one-hot matrix and applying
/// the orthonormal DCT-II summation X[k] = s_k sum_n x[n] cos(pi (2n+1) k / 2L)
/// to every channel.
WordEmbedding dense_dctow_oracle(const std::string &word,
                                 const Alphabet &alphabet = Alphabet::default_alphabet());

/// Random lowercase/digit word of the given length.
std::string random_word(Rng &rng, std::size_t length);

struct RandomInstance {
  ProposalSet proposals;
  Transcript transcript;
  StateSpace states;
};

/// N proposals with random valid geometry and embeddings (a mix of noisy
/// word embeddings and random directions), a K-word transcript with random
/// line breaks, and a state space over every proposal.
RandomInstance random_instance(Rng &rng, std::size_t num_states, std::size_t num_positions,
                               const AlignmentParams &params = {});

/// Random valid box inside [0, w] x [0, h].
BBox random_box(Rng &rng, double w = 400.0, double h = 300.0);

inline double relative_error(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace wordalign::testing

#endif  // WORDALIGN_TESTS_ORACLES_HPP_
