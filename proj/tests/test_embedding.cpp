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

#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "wordalign/embedding.hpp"
#include "wordalign/error.hpp"
#include "wordalign/synth.hpp"

using namespace wordalign;

TEST_CASE("normalize_token") {
  CHECK(normalize_token("George") == "george");
  CHECK(normalize_token("1755.") == "1755");
  CHECK(normalize_token("Mr.O'Neil") == "mroneil");
  try {
    normalize_token("&");
    FAIL("expected UnembeddableToken");
  } catch (const UnembeddableToken &e) {
    CHECK(e.token() == "&");
    CHECK(e.code() == "unembeddable token");
  }
}

TEST_CASE("dctow matches the dense DCT-II summation") {
  auto a = dctow("cat");
  auto b = testing::dense_dctow_oracle("cat");
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);

  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto w = testing::random_word(rng, static_cast<std::size_t>(rng.uniform_int(1, 14)));
    auto x = dctow(w);
    auto y = testing::dense_dctow_oracle(w);
    double worst = 0.0;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("dctow layout") {
  CHECK(dctow("george").values().size() == 108);
  CHECK(dctow("a") == dctow("a"));
  CHECK(cosine_similarity(dctow("washington"), dctow("washington")) == doctest::Approx(1.0));

  // single character: only the DC term survives
  auto a = dctow("a");
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == 0.0);
  CHECK(a[2] == 0.0);

  // two characters: two coefficients, third padded with zero
  auto ab = dctow("ab");
  CHECK(ab[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(ab[1] == doctest::Approx(std::cos(M_PI / 4.0)));
  CHECK(ab[2] == 0.0);
  CHECK(ab[3] == doctest::Approx(std::sqrt(0.5)));
  CHECK(ab[4] == doctest::Approx(-std::cos(M_PI / 4.0)));

  CHECK_THROWS_AS(dctow(""), UnembeddableToken);
  CHECK_THROWS_AS(dctow("Cat"), UnembeddableToken);  // callers normalize first
}

TEST_CASE("words differing in one character are not colinear") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto w = testing::random_word(rng, static_cast<std::size_t>(rng.uniform_int(1, 10)));
    auto v = w;
    auto pos = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(w.size()) - 1));
    char c;
    do {
      c = testing::random_word(rng, 1)[0];
    } while (c == w[pos]);
    v[pos] = c;
    CHECK(cosine_similarity(dctow(w), dctow(v)) < 1.0);
  }
}

TEST_CASE("default vocabulary has no DCToW collisions") {
  const auto &vocab = default_vocabulary();
  std::set<std::string> unique(vocab.begin(), vocab.end());
  CHECK(unique.size() == vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i)
    for (std::size_t j = i + 1; j < vocab.size(); ++j)
      CHECK_MESSAGE(cosine_similarity(dctow(vocab[i]), dctow(vocab[j])) < 1.0 - 1e-9,
                    vocab[i] << " vs " << vocab[j]);
}

TEST_CASE("cosine_similarity") {
  WordEmbedding x;
  WordEmbedding y;
  x[0] = 1.0;
  y[1] = 2.0;
  CHECK(cosine_similarity(x, x) == doctest::Approx(1.0));
  CHECK(cosine_similarity(x, y) == 0.0);
  WordEmbedding x2 = x;
  x2[0] = 2.0;
  CHECK(cosine_similarity(x, x2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cosine_similarity(x, WordEmbedding{}), ValidationError);

  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_unit_embedding(rng);
    auto b = random_unit_embedding(rng);
    WordEmbedding scaled = b;
    double alpha = rng.uniform(0.01, 100.0);
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) scaled[i] *= alpha;
    CHECK(cosine_similarity(a, scaled) == doctest::Approx(cosine_similarity(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("from_values rejects bad embeddings") {
  std::vector<double> short_vec(107, 1.0);
  CHECK_THROWS_AS(WordEmbedding::from_values(short_vec), ValidationError);
  std::vector<double> zeros(108, 0.0);
  CHECK_THROWS_AS(WordEmbedding::from_values(zeros), ValidationError);
  std::vector<double> ok(108, 0.5);
  CHECK(WordEmbedding::from_values(ok)[107] == 0.5);
}

TEST_CASE("cosine_loss") {
  WordEmbedding e0;
  WordEmbedding e1;
  e0[0] = 1.0;
  e1[1] = 1.0;
  std::vector<WordEmbedding> same = {e0, e1};
  CHECK(cosine_loss(same, same) == doctest::Approx(0.0));
  std::vector<WordEmbedding> a = {e0};
  std::vector<WordEmbedding> b = {e1};
  CHECK(cosine_loss(a, b) == doctest::Approx(1.0));
  std::vector<WordEmbedding> xs = {e0, e0};
  std::vector<WordEmbedding> ys = {e0, e1};
  CHECK(cosine_loss(xs, ys) == doctest::Approx(0.5));
  CHECK_THROWS_AS(cosine_loss(xs, a), ValidationError);
  CHECK_THROWS_AS(cosine_loss(std::vector<WordEmbedding>{}, std::vector<WordEmbedding>{}),
                  ValidationError);

  Rng rng(9);
  std::vector<WordEmbedding> rx, ry;
  for (int i = 0; i < 50; ++i) {
    rx.push_back(random_unit_embedding(rng));
    ry.push_back(random_unit_embedding(rng));
  }
  double loss = cosine_loss(rx, ry);
  CHECK(loss >= 0.0);
  CHECK(loss <= 2.0);
}

TEST_CASE("total_loss") {
  CHECK(total_loss(0.0, 0.0) == 0.0);
  CHECK(total_loss(1.0, 1.0) == doctest::Approx(3.1).epsilon(1e-15));
  CHECK(total_loss(0.2, 0.5) == doctest::Approx(1.52).epsilon(1e-15));
}
