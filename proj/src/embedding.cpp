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

#include "wordalign/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

#include "wordalign/error.hpp"

namespace wordalign {

WordEmbedding WordEmbedding::from_values(std::span<const double> values) {
  if (values.size() != kEmbeddingDim)
    throw ValidationError("bad embedding", "embedding has " + std::to_string(values.size()) +
                                               " components, expected 108");
  Storage s;
  for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
    if (!std::isfinite(values[i]))
      throw ValidationError("bad embedding", "embedding component is not finite");
    s[i] = values[i];
  }
  WordEmbedding e(s);
  if (!(e.norm() > 0.0)) throw ValidationError("bad embedding", "embedding has zero norm");
  return e;
}

double WordEmbedding::norm() const {
  return std::sqrt(std::inner_product(values_.begin(), values_.end(), values_.begin(), 0.0));
}

WordEmbedding WordEmbedding::normalized() const {
  double n = norm();
  if (!(n > 0.0)) throw ValidationError("bad embedding", "cannot normalize a zero vector");
  WordEmbedding out = *this;
  for (auto &v : out.values_) v /= n;
  return out;
}

Alphabet::Alphabet() : Alphabet("abcdefghijklmnopqrstuvwxyz0123456789") {}

Alphabet::Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
  lookup_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    lookup_[static_cast<unsigned char>(symbols_[i])] = static_cast<int>(i);
  if (symbols_.size() * kDctLevels != kEmbeddingDim)
    throw ValidationError("bad alphabet", "alphabet size times 3 must equal 108");
}

const Alphabet &Alphabet::default_alphabet() {
  static const Alphabet alphabet;
  return alphabet;
}

std::string normalize_token(std::string_view raw, const Alphabet &alphabet) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (alphabet.index_of(lower) >= 0) out.push_back(lower);
  }
  if (out.empty()) throw UnembeddableToken(std::string(raw));
  return out;
}

WordEmbedding dctow(std::string_view word, const Alphabet &alphabet) {
  if (word.empty()) throw UnembeddableToken(std::string(word));
  const std::size_t length = word.size();
  const double n = static_cast<double>(length);
  const std::size_t levels = std::min(kDctLevels, length);

  // The one-hot matrix has a single 1 per column, so each character adds its
  // own DCT-II basis column to its channel.
  WordEmbedding out;
  for (std::size_t pos = 0; pos < length; ++pos) {
    int channel = alphabet.index_of(word[pos]);
    if (channel < 0) throw UnembeddableToken(std::string(word));
    for (std::size_t k = 0; k < levels; ++k) {
      double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
      out[static_cast<std::size_t>(channel) * kDctLevels + k] +=
          scale * std::cos(std::numbers::pi * (static_cast<double>(pos) + 0.5) *
                           static_cast<double>(k) / n);
    }
  }
  return out;
}

double cosine_similarity(const WordEmbedding &x, const WordEmbedding &y) {
  double nx = x.norm();
  double ny = y.norm();
  if (!(nx > 0.0) || !(ny > 0.0))
    throw ValidationError("bad embedding", "cosine similarity of a zero-norm embedding");
  auto xs = x.values();
  auto ys = y.values();
  double dot = std::inner_product(xs.begin(), xs.end(), ys.begin(), 0.0);
  return std::clamp(dot / (nx * ny), -1.0, 1.0);
}

double cosine_loss(std::span<const WordEmbedding> batch_x,
                   std::span<const WordEmbedding> batch_y) {
  if (batch_x.size() != batch_y.size())
    throw ValidationError("batch mismatch", "cosine loss batches differ in length");
  if (batch_x.empty()) throw ValidationError("empty batch", "cosine loss of an empty batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < batch_x.size(); ++i)
    sum += 1.0 - cosine_similarity(batch_x[i], batch_y[i]);
  return sum / static_cast<double>(batch_x.size());
}

double total_loss(double score_loss, double embedding_loss) {
  return 0.1 * score_loss + 3.0 * embedding_loss;
}

}  // namespace wordalign
