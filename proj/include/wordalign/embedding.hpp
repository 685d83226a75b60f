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

#ifndef WORDALIGN_EMBEDDING_HPP_
#define WORDALIGN_EMBEDDING_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wordalign {

inline constexpr std::size_t kEmbeddingDim = 108;
inline constexpr std::size_t kDctLevels = 3;

/// Fixed 108-component word embedding. Both box embeddings produced by a
/// word-spotting model and string embeddings (DCToW) share this type.
class WordEmbedding {
 public:
  using Storage = std::array<double, kEmbeddingDim>;

  WordEmbedding() { values_.fill(0.0); }
  explicit WordEmbedding(const Storage &values) : values_(values) {}

  /// Throws ValidationError unless `values` has exactly 108 finite entries
  /// with a non-zero norm.
  static WordEmbedding from_values(std::span<const double> values);

  std::span<const double, kEmbeddingDim> values() const { return values_; }
  std::span<double, kEmbeddingDim> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double &operator[](std::size_t i) { return values_[i]; }

  double norm() const;
  WordEmbedding normalized() const;

  friend bool operator==(const WordEmbedding &, const WordEmbedding &) = default;

 private:
  Storage values_;
};

/// Ordered character set for DCToW. The default is a-z followed by 0-9.
class Alphabet {
 public:
  Alphabet();
  explicit Alphabet(std::string symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string &symbols() const { return symbols_; }
  /// Channel index of `c`, or -1 when `c` is outside the alphabet.
  int index_of(char c) const { return lookup_[static_cast<unsigned char>(c)]; }

  static const Alphabet &default_alphabet();

 private:
  std::string symbols_;
  std::array<int, 256> lookup_{};
};

/// Lowercases and drops characters outside the alphabet. Throws
/// UnembeddableToken when nothing remains.
std::string normalize_token(std::string_view raw,
                            const Alphabet &alphabet = Alphabet::default_alphabet());

/// Discrete Cosine Transform of Words: one-hot |alphabet| x L matrix,
/// orthonormal DCT-II along the length axis per character channel, first
/// three coefficients kept (zero when L < 3), flattened channel-major
/// (component = channel * 3 + coefficient).
WordEmbedding dctow(std::string_view word,
                    const Alphabet &alphabet = Alphabet::default_alphabet());

/// Throws ValidationError on a zero-norm input. Result clamped to [-1, 1].
double cosine_similarity(const WordEmbedding &x, const WordEmbedding &y);

/// Mean of (1 - cos) over paired batches.
double cosine_loss(std::span<const WordEmbedding> batch_x,
                   std::span<const WordEmbedding> batch_y);

/// Weighted combination of the scoring and embedding losses.
double total_loss(double score_loss, double embedding_loss);

}  // namespace wordalign

#endif  // WORDALIGN_EMBEDDING_HPP_
