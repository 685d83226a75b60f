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

#ifndef WORDALIGN_HMM_HPP_
#define WORDALIGN_HMM_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "wordalign/embedding.hpp"
#include "wordalign/geometry.hpp"
#include "wordalign/params.hpp"

namespace wordalign {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double> &data() const { return data_; }

  friend bool operator==(const Matrix &, const Matrix &) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Everything the dynamic programs need, all in the log domain. Position k
/// emits word `word_of_position[k]`; the transition into position k uses
/// the line-break matrix iff `line_break[k]`.
struct HmmModel {
  std::size_t num_states = 0;
  double log_initial = 0.0;               // uniform: -log(num_states)
  Matrix log_emission;                    // num_states x unique words
  Matrix log_same_line;                   // num_states x num_states, [from][to]
  Matrix log_line_break;                  // num_states x num_states, [from][to]
  std::vector<std::size_t> word_of_position;
  std::vector<bool> line_break;

  std::size_t num_positions() const { return word_of_position.size(); }
  const Matrix &transition_into(std::size_t k) const {
    return line_break[k] ? log_line_break : log_same_line;
  }
  double emission(std::size_t state, std::size_t k) const {
    return log_emission(state, word_of_position[k]);
  }
};

/// Forward-backward output. `log_alpha` rows are normalized per position;
/// `log_likelihood` is the log of the total sequence likelihood.
struct ForwardBackwardTables {
  Matrix log_alpha;      // positions x states
  Matrix log_beta;       // positions x states, scaled by the forward constants
  Matrix posterior;      // positions x states, rows sum to 1
  double log_likelihood = 0.0;
};

struct ViterbiPath {
  std::vector<std::size_t> states;  // one state per position
  double log_likelihood = 0.0;      // joint log-likelihood of `states`
};

/// log(sum(exp(values))); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

// The compute kernels. Both namespaces expose the same functions and
// produce bit-identical results; `serial` is the reference, `parallel`
// spreads independent rows/columns across OpenMP threads while keeping
// each reduction in the serial order.
namespace kernels {

namespace serial {
Matrix emission_matrix(std::span<const WordEmbedding> states,
                       std::span<const WordEmbedding> words, ExponentSign sign);
void transition_matrices(std::span<const BBox> boxes, double epsilon, Matrix &same_line,
                         Matrix &line_break);
ForwardBackwardTables forward_backward(const HmmModel &model);
ViterbiPath viterbi(const HmmModel &model);
std::vector<double> cosine_scores(std::span<const WordEmbedding> database,
                                  const WordEmbedding &query);
}  // namespace serial

namespace parallel {
Matrix emission_matrix(std::span<const WordEmbedding> states,
                       std::span<const WordEmbedding> words, ExponentSign sign);
void transition_matrices(std::span<const BBox> boxes, double epsilon, Matrix &same_line,
                         Matrix &line_break);
ForwardBackwardTables forward_backward(const HmmModel &model);
ViterbiPath viterbi(const HmmModel &model);
std::vector<double> cosine_scores(std::span<const WordEmbedding> database,
                                  const WordEmbedding &query);
}  // namespace parallel

}  // namespace kernels

}  // namespace wordalign

#endif  // WORDALIGN_HMM_HPP_
