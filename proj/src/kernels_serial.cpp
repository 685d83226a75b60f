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

// Serial reference kernels.

#include <cmath>

#include "kernel_common.hpp"
#include "wordalign/error.hpp"

namespace wordalign {

double log_sum_exp(std::span<const double> values) {
  double m = kernels::detail::kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kernels::detail::kNegInf) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

namespace kernels::serial {

using detail::kNegInf;

Matrix emission_matrix(std::span<const WordEmbedding> states,
                       std::span<const WordEmbedding> words, ExponentSign sign) {
  Matrix out(states.size(), words.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t w = 0; w < words.size(); ++w)
      out(i, w) = log_emission_likelihood(cosine_similarity(states[i], words[w]), sign);
  return out;
}

void transition_matrices(std::span<const BBox> boxes, double epsilon, Matrix &same_line,
                         Matrix &line_break) {
  const std::size_t n = boxes.size();
  same_line = Matrix(n, n);
  line_break = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      same_line(i, j) = detail::log_of_transition(boxes[i], boxes[j], false, epsilon);
      line_break(i, j) = detail::log_of_transition(boxes[i], boxes[j], true, epsilon);
    }
  }
}

ForwardBackwardTables forward_backward(const HmmModel &model) {
  const std::size_t n = model.num_states;
  const std::size_t len = model.num_positions();
  ForwardBackwardTables out;
  out.log_alpha = Matrix(len, n);
  out.log_beta = Matrix(len, n, 0.0);
  out.posterior = Matrix(len, n);
  std::vector<double> scale(len, 0.0);

  for (std::size_t j = 0; j < n; ++j) out.log_alpha(0, j) = model.log_initial + model.emission(j, 0);
  scale[0] = detail::normalize_log_row(out.log_alpha.row(0));
  for (std::size_t k = 1; k < len; ++k) {
    const Matrix &t = model.transition_into(k);
    auto prev = out.log_alpha.row(k - 1);
    for (std::size_t j = 0; j < n; ++j)
      out.log_alpha(k, j) = detail::incoming_log_sum(prev, t, j) + model.emission(j, k);
    scale[k] = detail::normalize_log_row(out.log_alpha.row(k));
  }

  std::vector<double> next(n);
  for (std::size_t k = len - 1; k-- > 0;) {
    const Matrix &t = model.transition_into(k + 1);
    for (std::size_t j = 0; j < n; ++j) next[j] = model.emission(j, k + 1) + out.log_beta(k + 1, j);
    for (std::size_t i = 0; i < n; ++i)
      out.log_beta(k, i) = detail::outgoing_log_sum(next, t, i) - scale[k + 1];
  }

  for (std::size_t k = 0; k < len; ++k) {
    auto p = out.posterior.row(k);
    for (std::size_t j = 0; j < n; ++j) p[j] = out.log_alpha(k, j) + out.log_beta(k, j);
    double c = log_sum_exp(p);
    for (auto &v : p) v = std::exp(v - c);
  }
  out.log_likelihood = 0.0;
  for (double c : scale) out.log_likelihood += c;
  if (!std::isfinite(out.log_likelihood))
    throw NumericError("forward-backward produced a non-finite likelihood");
  return out;
}

ViterbiPath viterbi(const HmmModel &model) {
  const std::size_t n = model.num_states;
  const std::size_t len = model.num_positions();
  Matrix delta(len, n);
  std::vector<std::size_t> back(len * n, 0);

  for (std::size_t j = 0; j < n; ++j) delta(0, j) = model.log_initial + model.emission(j, 0);
  for (std::size_t k = 1; k < len; ++k) {
    const Matrix &t = model.transition_into(k);
    auto prev = delta.row(k - 1);
    for (std::size_t j = 0; j < n; ++j) {
      auto best = detail::best_predecessor(prev, t, j);
      delta(k, j) = best.score + model.emission(j, k);
      back[k * n + j] = best.state;
    }
  }

  ViterbiPath out;
  out.states.assign(len, 0);
  double best = kNegInf;
  for (std::size_t j = 0; j < n; ++j) {
    if (delta(len - 1, j) > best) {
      best = delta(len - 1, j);
      out.states[len - 1] = j;
    }
  }
  for (std::size_t k = len - 1; k > 0; --k) out.states[k - 1] = back[k * n + out.states[k]];
  out.log_likelihood = best;
  if (!std::isfinite(best)) throw NumericError("viterbi produced a non-finite likelihood");
  return out;
}

std::vector<double> cosine_scores(std::span<const WordEmbedding> database,
                                  const WordEmbedding &query) {
  std::vector<double> out(database.size());
  for (std::size_t i = 0; i < database.size(); ++i) out[i] = cosine_similarity(database[i], query);
  return out;
}

}  // namespace kernels::serial
}  // namespace wordalign
