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

// OpenMP kernels. Loops over independent states are split across threads;
// each per-state reduction runs in the serial order, so results match
// kernels::serial exactly.

#include <cmath>

#include "kernel_common.hpp"
#include "wordalign/error.hpp"

namespace wordalign::kernels::parallel {

using detail::kNegInf;

namespace {
inline std::ptrdiff_t as_signed(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }
}  // namespace

Matrix emission_matrix(std::span<const WordEmbedding> states,
                       std::span<const WordEmbedding> words, ExponentSign sign) {
  Matrix out(states.size(), words.size());
  const std::ptrdiff_t n = as_signed(states.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::size_t w = 0; w < words.size(); ++w)
      out(i, w) = log_emission_likelihood(cosine_similarity(states[i], words[w]), sign);
  return out;
}

void transition_matrices(std::span<const BBox> boxes, double epsilon, Matrix &same_line,
                         Matrix &line_break) {
  const std::size_t n = boxes.size();
  same_line = Matrix(n, n);
  line_break = Matrix(n, n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < as_signed(n); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      same_line(i, j) = detail::log_of_transition(boxes[i], boxes[j], false, epsilon);
      line_break(i, j) = detail::log_of_transition(boxes[i], boxes[j], true, epsilon);
    }
  }
}

ForwardBackwardTables forward_backward(const HmmModel &model) {
  const std::size_t n = model.num_states;
  const std::size_t len = model.num_positions();
  const std::ptrdiff_t sn = as_signed(n);
  ForwardBackwardTables out;
  out.log_alpha = Matrix(len, n);
  out.log_beta = Matrix(len, n, 0.0);
  out.posterior = Matrix(len, n);
  std::vector<double> scale(len, 0.0);
  std::vector<double> next(n);

#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < sn; ++j)
      out.log_alpha(0, j) = model.log_initial + model.emission(j, 0);
#pragma omp single
    scale[0] = detail::normalize_log_row(out.log_alpha.row(0));

    for (std::size_t k = 1; k < len; ++k) {
      const Matrix &t = model.transition_into(k);
      auto prev = out.log_alpha.row(k - 1);
#pragma omp for schedule(static)
      for (std::ptrdiff_t j = 0; j < sn; ++j)
        out.log_alpha(k, j) = detail::incoming_log_sum(prev, t, j) + model.emission(j, k);
#pragma omp single
      scale[k] = detail::normalize_log_row(out.log_alpha.row(k));
    }

    for (std::size_t k = len - 1; k-- > 0;) {
      const Matrix &t = model.transition_into(k + 1);
#pragma omp for schedule(static)
      for (std::ptrdiff_t j = 0; j < sn; ++j)
        next[j] = model.emission(j, k + 1) + out.log_beta(k + 1, j);
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < sn; ++i)
        out.log_beta(k, i) = detail::outgoing_log_sum(next, t, i) - scale[k + 1];
    }

#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < as_signed(len); ++k) {
      auto p = out.posterior.row(k);
      for (std::size_t j = 0; j < n; ++j) p[j] = out.log_alpha(k, j) + out.log_beta(k, j);
      double c = log_sum_exp(p);
      for (auto &v : p) v = std::exp(v - c);
    }
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

#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t j = 0; j < as_signed(n); ++j)
      delta(0, j) = model.log_initial + model.emission(j, 0);
    for (std::size_t k = 1; k < len; ++k) {
      const Matrix &t = model.transition_into(k);
      auto prev = delta.row(k - 1);
#pragma omp for schedule(static)
      for (std::ptrdiff_t j = 0; j < as_signed(n); ++j) {
        auto best = detail::best_predecessor(prev, t, j);
        delta(k, j) = best.score + model.emission(j, k);
        back[k * n + j] = best.state;
      }
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
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < as_signed(database.size()); ++i)
    out[i] = cosine_similarity(database[i], query);
  return out;
}

}  // namespace wordalign::kernels::parallel
