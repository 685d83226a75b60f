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

// Per-element pieces shared by the serial and OpenMP kernels. Keeping the
// arithmetic in one place is what makes the two kernel sets bit-identical.

#ifndef WORDALIGN_SRC_KERNEL_COMMON_HPP_
#define WORDALIGN_SRC_KERNEL_COMMON_HPP_

#include <cmath>
#include <limits>
#include <span>

#include "wordalign/alignment.hpp"
#include "wordalign/hmm.hpp"

namespace wordalign::kernels::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_of_transition(const BBox &from, const BBox &to, bool line_break,
                                double epsilon) {
  return std::log(transition_likelihood(from, to, line_break, epsilon));
}

/// log sum_i exp(prev[i] + t(i, to)), reading a column of t.
inline double incoming_log_sum(std::span<const double> prev, const Matrix &t, std::size_t to) {
  double m = kNegInf;
  for (std::size_t i = 0; i < prev.size(); ++i) m = std::max(m, prev[i] + t(i, to));
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) s += std::exp(prev[i] + t(i, to) - m);
  return m + std::log(s);
}

/// log sum_j exp(t(from, j) + next[j]), reading a row of t.
inline double outgoing_log_sum(std::span<const double> next, const Matrix &t, std::size_t from) {
  auto row = t.row(from);
  double m = kNegInf;
  for (std::size_t j = 0; j < next.size(); ++j) m = std::max(m, row[j] + next[j]);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (std::size_t j = 0; j < next.size(); ++j) s += std::exp(row[j] + next[j] - m);
  return m + std::log(s);
}

struct BestPredecessor {
  double score;
  std::size_t state;
};

/// max_i prev[i] + t(i, to); the lowest i wins ties.
inline BestPredecessor best_predecessor(std::span<const double> prev, const Matrix &t,
                                        std::size_t to) {
  BestPredecessor best{kNegInf, 0};
  for (std::size_t i = 0; i < prev.size(); ++i) {
    double v = prev[i] + t(i, to);
    if (v > best.score) best = {v, i};
  }
  return best;
}

/// Subtracts the log-sum-exp of the row and returns it.
inline double normalize_log_row(std::span<double> row) {
  double c = log_sum_exp(row);
  for (auto &v : row) v -= c;
  return c;
}

}  // namespace wordalign::kernels::detail

#endif  // WORDALIGN_SRC_KERNEL_COMMON_HPP_
