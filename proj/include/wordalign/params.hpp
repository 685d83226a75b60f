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

#ifndef WORDALIGN_PARAMS_HPP_
#define WORDALIGN_PARAMS_HPP_

#include <string>

namespace wordalign {

enum class HarvestMode { kHard, kSoft };

/// Sign of the emission exponent. Negative gives the decaying Gaussian used
/// everywhere; positive reproduces the printed form and exists only so the
/// discrepancy can be demonstrated.
enum class ExponentSign { kNegative, kPositive };

/// Selects the serial reference kernels or their OpenMP counterparts.
enum class Exec { kSerial, kParallel };

struct AlignmentParams {
  double epsilon = 0.01;       // residual likelihood, shared by rule and penalty
  int top_k = 20;              // candidates kept per unique transcript word
  double tau = 0.5;            // harvest threshold on posterior mass
  double score_threshold = 0.0;
  double nms_overlap = 0.4;    // IoU threshold for the wordness-score NMS
  HarvestMode harvest_mode = HarvestMode::kHard;
  ExponentSign emission_sign = ExponentSign::kNegative;

  /// Throws ValidationError when a field is out of range.
  void validate() const;

  friend bool operator==(const AlignmentParams &, const AlignmentParams &) = default;
};

std::string to_string(HarvestMode mode);
std::string to_string(ExponentSign sign);
HarvestMode parse_harvest_mode(const std::string &s);
ExponentSign parse_exponent_sign(const std::string &s);

}  // namespace wordalign

#endif  // WORDALIGN_PARAMS_HPP_
