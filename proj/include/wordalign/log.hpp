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

#ifndef WORDALIGN_LOG_HPP_
#define WORDALIGN_LOG_HPP_

#include <string>

namespace wordalign {

enum class Verbosity { kQuiet = 0, kWarn = 1, kInfo = 2 };

void set_verbosity(Verbosity v);
Verbosity verbosity();

/// Diagnostics go to stderr so that JSON on stdout stays clean.
void warn(const std::string &message);
void info(const std::string &message);

}  // namespace wordalign

#endif  // WORDALIGN_LOG_HPP_
