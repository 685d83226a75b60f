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

#ifndef WORDALIGN_ERROR_HPP_
#define WORDALIGN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wordalign {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  kValidation = 2,
  kNumeric = 3,
  kIo = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string &message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  /// Short machine-readable tag, e.g. "page_id mismatch".
  const std::string &code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string code, const std::string &message)
      : Error(ErrorKind::kValidation, std::move(code), message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string &message)
      : Error(ErrorKind::kNumeric, "numeric failure", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &message)
      : Error(ErrorKind::kIo, "io", message) {}
};

/// Thrown by normalize_token / dctow when nothing embeddable remains.
class UnembeddableToken : public ValidationError {
 public:
  explicit UnembeddableToken(std::string token)
      : ValidationError("unembeddable token",
                        "token '" + token + "' has no characters in the alphabet"),
        token_(std::move(token)) {}
  const std::string &token() const { return token_; }

 private:
  std::string token_;
};

}  // namespace wordalign

#endif  // WORDALIGN_ERROR_HPP_
