// Copyright 2026 the rsengine authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSENGINE_ERRORS_HPP
#define RSENGINE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rs {

enum class ErrorCode {
  DimensionMismatch,
  NotPositiveDefinite,
  InvalidHyperparameter,
  TooFewPilotSamples,
  IndexOutOfRange,
  RuleInputMismatch,
  UnsupportedRule,
  InvalidDof,
  DegenerateWeights,
  InvalidRho,
  DomainError,
  EmptyTable,
  InvalidArgument,
  IoError,
};

/// Single exception type for the whole engine; the code selects the
/// contract violation, the message carries specifics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::InvalidHyperparameter: return "InvalidHyperparameter";
    case ErrorCode::TooFewPilotSamples: return "TooFewPilotSamples";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RuleInputMismatch: return "RuleInputMismatch";
    case ErrorCode::UnsupportedRule: return "UnsupportedRule";
    case ErrorCode::InvalidDof: return "InvalidDof";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::InvalidRho: return "InvalidRho";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace rs

#endif  // RSENGINE_ERRORS_HPP
