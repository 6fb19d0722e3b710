/* Copyright 2026 The Statecut Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef STATECUT_ERROR_HPP_
#define STATECUT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace statecut {

enum class ErrorCode {
  kUnknownVariable,
  kUnknownObject,
  kDuplicateObject,
  kInvalidOp,
  kUndeclaredAccess,
  kRootMismatch,
  kNonMonotonicTimestamp,
  kUnknownSnapshot,
  kUnreconstructable,
  kInfeasible,
  kTooLarge,
  kSerializationError,
  kDeserializationFailure,
  kMissingCellProgram,
  kFormatError,
  kIoError,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the engine. `subjects` names the variables (or
// cells) the failure is about, e.g. the variables that make a plan
// infeasible.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> subjects = {})
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        subjects_(std::move(subjects)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& subjects() const noexcept {
    return subjects_;
  }

 private:
  ErrorCode code_;
  std::vector<std::string> subjects_;
};

}  // namespace statecut

#endif  // STATECUT_ERROR_HPP_
