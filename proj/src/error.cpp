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

#include "statecut/error.hpp"

namespace statecut {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownVariable: return "UnknownVariable";
    case ErrorCode::kUnknownObject: return "UnknownObject";
    case ErrorCode::kDuplicateObject: return "DuplicateObject";
    case ErrorCode::kInvalidOp: return "InvalidOp";
    case ErrorCode::kUndeclaredAccess: return "UndeclaredAccess";
    case ErrorCode::kRootMismatch: return "RootMismatch";
    case ErrorCode::kNonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::kUnknownSnapshot: return "UnknownSnapshot";
    case ErrorCode::kUnreconstructable: return "Unreconstructable";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSerializationError: return "SerializationError";
    case ErrorCode::kDeserializationFailure: return "DeserializationFailure";
    case ErrorCode::kMissingCellProgram: return "MissingCellProgram";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace statecut
