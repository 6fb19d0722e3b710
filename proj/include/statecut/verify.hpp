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

// Replication correctness checks.
//
// Value equivalence: every variable's restored value equals the original,
// ignoring object identity. Isomorphism: additionally, the pairing of
// original and restored objects found by walking all variables in parallel
// is a bijection, so shared references stay shared and distinct objects
// stay distinct.

#ifndef STATECUT_VERIFY_HPP_
#define STATECUT_VERIFY_HPP_

#include <string>
#include <vector>

#include "statecut/heap.hpp"

namespace statecut {

struct VerificationReport {
  bool value_equivalent = true;
  bool isomorphic = true;
  /// Names bound in the original but not in the restored namespace.
  std::vector<std::string> missing;
  /// Names bound only in the restored namespace.
  std::vector<std::string> unexpected;
  /// Names present in both whose values differ.
  std::vector<std::string> value_diffs;
  /// Reference pairs that break the bijection, human readable.
  std::vector<std::string> violations;

  bool ok() const { return value_equivalent && isomorphic; }
};

/// True when the subgraphs under `a` and `b` are bisimilar on kind, value
/// and slot labels.
bool ValueEqual(const SimHeap& lhs, ObjectId a, const SimHeap& rhs, ObjectId b);

/// Compares two heaps name by name. Namespace mismatches are reported, not
/// thrown.
VerificationReport Verify(const SimHeap& original, const SimHeap& restored);

}  // namespace statecut

#endif  // STATECUT_VERIFY_HPP_
