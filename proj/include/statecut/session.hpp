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

// Session and trace value types shared by the monitor, planner and
// replicator.

#ifndef STATECUT_SESSION_HPP_
#define STATECUT_SESSION_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "statecut/ahg.hpp"
#include "statecut/cost_model.hpp"
#include "statecut/heap.hpp"

namespace statecut {

/// One cell program. `direct_reads` stands in for static analysis of the
/// cell's source: the variables it names explicitly.
struct CellProgram {
  std::string code_ref;
  std::set<std::string> direct_reads;
  std::vector<HeapOp> ops;
  /// What a rerun of a nondeterministic cell executes instead of `ops`.
  std::optional<std::vector<HeapOp>> alt_ops;
  double declared_runtime_s = 0.0;
  bool never_rerun = false;
  bool nondeterministic = false;

  bool operator==(const CellProgram&) const = default;
};

enum class VariableAnnotation { kAlwaysCopy, kAlwaysRecompute };

std::string_view VariableAnnotationName(VariableAnnotation a);
std::optional<VariableAnnotation> ParseVariableAnnotation(std::string_view s);

struct Trace {
  int version = 1;
  Profile profile;
  std::vector<CellProgram> cells;
  std::map<std::string, VariableAnnotation> variable_annotations;

  bool operator==(const Trace&) const = default;
};

/// A live (or restored) session: kernel state plus everything recorded
/// about how it came to be.
struct Session {
  SimHeap heap;
  Ahg ahg;
  CostModel cost;
  /// Cell programs as executed, keyed by code_ref. Failed cells keep only
  /// the op prefix that took effect.
  std::map<std::string, CellProgram> archive;
  std::map<std::string, VariableAnnotation> annotations;
  /// For restored sessions: new ObjectId -> ObjectId in the original
  /// session. Empty for sessions built directly from a trace.
  std::map<ObjectId, ObjectId> origin_ids;

  /// Timestamp the next executed cell will receive.
  Timestamp next_timestamp() const;
  /// Original identity of `id` (itself when it was never remapped).
  ObjectId origin_of(ObjectId id) const;
};

}  // namespace statecut

#endif  // STATECUT_SESSION_HPP_
