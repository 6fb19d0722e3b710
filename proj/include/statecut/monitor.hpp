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

// Cell execution interceptor.
//
// Runs cell programs against the session heap and infers, for each cell,
// which variable versions it read and which variables it created, modified
// or deleted. Inference is conservative: it may report extra accesses or
// modifications but never misses one.

#ifndef STATECUT_MONITOR_HPP_
#define STATECUT_MONITOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "statecut/ahg.hpp"
#include "statecut/heap.hpp"
#include "statecut/session.hpp"

namespace statecut {

struct MonitorOptions {
  /// When false, accesses are the direct reads only and modifications are
  /// detected from value hashes alone (reference swaps go unnoticed).
  bool use_id_graph = true;
};

/// Namespace state captured before a cell runs.
struct PreSnapshot {
  std::map<std::string, ObjectId> roots;
  /// Every bound name (ID-graph mode only).
  std::map<std::string, IdGraph> id_graphs;
  /// Names whose value hash was taken; nullopt means unhashable.
  std::map<std::string, std::optional<std::uint64_t>> hashes;
};

/// Direct reads plus every name whose ID graph overlaps one of them.
std::set<std::string> DetectAccesses(const PreSnapshot& pre,
                                     const std::set<std::string>& direct_reads);

struct ModificationSet {
  std::set<std::string> modified;
  std::set<std::string> created;
  std::set<std::string> deleted;
};

/// Compares the pre-snapshot with the heap after the cell. Candidates for
/// modification are the hashed names plus `rebound` (names the cell
/// assigned to again).
ModificationSet DetectModifications(const PreSnapshot& pre, const SimHeap& after,
                                    const std::set<std::string>& accessed,
                                    const std::set<std::string>& rebound = {});

/// Executes cells of one session in order. Keeps ID graphs of variables
/// that were not written across cells so only changed variables are
/// re-walked.
class Interceptor {
 public:
  explicit Interceptor(Session& session, MonitorOptions options = {})
      : session_(session), options_(options) {}

  /// Runs `cell` at the next timestamp, updates the AHG and cost model, and
  /// archives the program. A cell whose ops fail part-way keeps its partial
  /// effects and records the error. Throws kUndeclaredAccess when an op
  /// touches an object outside the cell's declared reads, and kFormatError
  /// when code_ref was already executed.
  CellRecord ExecuteCell(const CellProgram& cell);

 private:
  PreSnapshot TakePreSnapshot(const std::set<std::string>& direct_reads,
                              std::set<std::string>& accessed);

  Session& session_;
  MonitorOptions options_;
  std::map<std::string, IdGraph> graph_cache_;
};

/// Single-cell form without cross-cell caching.
CellRecord ExecuteCell(Session& session, const CellProgram& cell,
                       const MonitorOptions& options = {});

/// Builds a session by executing every cell of `trace` from an empty heap.
Session RunTrace(const Trace& trace, const MonitorOptions& options = {},
                 std::vector<CellRecord>* records = nullptr);

}  // namespace statecut

#endif  // STATECUT_MONITOR_HPP_
