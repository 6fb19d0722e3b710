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

// Application history graph.
//
// A bipartite lineage graph between variable snapshots (name, t) and cell
// executions c_t. A write edge c_t -> (x, t) says the cell may have created or
// modified x; a read edge (x, s) -> c_t says the cell may have accessed the
// version of x last written at s. Both edge kinds may contain false
// positives; reconstruction stays correct under them.

#ifndef STATECUT_AHG_HPP_
#define STATECUT_AHG_HPP_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "statecut/types.hpp"

namespace statecut {

struct VariableSnapshot {
  std::string name;
  Timestamp t;

  friend auto operator<=>(const VariableSnapshot&, const VariableSnapshot&) = default;
};

struct CellExecution {
  Timestamp t;
  std::string code_ref;
  double runtime_s = 0.0;
  bool never_rerun = false;
  bool nondeterministic = false;
};

/// Everything the interceptor learned about one cell execution.
struct CellRecord {
  Timestamp t;
  std::string code_ref;
  double runtime_s = 0.0;
  bool never_rerun = false;
  bool nondeterministic = false;
  std::set<VariableSnapshot> accessed;
  std::set<std::string> written;
  std::set<std::string> deleted;
  /// Set when the cell raised part-way; its partial effects are still
  /// recorded.
  std::optional<std::string> error;
};

/// Latest non-deleted snapshot per variable.
struct ActiveSet {
  std::map<std::string, VariableSnapshot> snapshots;

  std::set<std::string> names() const;
  std::vector<VariableSnapshot> list() const;
};

class Ahg {
 public:
  /// Appends c_t with its read and write edges. Throws kNonMonotonicTimestamp
  /// unless t is later than every existing cell, and kUnknownSnapshot when a
  /// read edge names a snapshot that does not exist or is not older than t.
  void Update(const CellRecord& record);

  const std::vector<CellExecution>& cells() const { return cells_; }
  const CellExecution& cell(Timestamp t) const;
  bool has_cell(Timestamp t) const;

  std::span<const VariableSnapshot> reads_of(Timestamp t) const;
  std::span<const std::string> writes_of(Timestamp t) const;
  std::span<const std::string> deletes_of(Timestamp t) const;

  bool contains(const VariableSnapshot& vs) const;
  /// Every snapshot of `name`, oldest first.
  std::span<const Timestamp> versions(const std::string& name) const;
  std::optional<Timestamp> latest_version(const std::string& name) const;
  bool is_deleted(const std::string& name) const;
  /// The active snapshot of `name`, if the name is live.
  std::optional<VariableSnapshot> active(const std::string& name) const;

  std::size_t snapshot_count() const;
  std::size_t read_edge_count() const;
  std::size_t write_edge_count() const;
  const std::map<std::string, std::vector<Timestamp>>& all_versions() const {
    return versions_;
  }

  /// Approximate heap footprint of the graph itself.
  std::size_t memory_bytes() const;

  /// Adds a (possibly spurious) read edge (vs -> c_t). Requires vs.t < t.
  void AddReadDependency(const VariableSnapshot& vs, Timestamp t);
  /// Adds a (possibly spurious) write edge c_t -> (name, t), creating the
  /// snapshot. No-op when it already exists.
  void AddWriteDependency(Timestamp t, const std::string& name);

  /// Overrides a cell's annotation flags (used by annotation files).
  void SetCellFlags(Timestamp t, bool never_rerun, bool nondeterministic);

 private:
  std::size_t index_of(Timestamp t) const;

  std::vector<CellExecution> cells_;
  std::vector<std::vector<VariableSnapshot>> reads_;
  std::vector<std::vector<std::string>> writes_;
  std::vector<std::vector<std::string>> deletes_;
  std::map<std::string, std::vector<Timestamp>> versions_;
  std::map<std::string, Timestamp> tombstones_;
};

void UpdateAhg(Ahg& ahg, const CellRecord& record);

ActiveSet ActiveSnapshots(const Ahg& ahg);

/// Result of a backward traversal: the cells collected (oldest first) and
/// those among them that are annotated never-rerun.
struct ReqClosure {
  std::vector<Timestamp> cells;
  std::vector<Timestamp> blocked;
};

/// Backward traversal from `targets`, stopping each path at a ground
/// variable. A snapshot is ground only when its name is in `ground` and it
/// is that name's active snapshot. Never throws on never-rerun cells.
ReqClosure CollectReq(const Ahg& ahg, std::span<const VariableSnapshot> targets,
                      const std::set<std::string>& ground);

/// Cells to rerun, in completion order, to reconstruct `target` from
/// `ground`. Throws kUnreconstructable if the list needs a never-rerun cell.
std::vector<Timestamp> Req(const Ahg& ahg, const VariableSnapshot& target,
                           const std::set<std::string>& ground);

/// Union of Req over `targets` with shared cells collapsed.
std::vector<Timestamp> ReqMerged(const Ahg& ahg,
                                 std::span<const VariableSnapshot> targets,
                                 const std::set<std::string>& ground);

}  // namespace statecut

#endif  // STATECUT_AHG_HPP_
