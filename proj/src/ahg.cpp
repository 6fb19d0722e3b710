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

#include "statecut/ahg.hpp"

#include <algorithm>
#include <deque>

#include "statecut/error.hpp"

namespace statecut {

std::set<std::string> ActiveSet::names() const {
  std::set<std::string> out;
  for (const auto& [name, vs] : snapshots) out.insert(name);
  return out;
}

std::vector<VariableSnapshot> ActiveSet::list() const {
  std::vector<VariableSnapshot> out;
  out.reserve(snapshots.size());
  for (const auto& [name, vs] : snapshots) out.push_back(vs);
  return out;
}

std::size_t Ahg::index_of(Timestamp t) const {
  auto it = std::lower_bound(
      cells_.begin(), cells_.end(), t,
      [](const CellExecution& c, Timestamp v) { return c.t < v; });
  if (it == cells_.end() || it->t != t) {
    throw Error(ErrorCode::kUnknownSnapshot,
                "no cell execution at t" + std::to_string(t.value));
  }
  return static_cast<std::size_t>(it - cells_.begin());
}

bool Ahg::has_cell(Timestamp t) const {
  auto it = std::lower_bound(
      cells_.begin(), cells_.end(), t,
      [](const CellExecution& c, Timestamp v) { return c.t < v; });
  return it != cells_.end() && it->t == t;
}

const CellExecution& Ahg::cell(Timestamp t) const { return cells_[index_of(t)]; }

std::span<const VariableSnapshot> Ahg::reads_of(Timestamp t) const {
  return reads_[index_of(t)];
}
std::span<const std::string> Ahg::writes_of(Timestamp t) const {
  return writes_[index_of(t)];
}
std::span<const std::string> Ahg::deletes_of(Timestamp t) const {
  return deletes_[index_of(t)];
}

bool Ahg::contains(const VariableSnapshot& vs) const {
  auto it = versions_.find(vs.name);
  if (it == versions_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), vs.t);
}

std::span<const Timestamp> Ahg::versions(const std::string& name) const {
  auto it = versions_.find(name);
  if (it == versions_.end()) return {};
  return it->second;
}

std::optional<Timestamp> Ahg::latest_version(const std::string& name) const {
  auto it = versions_.find(name);
  if (it == versions_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

bool Ahg::is_deleted(const std::string& name) const {
  auto tomb = tombstones_.find(name);
  if (tomb == tombstones_.end()) return false;
  auto latest = latest_version(name);
  return !latest || *latest < tomb->second;
}

std::optional<VariableSnapshot> Ahg::active(const std::string& name) const {
  auto latest = latest_version(name);
  if (!latest || is_deleted(name)) return std::nullopt;
  return VariableSnapshot{name, *latest};
}

void Ahg::Update(const CellRecord& record) {
  if (!cells_.empty() && record.t <= cells_.back().t) {
    throw Error(ErrorCode::kNonMonotonicTimestamp,
                "t" + std::to_string(record.t.value) + " is not after t" +
                    std::to_string(cells_.back().t.value));
  }
  for (const auto& vs : record.accessed) {
    if (!(vs.t < record.t) || !contains(vs)) {
      throw Error(ErrorCode::kUnknownSnapshot,
                  "read of unknown snapshot (" + vs.name + ", t" +
                      std::to_string(vs.t.value) + ")",
                  {vs.name});
    }
  }
  cells_.push_back(CellExecution{record.t, record.code_ref, record.runtime_s,
                                 record.never_rerun, record.nondeterministic});
  reads_.emplace_back(record.accessed.begin(), record.accessed.end());
  writes_.emplace_back(record.written.begin(), record.written.end());
  deletes_.emplace_back(record.deleted.begin(), record.deleted.end());
  for (const auto& name : record.written) versions_[name].push_back(record.t);
  for (const auto& name : record.deleted) {
    // A name deleted and recreated by the same cell counts as created.
    if (!record.written.contains(name)) tombstones_[name] = record.t;
  }
}

void Ahg::AddReadDependency(const VariableSnapshot& vs, Timestamp t) {
  std::size_t i = index_of(t);
  if (!(vs.t < t) || !contains(vs)) {
    throw Error(ErrorCode::kUnknownSnapshot, "read edge must point backwards",
                {vs.name});
  }
  auto& reads = reads_[i];
  if (std::find(reads.begin(), reads.end(), vs) == reads.end()) {
    reads.push_back(vs);
    std::sort(reads.begin(), reads.end());
  }
}

void Ahg::AddWriteDependency(Timestamp t, const std::string& name) {
  std::size_t i = index_of(t);
  auto& writes = writes_[i];
  if (std::find(writes.begin(), writes.end(), name) != writes.end()) return;
  writes.push_back(name);
  std::sort(writes.begin(), writes.end());
  auto& v = versions_[name];
  v.insert(std::upper_bound(v.begin(), v.end(), t), t);
}

void Ahg::SetCellFlags(Timestamp t, bool never_rerun, bool nondeterministic) {
  auto& c = cells_[index_of(t)];
  c.never_rerun = never_rerun;
  c.nondeterministic = nondeterministic;
}

std::size_t Ahg::snapshot_count() const {
  std::size_t n = 0;
  for (const auto& [name, v] : versions_) n += v.size();
  return n;
}

std::size_t Ahg::read_edge_count() const {
  std::size_t n = 0;
  for (const auto& r : reads_) n += r.size();
  return n;
}

std::size_t Ahg::write_edge_count() const {
  std::size_t n = 0;
  for (const auto& w : writes_) n += w.size();
  return n;
}

std::size_t Ahg::memory_bytes() const {
  auto str_bytes = [](const std::string& s) {
    return sizeof(std::string) + (s.capacity() > 15 ? s.capacity() : 0);
  };
  std::size_t n = sizeof(*this);
  n += cells_.capacity() * sizeof(CellExecution);
  for (const auto& c : cells_) n += str_bytes(c.code_ref) - sizeof(std::string);
  for (const auto& r : reads_) {
    n += sizeof(r) + r.capacity() * sizeof(VariableSnapshot);
    for (const auto& vs : r) n += str_bytes(vs.name) - sizeof(std::string);
  }
  for (const auto* lists : {&writes_, &deletes_}) {
    for (const auto& w : *lists) {
      n += sizeof(w) + w.capacity() * sizeof(std::string);
      for (const auto& s : w) n += str_bytes(s) - sizeof(std::string);
    }
  }
  // Rough per-node overhead of a red-black tree node.
  constexpr std::size_t kTreeNode = 4 * sizeof(void*);
  for (const auto& [name, v] : versions_) {
    n += kTreeNode + str_bytes(name) + sizeof(v) + v.capacity() * sizeof(Timestamp);
  }
  for (const auto& [name, t] : tombstones_) {
    n += kTreeNode + str_bytes(name) + sizeof(t);
  }
  return n;
}

void UpdateAhg(Ahg& ahg, const CellRecord& record) { ahg.Update(record); }

ActiveSet ActiveSnapshots(const Ahg& ahg) {
  ActiveSet out;
  for (const auto& [name, versions] : ahg.all_versions()) {
    if (auto vs = ahg.active(name)) out.snapshots.emplace(name, *vs);
  }
  return out;
}

ReqClosure CollectReq(const Ahg& ahg, std::span<const VariableSnapshot> targets,
                      const std::set<std::string>& ground) {
  auto is_ground = [&](const VariableSnapshot& vs) {
    if (!ground.contains(vs.name)) return false;
    auto act = ahg.active(vs.name);
    return act && act->t == vs.t;
  };

  std::set<VariableSnapshot> seen;
  std::set<Timestamp> cells;
  std::deque<VariableSnapshot> queue;
  for (const auto& target : targets) {
    if (!ahg.contains(target)) {
      throw Error(ErrorCode::kUnknownSnapshot,
                  "(" + target.name + ", t" + std::to_string(target.t.value) +
                      ") is not in the graph",
                  {target.name});
    }
    if (is_ground(target)) continue;
    if (seen.insert(target).second) queue.push_back(target);
  }
  while (!queue.empty()) {
    VariableSnapshot vs = queue.front();
    queue.pop_front();
    // Every snapshot was written by the cell that finished at its timestamp.
    if (!cells.insert(vs.t).second) continue;
    for (const auto& input : ahg.reads_of(vs.t)) {
      if (is_ground(input)) continue;
      if (seen.insert(input).second) queue.push_back(input);
    }
  }

  ReqClosure out;
  out.cells.assign(cells.begin(), cells.end());
  for (Timestamp t : out.cells) {
    if (ahg.cell(t).never_rerun) out.blocked.push_back(t);
  }
  return out;
}

std::vector<Timestamp> ReqMerged(const Ahg& ahg,
                                 std::span<const VariableSnapshot> targets,
                                 const std::set<std::string>& ground) {
  ReqClosure closure = CollectReq(ahg, targets, ground);
  if (!closure.blocked.empty()) {
    std::vector<std::string> names;
    for (const auto& t : targets) names.push_back(t.name);
    throw Error(ErrorCode::kUnreconstructable,
                "reconstruction needs never-rerun cell t" +
                    std::to_string(closure.blocked.front().value),
                std::move(names));
  }
  return std::move(closure.cells);
}

std::vector<Timestamp> Req(const Ahg& ahg, const VariableSnapshot& target,
                           const std::set<std::string>& ground) {
  return ReqMerged(ahg, std::span<const VariableSnapshot>(&target, 1), ground);
}

}  // namespace statecut
