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

#include "statecut/monitor.hpp"

#include <span>

#include "statecut/error.hpp"

namespace statecut {

std::set<std::string> DetectAccesses(const PreSnapshot& pre,
                                     const std::set<std::string>& direct_reads) {
  std::set<std::string> accessed;
  std::vector<const IdGraph*> read_graphs;
  for (const auto& name : direct_reads) {
    if (!pre.roots.contains(name)) continue;  // bound by the cell itself
    accessed.insert(name);
    if (auto it = pre.id_graphs.find(name); it != pre.id_graphs.end()) {
      read_graphs.push_back(&it->second);
    }
  }
  if (read_graphs.empty()) return accessed;
  for (const auto& [name, graph] : pre.id_graphs) {
    if (accessed.contains(name)) continue;
    for (const IdGraph* read : read_graphs) {
      if (IdGraphsOverlap(graph, *read)) {
        accessed.insert(name);
        break;
      }
    }
  }
  return accessed;
}

ModificationSet DetectModifications(const PreSnapshot& pre, const SimHeap& after,
                                    const std::set<std::string>& accessed,
                                    const std::set<std::string>& rebound) {
  ModificationSet out;
  for (const auto& [name, root] : pre.roots) {
    if (!after.is_bound(name)) out.deleted.insert(name);
  }
  for (const auto& [name, root] : after.names()) {
    if (!pre.roots.contains(name)) out.created.insert(name);
  }

  std::set<std::string> candidates;
  for (const auto& [name, hash] : pre.hashes) candidates.insert(name);
  for (const auto& name : rebound) {
    if (pre.roots.contains(name)) candidates.insert(name);
  }
  for (const auto& name : candidates) {
    if (!after.is_bound(name)) continue;
    // Assignment to a different object is a write even when the value is
    // equal (this also covers delete-then-recreate within one cell).
    if (rebound.contains(name) && after.root(name) != pre.roots.at(name)) {
      out.modified.insert(name);
      continue;
    }
    auto hash_it = pre.hashes.find(name);
    if (hash_it != pre.hashes.end()) {
      const auto& before = hash_it->second;
      if (!before.has_value()) {
        // Values we cannot compare are assumed modified whenever accessed.
        if (accessed.contains(name)) {
          out.modified.insert(name);
          continue;
        }
      } else if (ValueHash(after, name) != before) {
        out.modified.insert(name);
        continue;
      }
    }
    if (auto g = pre.id_graphs.find(name); g != pre.id_graphs.end()) {
      if (IdGraphStructuralDiff(g->second, BuildIdGraph(after, name))) {
        out.modified.insert(name);
      }
    }
  }
  return out;
}

namespace {

// Objects each op may touch: whatever the declared reads reached before the
// cell, plus objects the cell itself created.
void CheckDeclaredAccess(const SimHeap& heap, const CellProgram& cell,
                         const PreSnapshot& pre) {
  std::set<ObjectId> allowed;
  for (const auto& name : cell.direct_reads) {
    auto it = pre.roots.find(name);
    if (it == pre.roots.end()) continue;
    if (allowed.contains(it->second)) continue;
    auto reach = ReachableFrom(heap, it->second);
    allowed.insert(reach.begin(), reach.end());
  }
  for (const auto& op : cell.ops) {
    if (const auto* c = std::get_if<CreateOp>(&op)) {
      allowed.insert(c->id);
      continue;
    }
    for (ObjectId id : ReferencedObjects(op)) {
      if (!allowed.contains(id)) {
        throw Error(ErrorCode::kUndeclaredAccess,
                    "cell '" + cell.code_ref + "' touches object " +
                        std::to_string(id.value) +
                        " outside its declared reads",
                    {cell.code_ref});
      }
    }
  }
}

}  // namespace

PreSnapshot Interceptor::TakePreSnapshot(const std::set<std::string>& direct_reads,
                                         std::set<std::string>& accessed) {
  const SimHeap& heap = session_.heap;
  PreSnapshot pre;
  for (const auto& [name, root] : heap.names()) pre.roots.emplace(name, root);

  if (options_.use_id_graph) {
    for (const auto& [name, root] : pre.roots) {
      auto it = graph_cache_.find(name);
      if (it == graph_cache_.end() || it->second.root != root) {
        it = graph_cache_.insert_or_assign(name, BuildIdGraph(heap, name)).first;
      }
      pre.id_graphs.emplace(name, it->second);
    }
    accessed = DetectAccesses(pre, direct_reads);
    for (const auto& name : accessed) pre.hashes.emplace(name, ValueHash(heap, name));
  } else {
    accessed = DetectAccesses(pre, direct_reads);
    for (const auto& [name, root] : pre.roots) {
      pre.hashes.emplace(name, ValueHash(heap, name));
    }
  }
  return pre;
}

CellRecord Interceptor::ExecuteCell(const CellProgram& cell) {
  if (session_.archive.contains(cell.code_ref)) {
    throw Error(ErrorCode::kFormatError,
                "code_ref '" + cell.code_ref + "' executed twice", {cell.code_ref});
  }
  SimHeap& heap = session_.heap;
  Ahg& ahg = session_.ahg;

  CellRecord record;
  record.t = session_.next_timestamp();
  record.code_ref = cell.code_ref;
  record.runtime_s = cell.declared_runtime_s;
  record.never_rerun = cell.never_rerun;
  record.nondeterministic = cell.nondeterministic;

  std::set<std::string> accessed;
  PreSnapshot pre = TakePreSnapshot(cell.direct_reads, accessed);
  CheckDeclaredAccess(heap, cell, pre);

  MutationRecord mutation;
  std::size_t applied = 0;
  for (const auto& op : cell.ops) {
    try {
      mutation.Merge(heap.Apply(op));
    } catch (const Error& e) {
      record.error = e.what();
      break;
    }
    ++applied;
  }

  std::set<std::string> rebound;
  for (const auto& name : mutation.bound) {
    if (pre.roots.contains(name)) rebound.insert(name);
  }
  ModificationSet mods = DetectModifications(pre, heap, accessed, rebound);

  for (const auto& name : accessed) {
    auto latest = ahg.latest_version(name);
    if (!latest) {
      throw Error(ErrorCode::kInternal,
                  "bound variable '" + name + "' has no snapshot", {name});
    }
    record.accessed.insert(VariableSnapshot{name, *latest});
  }
  record.written = mods.modified;
  record.written.insert(mods.created.begin(), mods.created.end());
  record.deleted = mods.deleted;

  ahg.Update(record);
  session_.cost.RecordRuntime(record.t, record.runtime_s);

  CellProgram archived = cell;
  if (applied < cell.ops.size()) archived.ops.resize(applied);
  session_.archive.emplace(cell.code_ref, std::move(archived));

  for (const auto& name : record.written) graph_cache_.erase(name);
  for (const auto& name : record.deleted) graph_cache_.erase(name);
  heap.CollectGarbage();
  return record;
}

CellRecord ExecuteCell(Session& session, const CellProgram& cell,
                       const MonitorOptions& options) {
  return Interceptor(session, options).ExecuteCell(cell);
}

Session RunTrace(const Trace& trace, const MonitorOptions& options,
                 std::vector<CellRecord>* records) {
  Session session;
  session.cost = CostModel(trace.profile);
  session.annotations = trace.variable_annotations;
  Interceptor interceptor(session, options);
  for (const auto& cell : trace.cells) {
    CellRecord rec = interceptor.ExecuteCell(cell);
    if (records != nullptr) records->push_back(std::move(rec));
  }
  return session;
}

}  // namespace statecut
