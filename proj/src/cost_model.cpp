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

#include "statecut/cost_model.hpp"

#include <unordered_map>
#include <vector>

#include "statecut/error.hpp"

namespace statecut {

VariableProfile ProfileVariable(const SimHeap& heap, const std::string& name) {
  VariableProfile p;
  for (ObjectId id : ReachableObjects(heap, name)) {
    const HeapObject& obj = heap.object(id);
    p.size_bytes += obj.size_bytes;
    p.serializable = p.serializable && obj.serializable;
    p.deserializable = p.deserializable && obj.deserializable;
  }
  return p;
}

void CostModel::ProfileVariables(const SimHeap& heap,
                                 const std::set<std::string>& names) {
  variables_.clear();
  for (const auto& name : names) variables_[name] = ProfileVariable(heap, name);
}

const VariableProfile& CostModel::variable(const std::string& name) const {
  auto it = variables_.find(name);
  if (it == variables_.end()) {
    throw Error(ErrorCode::kUnknownVariable,
                "variable '" + name + "' has not been profiled", {name});
  }
  return it->second;
}

namespace {

Cost TransferTime(const Profile& profile, std::uint64_t bytes) {
  return Cost(profile.latency_s +
              static_cast<double>(bytes) / profile.bandwidth_bytes_per_s);
}

}  // namespace

Cost EstimateStore(const CostModel& model, const std::string& name) {
  const VariableProfile& v = model.variable(name);
  if (!v.serializable) return Cost::Infinite();
  const auto& overrides = model.profile().store_s;
  if (auto it = overrides.find(name); it != overrides.end()) return Cost(it->second);
  return TransferTime(model.profile(), v.size_bytes);
}

Cost EstimateLoad(const CostModel& model, const std::string& name) {
  const VariableProfile& v = model.variable(name);
  // An undeserializable variable still looks loadable here; the failure only
  // surfaces during restore.
  const auto& overrides = model.profile().load_s;
  if (auto it = overrides.find(name); it != overrides.end()) return Cost(it->second);
  return TransferTime(model.profile(), v.size_bytes);
}

Cost MigrationCost(const CostModel& model, const std::string& name) {
  return model.profile().alpha * EstimateStore(model, name) +
         EstimateLoad(model, name);
}

Cost MigrationCost(const CostModel& model, const std::set<std::string>& names) {
  Cost total = Cost::Zero();
  for (const auto& name : names) total += MigrationCost(model, name);
  return total;
}

Cost RerunCost(const CostModel& model, const Ahg& ahg, Timestamp t) {
  const CellExecution& cell = ahg.cell(t);
  if (cell.never_rerun) return Cost::Infinite();
  if (cell.nondeterministic && model.nondeterministic_guard()) {
    return Cost::Infinite();
  }
  const auto& runtimes = model.runtimes();
  if (auto it = runtimes.find(t.value); it != runtimes.end()) return Cost(it->second);
  return Cost(cell.runtime_s);
}

Cost RerunCost(const CostModel& model, const Ahg& ahg,
               const std::vector<Timestamp>& cells) {
  Cost total = Cost::Zero();
  for (Timestamp t : cells) total += RerunCost(model, ahg, t);
  return total;
}

Cost RecomputeCost(const CostModel& model, const Ahg& ahg,
                   const std::set<std::string>& names,
                   const std::set<std::string>& ground) {
  std::vector<VariableSnapshot> targets;
  for (const auto& name : names) {
    auto vs = ahg.active(name);
    if (!vs) {
      throw Error(ErrorCode::kUnknownVariable,
                  "variable '" + name + "' has no active snapshot", {name});
    }
    targets.push_back(*vs);
  }
  return RerunCost(model, ahg, CollectReq(ahg, targets, ground).cells);
}

Cost TotalCost(const CostModel& model, const Ahg& ahg,
               const std::set<std::string>& migrate) {
  std::set<std::string> recompute;
  for (const auto& name : ActiveSnapshots(ahg).names()) {
    if (!migrate.contains(name)) recompute.insert(name);
  }
  return MigrationCost(model, migrate) + RecomputeCost(model, ahg, recompute, migrate);
}

bool LinkedPairs::linked(const std::string& a, const std::string& b) const {
  return a < b ? pairs.contains({a, b}) : pairs.contains({b, a});
}

LinkedPairs ComputeLinkedPairs(const SimHeap& heap,
                               const std::set<std::string>& names) {
  // Invert reachability once instead of intersecting every pair of graphs.
  std::unordered_map<ObjectId, std::vector<const std::string*>> owners;
  for (const auto& name : names) {
    for (ObjectId id : ReachableObjects(heap, name)) owners[id].push_back(&name);
  }
  LinkedPairs out;
  for (const auto& [id, who] : owners) {
    for (std::size_t i = 0; i < who.size(); ++i) {
      for (std::size_t j = i + 1; j < who.size(); ++j) {
        const std::string& a = *who[i];
        const std::string& b = *who[j];
        out.pairs.emplace(std::min(a, b), std::max(a, b));
      }
    }
  }
  return out;
}

bool SatisfiesLinkedConstraint(const LinkedPairs& linked,
                               const std::set<std::string>& migrate) {
  for (const auto& [a, b] : linked.pairs) {
    if (migrate.contains(a) != migrate.contains(b)) return false;
  }
  return true;
}

}  // namespace statecut
