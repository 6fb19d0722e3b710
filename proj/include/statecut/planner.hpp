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

// Replication planner.
//
// Chooses which active variables to migrate (copy) and which to recompute
// by rerunning cells, minimizing total cost subject to the linked-variable
// constraint. The problem reduces exactly to an s-t minimum cut:
//
//   src -> vs      capacity w_M(x)        (cut when x is migrated)
//   ce  -> sink    capacity rerun(c)      (cut when c is rerun)
//   vs  -> ce      infinite, c in req(x)  (recomputing x forces its cells)
//   vs <-> vs      infinite, x linked y   (joint decision)

#ifndef STATECUT_PLANNER_HPP_
#define STATECUT_PLANNER_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "statecut/ahg.hpp"
#include "statecut/cost_model.hpp"
#include "statecut/session.hpp"
#include "statecut/types.hpp"

namespace statecut {

struct ReplicationPlan {
  std::set<std::string> migrate;
  /// Cells to rerun, oldest first.
  std::vector<Timestamp> rerun;
  Cost cost;
  /// Migrated variables that a rerun cell also produces; the stored copy
  /// overwrites the recomputed one.
  std::set<std::string> overwrite_after_rerun;
  double alpha = 1.0;
  double bandwidth_bytes_per_s = 0.0;
  double latency_s = 0.0;

  bool operator==(const ReplicationPlan&) const = default;
};

/// Decisions fixed before optimization.
struct PlanConstraints {
  LinkedPairs linked;
  std::set<std::string> forced_migrate;
  std::set<std::string> forced_recompute;
};

struct FlowArc {
  std::size_t from = 0;
  std::size_t to = 0;
  Cost capacity;
  bool linked = false;
};

struct FlowGraph {
  enum class NodeKind { kSource, kSink, kSnapshot, kCell };
  struct Node {
    NodeKind kind = NodeKind::kSource;
    VariableSnapshot snapshot;  // kSnapshot only
    Timestamp cell;             // kCell only
  };

  static constexpr std::size_t kSource = 0;
  static constexpr std::size_t kSink = 1;

  std::vector<Node> nodes;
  std::vector<FlowArc> arcs;
  /// For each active name, the cells that wrote one of its snapshots.
  std::map<std::string, std::set<Timestamp>> producers;
  Profile profile;

  std::size_t snapshot_count() const;
  std::size_t cell_count() const;
};

FlowGraph BuildFlowGraph(const Ahg& ahg, const CostModel& cost,
                         const PlanConstraints& constraints);

/// Solves the cut with shortest-augmenting-path max-flow. Among minimum cuts
/// the one with the smallest source side is chosen. Throws kInfeasible
/// (subjects = variables with no finite option) when the cut is infinite.
ReplicationPlan MinCutPlan(const FlowGraph& graph);

/// Exhaustive search over all 2^n migrate sets that satisfy the
/// constraints. Ties go to the smaller set, then the lexicographically
/// smaller one. Throws kTooLarge when n > max_variables and kInfeasible
/// when every candidate is infinite.
ReplicationPlan BruteForcePlan(const Ahg& ahg, const CostModel& cost,
                               const PlanConstraints& constraints,
                               std::size_t max_variables = 16);

struct BaselinePlanSet {
  ReplicationPlan copy_all;
  ReplicationPlan rerun_all;
};

/// Copy every active variable; rerun every cell. Costs may be infinite.
BaselinePlanSet BaselinePlans(const Ahg& ahg, const CostModel& cost);

/// Fills rerun, overwrite_after_rerun, cost and the profile fields for a
/// given migrate set. The cost is the model's total cost.
ReplicationPlan EvaluatePlan(const Ahg& ahg, const CostModel& cost,
                             const std::set<std::string>& migrate);

struct PlannerOptions {
  /// Enforce the linked-variable constraint (off only for ablations).
  bool linked = true;
};

/// Constraints derived from the session's heap and variable annotations.
PlanConstraints SessionConstraints(const Session& session,
                                   const PlannerOptions& options = {});

/// Profiles the active variables into session.cost and returns the min-cut
/// plan.
ReplicationPlan PlanSession(Session& session, const PlannerOptions& options = {});

}  // namespace statecut

#endif  // STATECUT_PLANNER_HPP_
