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

#include "statecut/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

#include "statecut/error.hpp"

namespace statecut {

std::size_t FlowGraph::snapshot_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(),
      [](const Node& n) { return n.kind == NodeKind::kSnapshot; }));
}

std::size_t FlowGraph::cell_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(),
      [](const Node& n) { return n.kind == NodeKind::kCell; }));
}

FlowGraph BuildFlowGraph(const Ahg& ahg, const CostModel& cost,
                         const PlanConstraints& constraints) {
  FlowGraph g;
  g.profile = cost.profile();
  g.nodes.push_back({FlowGraph::NodeKind::kSource, {}, {}});
  g.nodes.push_back({FlowGraph::NodeKind::kSink, {}, {}});

  ActiveSet active = ActiveSnapshots(ahg);
  std::set<std::string> names = active.names();
  std::map<std::string, std::size_t> vs_node;
  for (const auto& [name, vs] : active.snapshots) {
    vs_node[name] = g.nodes.size();
    g.nodes.push_back({FlowGraph::NodeKind::kSnapshot, vs, {}});
    auto versions = ahg.versions(name);
    g.producers[name] = std::set<Timestamp>(versions.begin(), versions.end());
  }
  std::map<Timestamp, std::size_t> ce_node;
  for (const auto& cell : ahg.cells()) {
    ce_node[cell.t] = g.nodes.size();
    g.nodes.push_back({FlowGraph::NodeKind::kCell, {}, cell.t});
    g.arcs.push_back({ce_node[cell.t], FlowGraph::kSink, RerunCost(cost, ahg, cell.t)});
  }

  for (const auto& [name, vs] : active.snapshots) {
    std::size_t v = vs_node.at(name);
    Cost migrate = constraints.forced_recompute.contains(name)
                       ? Cost::Infinite()
                       : MigrationCost(cost, name);
    g.arcs.push_back({FlowGraph::kSource, v, migrate});
    if (constraints.forced_migrate.contains(name)) {
      g.arcs.push_back({v, FlowGraph::kSink, Cost::Infinite()});
    }
    // Every other active variable is available as ground; whether it is
    // really migrated is decided by the cut, and if it is recomputed its
    // own arcs pull in the cells behind it.
    std::set<std::string> ground = names;
    ground.erase(name);
    for (Timestamp t : CollectReq(ahg, std::span(&vs, 1), ground).cells) {
      g.arcs.push_back({v, ce_node.at(t), Cost::Infinite()});
    }
  }

  for (const auto& [a, b] : constraints.linked.pairs) {
    auto ia = vs_node.find(a);
    auto ib = vs_node.find(b);
    if (ia == vs_node.end() || ib == vs_node.end()) continue;
    g.arcs.push_back({ia->second, ib->second, Cost::Infinite(), true});
    g.arcs.push_back({ib->second, ia->second, Cost::Infinite(), true});
  }
  return g;
}

namespace {

struct ResidualEdge {
  std::size_t to;
  std::size_t rev;
  double cap;
  bool infinite;
};

class Residual {
 public:
  explicit Residual(const FlowGraph& g) : adj_(g.nodes.size()) {
    for (const auto& arc : g.arcs) {
      std::size_t i = adj_[arc.from].size();
      std::size_t j = adj_[arc.to].size() + (arc.from == arc.to ? 1 : 0);
      bool inf = arc.capacity.is_infinite();
      adj_[arc.from].push_back({arc.to, j, inf ? 0.0 : arc.capacity.seconds(), inf});
      adj_[arc.to].push_back({arc.from, i, 0.0, false});
      if (!inf) total_finite_ += arc.capacity.seconds();
    }
    eps_ = 1e-12 * std::max(1.0, total_finite_);
  }

  bool open(const ResidualEdge& e) const { return e.infinite || e.cap > eps_; }

  /// Nodes reachable from `from` through open edges (or only through
  /// infinite edges when `infinite_only`).
  std::vector<bool> Reachable(std::size_t from, bool infinite_only) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& e : adj_[u]) {
        bool usable = infinite_only ? e.infinite : open(e);
        if (usable && !seen[e.to]) {
          seen[e.to] = true;
          queue.push_back(e.to);
        }
      }
    }
    return seen;
  }

  /// Edmonds-Karp. Requires that no all-infinite source-sink path exists.
  double MaxFlow(std::size_t s, std::size_t t) {
    double flow = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> parent(adj_.size());
    while (true) {
      std::vector<bool> seen(adj_.size(), false);
      std::deque<std::size_t> queue{s};
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t k = 0; k < adj_[u].size(); ++k) {
          const auto& e = adj_[u][k];
          if (!seen[e.to] && open(e)) {
            seen[e.to] = true;
            parent[e.to] = {u, k};
            queue.push_back(e.to);
          }
        }
      }
      if (!seen[t]) return flow;
      double bottleneck = std::numeric_limits<double>::infinity();
      for (std::size_t v = t; v != s; v = parent[v].first) {
        const auto& e = adj_[parent[v].first][parent[v].second];
        if (!e.infinite) bottleneck = std::min(bottleneck, e.cap);
      }
      if (!std::isfinite(bottleneck)) {
        throw Error(ErrorCode::kInternal, "augmenting path without finite arc");
      }
      for (std::size_t v = t; v != s; v = parent[v].first) {
        auto& e = adj_[parent[v].first][parent[v].second];
        if (!e.infinite) e.cap -= bottleneck;
        adj_[e.to][e.rev].cap += bottleneck;
      }
      flow += bottleneck;
    }
  }

 private:
  std::vector<std::vector<ResidualEdge>> adj_;
  double total_finite_ = 0.0;
  double eps_ = 0.0;
};

std::set<std::string> OverwrittenByRerun(
    const std::map<std::string, std::set<Timestamp>>& producers,
    const std::set<std::string>& migrate, const std::vector<Timestamp>& rerun) {
  std::set<std::string> out;
  for (const auto& name : migrate) {
    auto it = producers.find(name);
    if (it == producers.end()) continue;
    for (Timestamp t : rerun) {
      if (it->second.contains(t)) {
        out.insert(name);
        break;
      }
    }
  }
  return out;
}

// Variables for which every admissible choice is infinite. Linked variables
// decide jointly, so the check runs per linked component.
std::vector<std::string> InfeasibleVariables(const FlowGraph& g) {
  std::size_t n = g.nodes.size();
  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](std::size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  std::vector<bool> migrate_inf(n, false), recompute_inf(n, false), sink_inf(n, false);
  for (const auto& arc : g.arcs) {
    if (arc.to == FlowGraph::kSink && arc.capacity.is_infinite()) sink_inf[arc.from] = true;
  }
  for (const auto& arc : g.arcs) {
    if (arc.linked) comp[find(arc.from)] = find(arc.to);
    if (arc.from == FlowGraph::kSource && arc.capacity.is_infinite()) {
      migrate_inf[arc.to] = true;
    }
    // Recomputing is ruled out by a forced-migrate arc or by a required
    // cell that cannot be rerun.
    if (g.nodes[arc.from].kind == FlowGraph::NodeKind::kSnapshot &&
        arc.capacity.is_infinite() && !arc.linked &&
        (arc.to == FlowGraph::kSink || sink_inf[arc.to])) {
      recompute_inf[arc.from] = true;
    }
  }
  std::map<std::size_t, std::pair<bool, bool>> by_comp;
  for (std::size_t v = 0; v < n; ++v) {
    if (g.nodes[v].kind != FlowGraph::NodeKind::kSnapshot) continue;
    auto& [m, r] = by_comp[find(v)];
    m = m || migrate_inf[v];
    r = r || recompute_inf[v];
  }
  std::vector<std::string> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (g.nodes[v].kind != FlowGraph::NodeKind::kSnapshot) continue;
    auto [m, r] = by_comp[find(v)];
    if (m && r) out.push_back(g.nodes[v].snapshot.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

[[noreturn]] void ThrowInfeasible(std::vector<std::string> names) {
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::kInfeasible,
              "no finite plan; every option is infinite for: " +
                  (list.empty() ? std::string("(unknown)") : list),
              std::move(names));
}

}  // namespace

ReplicationPlan MinCutPlan(const FlowGraph& graph) {
  Residual residual(graph);
  if (residual.Reachable(FlowGraph::kSource, true)[FlowGraph::kSink]) {
    ThrowInfeasible(InfeasibleVariables(graph));
  }
  double flow = residual.MaxFlow(FlowGraph::kSource, FlowGraph::kSink);
  std::vector<bool> source_side = residual.Reachable(FlowGraph::kSource, false);

  ReplicationPlan plan;
  double cut = 0.0;
  for (const auto& arc : graph.arcs) {
    if (source_side[arc.from] && !source_side[arc.to]) {
      if (arc.capacity.is_infinite()) {
        throw Error(ErrorCode::kInternal, "minimum cut crosses an infinite arc");
      }
      cut += arc.capacity.seconds();
    }
  }
  if (std::abs(cut - flow) > 1e-9 * std::max(1.0, std::abs(flow))) {
    throw Error(ErrorCode::kInternal, "cut value " + std::to_string(cut) +
                                          " differs from max flow " +
                                          std::to_string(flow));
  }
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    const auto& node = graph.nodes[v];
    if (node.kind == FlowGraph::NodeKind::kSnapshot && !source_side[v]) {
      plan.migrate.insert(node.snapshot.name);
    } else if (node.kind == FlowGraph::NodeKind::kCell && source_side[v]) {
      plan.rerun.push_back(node.cell);
    }
  }
  std::sort(plan.rerun.begin(), plan.rerun.end());
  plan.cost = Cost(cut);
  plan.overwrite_after_rerun = OverwrittenByRerun(graph.producers, plan.migrate, plan.rerun);
  plan.alpha = graph.profile.alpha;
  plan.bandwidth_bytes_per_s = graph.profile.bandwidth_bytes_per_s;
  plan.latency_s = graph.profile.latency_s;
  return plan;
}

ReplicationPlan EvaluatePlan(const Ahg& ahg, const CostModel& cost,
                             const std::set<std::string>& migrate) {
  ReplicationPlan plan;
  plan.migrate = migrate;
  std::vector<VariableSnapshot> targets;
  std::map<std::string, std::set<Timestamp>> producers;
  for (const auto& [name, vs] : ActiveSnapshots(ahg).snapshots) {
    if (!migrate.contains(name)) targets.push_back(vs);
    auto versions = ahg.versions(name);
    producers[name] = std::set<Timestamp>(versions.begin(), versions.end());
  }
  plan.rerun = CollectReq(ahg, targets, migrate).cells;
  plan.cost = MigrationCost(cost, migrate) + RerunCost(cost, ahg, plan.rerun);
  plan.overwrite_after_rerun = OverwrittenByRerun(producers, plan.migrate, plan.rerun);
  plan.alpha = cost.profile().alpha;
  plan.bandwidth_bytes_per_s = cost.profile().bandwidth_bytes_per_s;
  plan.latency_s = cost.profile().latency_s;
  return plan;
}

ReplicationPlan BruteForcePlan(const Ahg& ahg, const CostModel& cost,
                               const PlanConstraints& constraints,
                               std::size_t max_variables) {
  std::set<std::string> name_set = ActiveSnapshots(ahg).names();
  std::vector<std::string> names(name_set.begin(), name_set.end());
  if (names.size() > max_variables || names.size() >= 63) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(names.size()) + " active variables exceed the bound of " +
                    std::to_string(max_variables));
  }
  constexpr double kTieTolerance = 1e-9;
  std::optional<std::vector<std::string>> best;
  Cost best_cost = Cost::Infinite();
  const std::uint64_t subsets = std::uint64_t{1} << names.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::set<std::string> s;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) s.insert(names[i]);
    }
    bool admissible = SatisfiesLinkedConstraint(constraints.linked, s);
    for (const auto& f : constraints.forced_migrate) {
      admissible = admissible && (s.contains(f) || !name_set.contains(f));
    }
    for (const auto& f : constraints.forced_recompute) {
      admissible = admissible && !s.contains(f);
    }
    if (!admissible) continue;
    Cost c = TotalCost(cost, ahg, s);
    if (c.is_infinite()) continue;
    std::vector<std::string> candidate(s.begin(), s.end());
    bool better = false;
    if (!best) {
      better = true;
    } else if (c.seconds() < best_cost.seconds() - kTieTolerance) {
      better = true;
    } else if (c.seconds() <= best_cost.seconds() + kTieTolerance) {
      better = candidate.size() < best->size() ||
               (candidate.size() == best->size() && candidate < *best);
    }
    if (better) {
      best = std::move(candidate);
      best_cost = c;
    }
  }
  if (!best) {
    ThrowInfeasible(InfeasibleVariables(BuildFlowGraph(ahg, cost, constraints)));
  }
  return EvaluatePlan(ahg, cost, std::set<std::string>(best->begin(), best->end()));
}

BaselinePlanSet BaselinePlans(const Ahg& ahg, const CostModel& cost) {
  BaselinePlanSet out;
  out.copy_all = EvaluatePlan(ahg, cost, ActiveSnapshots(ahg).names());
  out.rerun_all = EvaluatePlan(ahg, cost, {});
  out.rerun_all.rerun.clear();
  for (const auto& cell : ahg.cells()) out.rerun_all.rerun.push_back(cell.t);
  out.rerun_all.cost = RerunCost(cost, ahg, out.rerun_all.rerun);
  return out;
}

PlanConstraints SessionConstraints(const Session& session,
                                   const PlannerOptions& options) {
  PlanConstraints c;
  std::set<std::string> names = ActiveSnapshots(session.ahg).names();
  if (options.linked) c.linked = ComputeLinkedPairs(session.heap, names);
  for (const auto& [name, annotation] : session.annotations) {
    if (!names.contains(name)) continue;
    if (annotation == VariableAnnotation::kAlwaysCopy) {
      c.forced_migrate.insert(name);
    } else {
      c.forced_recompute.insert(name);
    }
  }
  return c;
}

ReplicationPlan PlanSession(Session& session, const PlannerOptions& options) {
  session.cost.ProfileVariables(session.heap, ActiveSnapshots(session.ahg).names());
  return MinCutPlan(
      BuildFlowGraph(session.ahg, session.cost, SessionConstraints(session, options)));
}

}  // namespace statecut
