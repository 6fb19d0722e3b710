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

// Acceptance gate: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "statecut/cli.hpp"
#include "statecut/error.hpp"
#include "statecut/generator.hpp"
#include "statecut/monitor.hpp"
#include "statecut/planner.hpp"
#include "statecut/replicator.hpp"
#include "statecut/serialization.hpp"
#include "statecut/verify.hpp"
#include "test_util.hpp"

namespace statecut {
namespace {

using namespace statecut::testing;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void Require(bool ok, const std::string& why) {
    if (!ok && pass) detail << "first failure: " << why << "; ";
    pass = pass && ok;
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Session LoadSession(const std::string& name, MonitorOptions opt = {}) {
  return RunTrace(LoadTrace(TraceFile(name)), opt);
}

// Generated sessions for the end-to-end criteria: rates cycle through the
// required ranges so every combination up to the stated maxima appears.
GeneratorOptions EndToEnd(std::uint64_t seed) {
  GeneratorOptions g;
  g.seed = seed;
  g.cells = 4 + seed % 22;
  g.max_variables = 6 + seed % 14;
  g.alias_density = 0.5 * static_cast<double>(seed % 6) / 5.0;
  g.unserializable_rate = 0.3 * static_cast<double>(seed % 4) / 3.0;
  g.undeserializable_rate = 0.1 * static_cast<double>(seed % 3) / 2.0;
  g.never_rerun_rate = 0.05;
  g.delete_rate = 0.05;
  return g;
}

void Criterion1(Verdict& v) {
  auto start = Clock::now();
  int instances = 0, feasible = 0, with_links = 0, with_unser = 0, with_never = 0;
  for (std::uint64_t seed = 1; instances < 600; ++seed) {
    Trace t = GenerateTrace(oracle::SmallInstance(seed));
    std::vector<CellRecord> records;
    Session s = RunTrace(t, {}, &records);
    oracle::Instance in = oracle::Build(s.heap, records, s.cost.profile());
    if (in.active.size() > 12 || records.size() > 10) continue;
    ++instances;
    with_links += !in.linked.empty();
    with_never += std::any_of(records.begin(), records.end(),
                              [](const CellRecord& r) { return r.never_rerun; });
    with_unser += std::any_of(in.weight.begin(), in.weight.end(),
                              [](const auto& w) { return w.second == oracle::kInf; });
    double best = oracle::Optimum(in);
    ReplicationPlan plan;
    try {
      plan = PlanSession(s);
    } catch (const Error& e) {
      v.Require(e.code() == ErrorCode::kInfeasible && best == oracle::kInf,
                "unexpected infeasible at seed " + std::to_string(seed));
      continue;
    }
    ++feasible;
    ReplicationPlan bf = BruteForcePlan(s.ahg, s.cost, SessionConstraints(s));
    double tol = 1e-9 * std::max(1.0, best);
    v.Require(std::abs(plan.cost.seconds() - bf.cost.seconds()) <= tol,
              "min-cut != brute force at seed " + std::to_string(seed));
    v.Require(std::abs(plan.cost.seconds() - best) <= tol,
              "min-cut != oracle at seed " + std::to_string(seed));
    v.Require(oracle::LinkedOk(in, plan.migrate),
              "linked pair split at seed " + std::to_string(seed));
  }
  double secs = Seconds(start);
  v.Require(secs < 10.0, "took too long");
  v.Require(with_links > 0 && with_unser > 0 && with_never > 0, "coverage gap");
  v.detail << instances << " instances (" << feasible << " feasible; " << with_links
           << " with linked pairs, " << with_unser << " with unserializable, " << with_never
           << " with never-rerun) in " << secs << " s";
}

struct EndToEndStats {
  int sessions = 0, planned = 0, feasible = 0, verified = 0, fallbacks = 0;
  int payload_ok = 0, dominance_ok = 0, roundtrip_ok = 0, roundtrip_checked = 0;
  std::string first_failure;
};

EndToEndStats RunEndToEnd() {
  EndToEndStats st;
  for (std::uint64_t seed = 1; st.feasible < 550 && seed <= 5000; ++seed) {
    ++st.sessions;
    auto fail = [&](const std::string& what) {
      if (st.first_failure.empty()) st.first_failure = what + " at seed " + std::to_string(seed);
    };
    Session s = RunTrace(GenerateTrace(EndToEnd(seed)));
    ReplicationPlan plan;
    try {
      plan = PlanSession(s);
    } catch (const Error&) {
      continue;
    }
    ++st.planned;
    BaselinePlanSet base = BaselinePlans(s.ahg, s.cost);
    if (plan.cost <= base.copy_all.cost && plan.cost <= base.rerun_all.cost) {
      ++st.dominance_ok;
    } else {
      fail("plan worse than a baseline");
    }
    Checkpoint ck = MakeCheckpoint(s, plan);
    if (ck.payload_logical_bytes() <= CopyAllPayloadBytes(s.heap, ActiveSnapshots(s.ahg).names())) {
      ++st.payload_ok;
    } else {
      fail("payload larger than copy-all");
    }
    std::string bytes = EncodeCheckpoint(ck);
    RestoreResult r;
    try {
      r = Restore(DecodeCheckpoint(bytes));
    } catch (const Error& e) {
      // Undeserializable data whose producers cannot rerun: no plan exists.
      if (e.code() != ErrorCode::kUnreconstructable) fail(e.what());
      continue;
    }
    ++st.feasible;
    st.fallbacks += !r.fallback.empty();
    if (Verify(s.heap, r.session.heap).ok()) {
      ++st.verified;
    } else {
      fail("restored session differs");
    }
    ++st.roundtrip_checked;
    Checkpoint again = MakeCheckpoint(r.session, plan);
    if (EncodeManifest(again) == EncodeManifest(ck) && EncodePayload(again) == EncodePayload(ck)) {
      ++st.roundtrip_ok;
    } else {
      fail("re-checkpoint differs");
    }
  }
  return st;
}

void Criterion2(Verdict& v, const EndToEndStats& st) {
  v.Require(st.feasible >= 500, "fewer than 500 feasible sessions");
  v.Require(st.verified == st.feasible, st.first_failure);
  v.Require(st.fallbacks > 0, "no fallback path exercised");
  v.detail << st.verified << "/" << st.feasible << " feasible sessions verified ("
           << st.sessions << " generated, " << st.fallbacks << " via fallback recompute)";
}

void Criterion3(Verdict& v) {
  auto restore_report = [](const std::string& name, MonitorOptions mon, PlannerOptions plan) {
    Session s = LoadSession(name, mon);
    ReplicationPlan p = PlanSession(s, plan);
    RestoreResult r = Restore(DecodeCheckpoint(EncodeCheckpoint(MakeCheckpoint(s, p))));
    return Verify(LoadSession(name).heap, r.session.heap);
  };
  VerificationReport linked_on = restore_report("alias_no_linked", {}, {});
  VerificationReport linked_off = restore_report("alias_no_linked", {}, {.linked = false});
  VerificationReport graph_on = restore_report("swap_no_idgraph", {}, {});
  VerificationReport graph_off =
      restore_report("swap_no_idgraph", {.use_id_graph = false}, {});
  v.Require(linked_on.ok() && graph_on.ok(), "full system failed on ablation instances");
  v.Require(linked_off.value_equivalent && !linked_off.isomorphic,
            "no-linked did not break isomorphism");
  v.Require(!graph_off.value_equivalent, "no-idgraph did not break values");
  v.detail << "no-linked: " << linked_off.violations.size()
           << " identity violations; no-idgraph: value diffs in";
  for (const auto& n : graph_off.value_diffs) v.detail << " " << n;
}

void Criterion4(Verdict& v) {
  Session s = LoadSession("sklearn_df");
  s.cost.mutable_profile().alpha = 1.0;
  ReplicationPlan slow = PlanSession(s);
  s.cost.mutable_profile().alpha = kRestoreObjectiveAlpha;
  ReplicationPlan fast = PlanSession(s);
  v.Require(slow.migrate.empty() && slow.cost == Cost(5.5), "alpha=1 should recompute");
  v.Require(fast.migrate == std::set<std::string>{"df"}, "alpha=0.05 should migrate");
  v.Require(std::abs(fast.cost.seconds() - (0.05 * 6.19 + 1.17)) < 1e-12, "weighted cost");
  v.detail << "alpha=1: recompute at " << slow.cost.seconds() << " s (store+load 7.36 s); "
           << "alpha=0.05: migrate at " << fast.cost.seconds() << " s";
}

void Criterion5(Verdict& v) {
  std::vector<CellRecord> records;
  Session s = RunTrace(LoadTrace(TraceFile("five_cell")), {}, &records);
  ReplicationPlan plan = PlanSession(s);
  oracle::Instance in = oracle::Build(s.heap, records, s.cost.profile());
  double best = oracle::Optimum(in);
  int optimal = 0;
  auto names = in.names();
  for (std::uint64_t mask = 0; mask < (1u << names.size()); ++mask) {
    std::set<std::string> m;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (mask >> i & 1) m.insert(names[i]);
    }
    if (oracle::LinkedOk(in, m) && std::abs(oracle::Cost(in, m) - best) < 1e-9) ++optimal;
  }
  v.Require(plan.migrate == std::set<std::string>{"l1", "2dlist1", "gen"}, "migrate set");
  v.Require(plan.rerun == std::vector<Timestamp>{T(1), T(2), T(3)}, "rerun set");
  v.Require(std::abs(plan.cost.seconds() - best) < 1e-9 && optimal == 1,
            "brute force disagrees or optimum not unique");
  v.Require(in.linked == std::set<std::pair<std::string, std::string>>{{"2dlist1", "l1"}},
            "linked pairs");
  v.detail << "migrate {l1, 2dlist1, gen}, rerun {t1, t2, t3}, cost " << plan.cost.seconds()
           << " s; unique optimum over " << (1u << names.size()) << " subsets";
}

void Criterion6(Verdict& v, const EndToEndStats& st) {
  int small_ok = 0, small = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    Session s = RunTrace(GenerateTrace(oracle::SmallInstance(seed)));
    ReplicationPlan plan;
    try {
      plan = PlanSession(s);
    } catch (const Error&) {
      continue;
    }
    ++small;
    BaselinePlanSet base = BaselinePlans(s.ahg, s.cost);
    small_ok += plan.cost <= base.copy_all.cost && plan.cost <= base.rerun_all.cost;
  }
  Session m = LoadSession("motivating");
  ReplicationPlan plan = PlanSession(m);
  BaselinePlanSet base = BaselinePlans(m.ahg, m.cost);
  v.Require(small_ok == small, "small instance worse than baseline");
  v.Require(st.dominance_ok == st.planned, "generated session worse than baseline");
  v.Require(plan.cost < base.copy_all.cost && plan.cost < base.rerun_all.cost,
            "not strict on constructed scenario");
  v.detail << small_ok + st.dominance_ok << " generated plans within both baselines; "
           << "constructed: mixed " << plan.cost.seconds() << " s < copy-all "
           << base.copy_all.cost.seconds() << " s < rerun-all "
           << base.rerun_all.cost.seconds() << " s";
}

void Criterion7(Verdict& v) {
  // Several seeds per size smooth out instance-to-instance variation.
  auto bench = [](std::size_t cells) {
    BenchResult sum;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      BenchResult r = RunBench(cells, seed, 5);
      sum.plan_ms = std::max(sum.plan_ms, r.plan_ms);
      sum.ahg_bytes = std::max(sum.ahg_bytes, r.ahg_bytes);
      sum.feasible = sum.feasible && r.feasible;
    }
    return sum;
  };
  BenchResult half = bench(1000);
  BenchResult full = bench(2000);
  BenchResult twice = bench(4000);
  v.Require(half.feasible && full.feasible && twice.feasible, "bench session had no plan");
  v.Require(full.plan_ms < 1000.0, "planning slower than 1 s");
  v.Require(full.ahg_bytes < 16u * 1024 * 1024, "AHG larger than 16 MB");
  auto ratio_ok = [](double a, double b) { return b <= 3.0 * std::max(a, 1e-3); };
  v.Require(ratio_ok(half.plan_ms, full.plan_ms) && ratio_ok(full.plan_ms, twice.plan_ms),
            "plan time grows faster than linear");
  v.Require(ratio_ok(static_cast<double>(half.ahg_bytes), static_cast<double>(full.ahg_bytes)) &&
                ratio_ok(static_cast<double>(full.ahg_bytes), static_cast<double>(twice.ahg_bytes)),
            "AHG memory grows faster than linear");
  v.detail << "worst of 5 sessions, 2000 cells: plan " << full.plan_ms << " ms, AHG " << full.ahg_bytes / 1024.0
           << " KiB; 1000/2000/4000 plan ms " << half.plan_ms << "/" << full.plan_ms << "/"
           << twice.plan_ms << ", AHG KiB " << half.ahg_bytes / 1024.0 << "/"
           << full.ahg_bytes / 1024.0 << "/" << twice.ahg_bytes / 1024.0;
}

// Adds false read edges and false writes. Each false write of y by cell t
// is paired with a read of y's previous version, so y stays reproducible.
void InjectFalseEdges(Ahg& ahg, std::mt19937_64& rng) {
  const auto& cells = ahg.cells();
  if (cells.size() < 2) return;
  std::set<std::string> ever_deleted;
  for (const auto& c : cells) {
    for (const auto& n : ahg.deletes_of(c.t)) ever_deleted.insert(n);
  }
  int injections = 1 + static_cast<int>(rng() % 4);
  for (int k = 0; k < injections; ++k) {
    const CellExecution& cell = cells[1 + rng() % (cells.size() - 1)];
    std::vector<VariableSnapshot> earlier;
    for (const auto& [name, ts] : ahg.all_versions()) {
      for (Timestamp t : ts) {
        if (t < cell.t) earlier.push_back({name, t});
      }
    }
    if (earlier.empty()) continue;
    if (rng() % 2 == 0) {
      ahg.AddReadDependency(earlier[rng() % earlier.size()], cell.t);
      continue;
    }
    VariableSnapshot vs = earlier[rng() % earlier.size()];
    if (ever_deleted.contains(vs.name)) continue;
    VariableSnapshot prev{vs.name, Timestamp{}};
    for (Timestamp t : ahg.versions(vs.name)) {
      if (t < cell.t) prev.t = t;
    }
    ahg.AddReadDependency(prev, cell.t);
    ahg.AddWriteDependency(cell.t, vs.name);
  }
}

void Criterion8(Verdict& v) {
  std::mt19937_64 rng(2024);
  int sessions = 0, verified = 0, superset = 0, grew = 0;
  for (std::uint64_t seed = 1; sessions < 220 && seed < 5000; ++seed) {
    GeneratorOptions g = EndToEnd(seed);
    g.never_rerun_rate = 0;
    g.undeserializable_rate = 0;
    Session s = RunTrace(GenerateTrace(g));
    ActiveSet before_active = ActiveSnapshots(s.ahg);
    std::map<std::string, std::vector<Timestamp>> before;
    for (const auto& vs : before_active.list()) before[vs.name] = Req(s.ahg, vs, {});
    InjectFalseEdges(s.ahg, rng);
    ReplicationPlan plan;
    try {
      plan = PlanSession(s);
    } catch (const Error&) {
      continue;
    }
    ++sessions;
    bool is_superset = true;
    ActiveSet after_active = ActiveSnapshots(s.ahg);
    for (const auto& [name, cells] : before) {
      auto after = Req(s.ahg, after_active.snapshots.at(name), {});
      for (Timestamp t : cells) {
        is_superset = is_superset && std::find(after.begin(), after.end(), t) != after.end();
      }
      grew += after.size() > cells.size();
    }
    superset += is_superset;
    try {
      RestoreResult r = Restore(DecodeCheckpoint(EncodeCheckpoint(MakeCheckpoint(s, plan))));
      verified += Verify(s.heap, r.session.heap).ok();
    } catch (const Error& e) {
      v.Require(false, std::string("restore threw: ") + e.what());
    }
  }
  v.Require(sessions >= 200, "fewer than 200 sessions");
  v.Require(verified == sessions, "restoration incorrect under injected edges");
  v.Require(superset == sessions, "req shrank under injection");
  v.detail << verified << "/" << sessions << " verified, req superset in " << superset << "/"
           << sessions << " (" << grew << " req lists grew)";
}

void Criterion9(Verdict& v, const EndToEndStats& st) {
  Session s = LoadSession("train_test_split");
  ReplicationPlan plan = PlanSession(s);
  Checkpoint ck = MakeCheckpoint(s, plan);
  double copy_all = static_cast<double>(CopyAllPayloadBytes(s.heap, ActiveSnapshots(s.ahg).names()));
  double saving = 1.0 - static_cast<double>(ck.payload_logical_bytes()) / copy_all;
  v.Require(st.payload_ok == st.planned, "payload larger than copy-all");
  v.Require(saving >= 0.5, "constructed instance saves less than half");
  v.detail << "payload <= copy-all on " << st.payload_ok << " generated sessions; "
           << "split instance payload " << 100.0 * saving << "% smaller";
}

void Criterion10(Verdict& v, const EndToEndStats& st) {
  v.Require(st.roundtrip_ok == st.roundtrip_checked, st.first_failure);
  Session s = LoadSession("five_cell");
  ReplicationPlan plan = PlanSession(s);
  auto path = TempPath("acceptance_five_cell.ck");
  Checkpoint ck = WriteCheckpoint(s, plan, path);
  RestoreResult r = Restore(ReadCheckpoint(path));
  auto path2 = TempPath("acceptance_five_cell_again.ck");
  WriteCheckpoint(r.session, plan, path2);
  std::string a = EncodeCheckpoint(ReadCheckpoint(path));
  std::string b = EncodeCheckpoint(ReadCheckpoint(path2));
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
  v.Require(a == b, "file round trip differs");
  v.detail << st.roundtrip_ok << "/" << st.roundtrip_checked
           << " restored sessions re-checkpoint to identical manifest and payload bytes";
}

}  // namespace
}  // namespace statecut

int main() {
  using namespace statecut;
  struct Item {
    int id;
    const char* title;
    std::function<void(Verdict&)> run;
  };
  std::printf("running end-to-end sessions...\n");
  std::fflush(stdout);
  EndToEndStats st = RunEndToEnd();
  std::vector<Item> items{
      {1, "min-cut optimality", Criterion1},
      {2, "end-to-end correctness", [&](Verdict& v) { Criterion2(v, st); }},
      {3, "ablation failures reproduced", Criterion3},
      {4, "alpha flip", Criterion4},
      {5, "worked five-cell example", Criterion5},
      {6, "dominance over baselines", [&](Verdict& v) { Criterion6(v, st); }},
      {7, "scalability", Criterion7},
      {8, "false-positive edge robustness", Criterion8},
      {9, "checkpoint size", [&](Verdict& v) { Criterion9(v, st); }},
      {10, "format round trip", [&](Verdict& v) { Criterion10(v, st); }},
  };
  int failed = 0;
  for (auto& item : items) {
    Verdict v;
    try {
      item.run(v);
    } catch (const std::exception& e) {
      v.Require(false, std::string("exception: ") + e.what());
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", item.id, item.title,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
