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

#include "statecut/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "statecut/error.hpp"
#include "statecut/generator.hpp"
#include "statecut/monitor.hpp"
#include "statecut/planner.hpp"
#include "statecut/replicator.hpp"
#include "statecut/serialization.hpp"
#include "statecut/verify.hpp"

namespace statecut {

std::uint64_t SeedFromEnvironment() {
  const char* s = std::getenv("STATECUT_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kFormatError, "STATECUT_SEED must be an unsigned integer");
  }
}

BenchResult RunBench(std::size_t cells, std::uint64_t seed, int repeats) {
  GeneratorOptions g;
  g.seed = seed;
  g.cells = cells;
  g.max_variables = 40;
  g.template_pool = 25;
  g.alias_density = 0.2;
  g.unserializable_rate = 0.05;
  g.undeserializable_rate = 0.0;
  g.never_rerun_rate = 0.0;
  g.random_profile = false;
  Trace trace = GenerateTrace(g);

  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  Session session = RunTrace(trace);
  auto t1 = Clock::now();

  BenchResult r;
  r.cells = session.ahg.cells().size();
  r.active_variables = ActiveSnapshots(session.ahg).snapshots.size();
  r.ahg_bytes = session.ahg.memory_bytes();
  r.read_edges = session.ahg.read_edge_count();
  r.write_edges = session.ahg.write_edge_count();
  r.monitor_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.plan_ms = std::numeric_limits<double>::infinity();
  for (int i = 0; i < std::max(1, repeats); ++i) {
    auto start = Clock::now();
    try {
      PlanSession(session);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible) throw;
      r.feasible = false;
    }
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    r.plan_ms = std::min(r.plan_ms, ms);
  }
  return r;
}

namespace {

struct PlanFlags {
  std::optional<double> alpha;
  std::optional<double> bandwidth;
  std::optional<double> latency;
  std::string objective;
  std::vector<std::string> ablate;
  bool no_guard = false;

  bool ablated(const std::string& what) const {
    return std::find(ablate.begin(), ablate.end(), what) != ablate.end();
  }
  MonitorOptions monitor() const { return {.use_id_graph = !ablated("no-idgraph")}; }
  PlannerOptions planner() const { return {.linked = !ablated("no-linked")}; }

  void Apply(CostModel& cost) const {
    Profile& p = cost.mutable_profile();
    if (objective == "restore") p.alpha = kRestoreObjectiveAlpha;
    if (objective == "migrate") p.alpha = 1.0;
    if (alpha) p.alpha = *alpha;
    if (bandwidth) p.bandwidth_bytes_per_s = *bandwidth;
    if (latency) p.latency_s = *latency;
    if (no_guard) cost.set_nondeterministic_guard(false);
  }
};

void AddPlanFlags(CLI::App* cmd, PlanFlags& f) {
  auto* alpha = cmd->add_option("--alpha", f.alpha, "Storage-time discount")
                    ->check(CLI::NonNegativeNumber);
  cmd->add_option("--bandwidth", f.bandwidth, "Bytes per second")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--latency", f.latency, "Seconds per transfer")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--objective", f.objective,
                  "migrate (alpha=1) or restore (alpha=0.05)")
      ->check(CLI::IsMember({"migrate", "restore"}))
      ->excludes(alpha);
  cmd->add_option("--ablate", f.ablate, "Disable a mechanism (negative tests)")
      ->check(CLI::IsMember({"no-linked", "no-idgraph"}));
  cmd->add_flag("--no-nondeterministic-guard", f.no_guard,
                "Allow rerunning nondeterministic cells");
}

Session RunTraceFile(const std::string& path, const PlanFlags& flags,
                     std::vector<CellRecord>* records = nullptr) {
  Session s = RunTrace(LoadTrace(path), flags.monitor(), records);
  flags.Apply(s.cost);
  return s;
}

bool IsCheckpointFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string head(kCheckpointMagic.size(), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  return in && head == kCheckpointMagic;
}

RestoreOptions FaultInjection(double rate) {
  RestoreOptions opt;
  if (rate <= 0) return opt;
  std::uint64_t seed = SeedFromEnvironment();
  opt.fail_load = [rate, seed](ObjectId id) {
    std::mt19937_64 rng(seed ^ (id.value * 0x9e3779b97f4a7c15ULL));
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < rate;
  };
  return opt;
}

Json TimingJson(const TimingReport& t) {
  return {{"store_s", CostToJson(t.store)},
          {"load_s", CostToJson(t.load)},
          {"rerun_s", CostToJson(t.rerun)},
          {"alpha", t.alpha},
          {"weighted_total_s", CostToJson(t.weighted_total())},
          {"restore_s", CostToJson(t.restore_time())}};
}

Json NamesJson(const std::set<std::string>& names) { return Json(names); }

int CmdRun(const std::string& path, const PlanFlags& flags, std::ostream& out) {
  std::vector<CellRecord> records;
  Session s = RunTraceFile(path, flags, &records);
  Json cells = Json::array();
  for (const auto& r : records) {
    Json accessed = Json::array();
    for (const auto& vs : r.accessed) accessed.push_back(Json::array({vs.name, vs.t.value}));
    cells.push_back({{"t", r.t.value},
                     {"code_ref", r.code_ref},
                     {"accessed", accessed},
                     {"written", r.written},
                     {"deleted", r.deleted},
                     {"error", r.error ? Json(*r.error) : Json(nullptr)}});
  }
  Json active = Json::object();
  for (const auto& [name, vs] : ActiveSnapshots(s.ahg).snapshots) active[name] = vs.t.value;
  out << Json{{"cells", s.ahg.cells().size()},
              {"snapshots", s.ahg.snapshot_count()},
              {"read_edges", s.ahg.read_edge_count()},
              {"write_edges", s.ahg.write_edge_count()},
              {"ahg_bytes", s.ahg.memory_bytes()},
              {"active", active},
              {"cell_records", cells}}
             .dump(2)
      << "\n";
  return kExitOk;
}

int CmdPlan(const std::string& path, const PlanFlags& flags, bool brute_force,
            std::ostream& out) {
  Session s = RunTraceFile(path, flags);
  ReplicationPlan plan = PlanSession(s, flags.planner());
  PlanConstraints constraints = SessionConstraints(s, flags.planner());
  BaselinePlanSet base = BaselinePlans(s.ahg, s.cost);
  Json linked = Json::array();
  for (const auto& [a, b] : constraints.linked.pairs) linked.push_back(Json::array({a, b}));
  Json j{{"plan", ToJson(plan)},
         {"linked_pairs", linked},
         {"baselines",
          {{"copy_all_s", CostToJson(base.copy_all.cost)},
           {"rerun_all_s", CostToJson(base.rerun_all.cost)}}}};
  if (brute_force) j["brute_force"] = ToJson(BruteForcePlan(s.ahg, s.cost, constraints));
  out << j.dump(2) << "\n";
  return kExitOk;
}

int CmdCheckpoint(const std::string& path, const std::string& output,
                  const PlanFlags& flags, std::ostream& out) {
  Session s = RunTraceFile(path, flags);
  ReplicationPlan plan = PlanSession(s, flags.planner());
  Checkpoint ck = WriteCheckpoint(s, plan, output);
  out << Json{{"checkpoint", output},
              {"plan", ToJson(plan)},
              {"payload_objects", ck.payload.size()},
              {"payload_bytes", ck.payload_logical_bytes()},
              {"copy_all_bytes",
               CopyAllPayloadBytes(s.heap, ActiveSnapshots(s.ahg).names())},
              {"file_bytes", std::filesystem::file_size(output)}}
             .dump(2)
      << "\n";
  return kExitOk;
}

Session LoadAnySession(const std::string& path, const PlanFlags& flags, double fail_rate) {
  if (IsCheckpointFile(path)) {
    return Restore(ReadCheckpoint(path), FaultInjection(fail_rate)).session;
  }
  return RunTraceFile(path, flags);
}

int CmdRestore(const std::string& path, const std::string& verify_against,
               double fail_rate, const PlanFlags& flags, std::ostream& out) {
  Checkpoint ck = ReadCheckpoint(path);
  RestoreResult r = Restore(ck, FaultInjection(fail_rate));
  std::vector<std::uint64_t> rerun;
  for (Timestamp t : r.rerun) rerun.push_back(t.value);
  std::set<std::string> names;
  for (const auto& [name, id] : r.session.heap.names()) names.insert(name);
  Json j{{"variables", NamesJson(names)},
         {"rerun", rerun},
         {"fallback", NamesJson(r.fallback)},
         {"timing", TimingJson(r.timing)},
         {"plan_cost_s", CostToJson(ck.plan.cost)}};
  int code = kExitOk;
  if (!verify_against.empty()) {
    Session original = RunTraceFile(verify_against, flags);
    VerificationReport report = Verify(original.heap, r.session.heap);
    j["verification"] = ToJson(report);
    if (!report.ok()) code = kExitVerificationFailed;
  }
  out << j.dump(2) << "\n";
  return code;
}

int CmdVerify(const std::string& original, const std::string& restored,
              double fail_rate, const PlanFlags& flags, std::ostream& out) {
  Session a = LoadAnySession(original, flags, 0.0);
  Session b = LoadAnySession(restored, flags, fail_rate);
  VerificationReport report = Verify(a.heap, b.heap);
  out << ToJson(report).dump(2) << "\n";
  return report.ok() ? kExitOk : kExitVerificationFailed;
}

int CmdSweep(const std::string& path, std::vector<double> bandwidths,
             const PlanFlags& flags, std::ostream& out) {
  Session s = RunTraceFile(path, flags);
  std::sort(bandwidths.rbegin(), bandwidths.rend());
  Json rows = Json::array();
  for (double bw : bandwidths) {
    s.cost.mutable_profile().bandwidth_bytes_per_s = bw;
    Json row{{"bandwidth_bytes_per_s", bw}};
    try {
      ReplicationPlan plan = PlanSession(s, flags.planner());
      row["cost_s"] = CostToJson(plan.cost);
      row["migrate_count"] = plan.migrate.size();
      row["migrated_bytes"] = CopyAllPayloadBytes(s.heap, plan.migrate);
      row["migrate"] = NamesJson(plan.migrate);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible) throw;
      row["cost_s"] = "inf";
      row["infeasible"] = e.subjects();
    }
    rows.push_back(row);
  }
  out << Json{{"sweep", rows}}.dump(2) << "\n";
  return kExitOk;
}

int ExitCodeFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInfeasible: return kExitInfeasible;
    case ErrorCode::kFormatError: return kExitFormatError;
    default: return kExitError;
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Replicate interactive session state by mixing copies and reruns",
               "statecut"};
  app.require_subcommand(1);

  PlanFlags flags;
  std::string trace_path, output, ckpt_path, verify_against, original, restored;
  double fail_rate = 0.0;
  bool brute_force = false;

  auto* run = app.add_subcommand("run", "Execute a trace under the monitor");
  run->add_option("trace", trace_path, "Trace JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--ablate", flags.ablate)->check(CLI::IsMember({"no-linked", "no-idgraph"}));

  auto* plan = app.add_subcommand("plan", "Compute a replication plan (dry run)");
  plan->add_option("trace", trace_path)->required()->check(CLI::ExistingFile);
  AddPlanFlags(plan, flags);
  plan->add_flag("--brute-force", brute_force, "Also solve by exhaustive search");

  auto* checkpoint = app.add_subcommand("checkpoint", "Plan and write a checkpoint");
  checkpoint->add_option("trace", trace_path)->required()->check(CLI::ExistingFile);
  checkpoint->add_option("-o,--output", output, "Checkpoint file")->required();
  AddPlanFlags(checkpoint, flags);

  auto* restore = app.add_subcommand("restore", "Restore a checkpoint");
  restore->add_option("checkpoint", ckpt_path)->required()->check(CLI::ExistingFile);
  restore->add_option("--verify-against", verify_against, "Original trace to compare with")
      ->check(CLI::ExistingFile);
  restore->add_option("--fail-rate", fail_rate, "Injected load-failure probability")
      ->check(CLI::Range(0.0, 1.0));
  restore->add_option("--ablate", flags.ablate)
      ->check(CLI::IsMember({"no-linked", "no-idgraph"}));

  auto* verify = app.add_subcommand("verify", "Compare two sessions (trace or checkpoint)");
  verify->add_option("original", original)->required()->check(CLI::ExistingFile);
  verify->add_option("restored", restored)->required()->check(CLI::ExistingFile);
  verify->add_option("--fail-rate", fail_rate)->check(CLI::Range(0.0, 1.0));
  verify->add_option("--ablate", flags.ablate)
      ->check(CLI::IsMember({"no-linked", "no-idgraph"}));

  std::vector<double> bandwidths{1e10, 1e9, 1e8, 1e7, 1e6, 1e5};
  auto* sweep = app.add_subcommand("sweep", "Re-plan across bandwidths");
  sweep->add_option("trace", trace_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("--bandwidths", bandwidths)->delimiter(',')->check(CLI::PositiveNumber);
  AddPlanFlags(sweep, flags);

  GeneratorOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "Generate a random trace (seed: $STATECUT_SEED)");
  gen->add_option("-o,--output", output, "Trace file (stdout if omitted)");
  gen->add_option("--cells", gen_opt.cells)->check(CLI::PositiveNumber);
  gen->add_option("--variables", gen_opt.max_variables)->check(CLI::PositiveNumber);
  gen->add_option("--alias-density", gen_opt.alias_density)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--unserializable-rate", gen_opt.unserializable_rate)
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--undeserializable-rate", gen_opt.undeserializable_rate)
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--never-rerun-rate", gen_opt.never_rerun_rate)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--nondeterministic-rate", gen_opt.nondeterministic_rate)
      ->check(CLI::Range(0.0, 1.0));

  std::size_t bench_cells = 2000;
  int repeats = 3;
  auto* bench = app.add_subcommand("bench", "Time planning on a long generated session");
  bench->add_option("--cells", bench_cells)->check(CLI::PositiveNumber);
  bench->add_option("--repeat", repeats)->check(CLI::PositiveNumber);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (run->parsed()) return CmdRun(trace_path, flags, out);
    if (plan->parsed()) return CmdPlan(trace_path, flags, brute_force, out);
    if (checkpoint->parsed()) return CmdCheckpoint(trace_path, output, flags, out);
    if (restore->parsed()) {
      return CmdRestore(ckpt_path, verify_against, fail_rate, flags, out);
    }
    if (verify->parsed()) return CmdVerify(original, restored, fail_rate, flags, out);
    if (sweep->parsed()) return CmdSweep(trace_path, bandwidths, flags, out);
    if (gen->parsed()) {
      gen_opt.seed = SeedFromEnvironment();
      Trace t = GenerateTrace(gen_opt);
      if (output.empty()) {
        out << ToJson(t).dump(2) << "\n";
      } else {
        SaveTrace(t, output);
      }
      return kExitOk;
    }
    if (bench->parsed()) {
      BenchResult r = RunBench(bench_cells, SeedFromEnvironment(), repeats);
      out << Json{{"cells", r.cells},
                  {"active_variables", r.active_variables},
                  {"ahg_bytes", r.ahg_bytes},
                  {"read_edges", r.read_edges},
                  {"write_edges", r.write_edges},
                  {"plan_ms", r.plan_ms},
                  {"monitor_ms", r.monitor_ms},
                  {"feasible", r.feasible}}
                 .dump(2)
          << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInfeasible) {
      out << Json{{"infeasible", true}, {"variables", e.subjects()}, {"message", e.what()}}
                 .dump(2)
          << "\n";
    }
    err << "statecut: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    err << "statecut: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace statecut
