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

#include "statecut/serialization.hpp"

#include <fstream>
#include <sstream>

#include "statecut/error.hpp"

namespace statecut {

namespace {

// Runs a parser and turns library exceptions into kFormatError.
template <typename F>
auto Parsing(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string(what) + ": " + e.what());
  }
}

template <typename T>
T Get(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

ObjectId IdAt(const Json& j, const char* key) {
  return ObjectId{j.at(key).get<std::uint64_t>()};
}

[[noreturn]] void Malformed(const std::string& msg) {
  throw Error(ErrorCode::kFormatError, msg);
}

void RequireObject(const Json& j, const char* what) {
  if (!j.is_object()) Malformed(std::string(what) + " must be a JSON object");
}

Json OpsToJson(const std::vector<HeapOp>& ops) {
  Json arr = Json::array();
  for (const auto& op : ops) arr.push_back(ToJson(op));
  return arr;
}

std::vector<HeapOp> OpsFromJson(const Json& j) {
  if (!j.is_array()) Malformed("ops must be an array");
  std::vector<HeapOp> ops;
  for (const auto& op : j) ops.push_back(HeapOpFromJson(op));
  return ops;
}

}  // namespace

Json CostToJson(Cost c) {
  if (c.is_infinite()) return "inf";
  return c.seconds();
}

Cost CostFromJson(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return Cost::Infinite();
  if (!j.is_number()) Malformed("cost must be a number or \"inf\"");
  return Cost(j.get<double>());
}

Json ToJson(const HeapOp& op) {
  struct Visitor {
    Json operator()(const CreateOp& c) const {
      return {{"op", "create"},
              {"id", c.id.value},
              {"kind", std::string(ObjectKindName(c.kind))},
              {"value", c.value},
              {"size_bytes", c.size_bytes},
              {"serializable", c.serializable},
              {"deserializable", c.deserializable},
              {"hashable", c.hashable}};
    }
    Json operator()(const BindOp& b) const {
      return {{"op", "bind"}, {"name", b.name}, {"id", b.id.value}};
    }
    Json operator()(const UnbindOp& u) const {
      return {{"op", "unbind"}, {"name", u.name}};
    }
    Json operator()(const SetSlotOp& s) const {
      return {{"op", "set_slot"},
              {"parent_id", s.parent.value},
              {"slot", s.slot},
              {"child_id", s.child.value}};
    }
    Json operator()(const ClearSlotOp& c) const {
      return {{"op", "clear_slot"}, {"parent_id", c.parent.value}, {"slot", c.slot}};
    }
    Json operator()(const SetValueOp& v) const {
      return {{"op", "set_value"}, {"id", v.id.value}, {"value", v.value}};
    }
  };
  return std::visit(Visitor{}, op);
}

HeapOp HeapOpFromJson(const Json& j) {
  return Parsing("heap op", [&]() -> HeapOp {
    RequireObject(j, "heap op");
    const std::string kind = j.at("op").get<std::string>();
    if (kind == "create") {
      CreateOp c;
      c.id = IdAt(j, "id");
      auto k = ParseObjectKind(Get<std::string>(j, "kind", "scalar"));
      if (!k) Malformed("unknown object kind in create op");
      c.kind = *k;
      c.value = Get<std::string>(j, "value", "");
      c.size_bytes = Get<std::uint64_t>(j, "size_bytes", 0);
      c.serializable = Get<bool>(j, "serializable", true);
      c.deserializable = Get<bool>(j, "deserializable", true);
      c.hashable = Get<bool>(j, "hashable", true);
      return c;
    }
    if (kind == "bind") return BindOp{j.at("name").get<std::string>(), IdAt(j, "id")};
    if (kind == "unbind") return UnbindOp{j.at("name").get<std::string>()};
    if (kind == "set_slot") {
      return SetSlotOp{IdAt(j, "parent_id"), j.at("slot").get<std::string>(),
                       IdAt(j, "child_id")};
    }
    if (kind == "clear_slot") {
      return ClearSlotOp{IdAt(j, "parent_id"), j.at("slot").get<std::string>()};
    }
    if (kind == "set_value") {
      return SetValueOp{IdAt(j, "id"), j.at("value").get<std::string>()};
    }
    Malformed("unknown heap op '" + kind + "'");
  });
}

Json ToJson(const CellProgram& cell) {
  Json j{{"code_ref", cell.code_ref},
         {"direct_reads", cell.direct_reads},
         {"ops", OpsToJson(cell.ops)},
         {"declared_runtime_s", cell.declared_runtime_s},
         {"annotations",
          {{"never_rerun", cell.never_rerun},
           {"nondeterministic", cell.nondeterministic}}}};
  if (cell.alt_ops) j["alt_ops"] = OpsToJson(*cell.alt_ops);
  return j;
}

CellProgram CellProgramFromJson(const Json& j) {
  return Parsing("cell", [&] {
    RequireObject(j, "cell");
    CellProgram cell;
    cell.code_ref = j.at("code_ref").get<std::string>();
    cell.direct_reads = Get<std::set<std::string>>(j, "direct_reads", {});
    cell.ops = OpsFromJson(j.value("ops", Json::array()));
    if (auto it = j.find("alt_ops"); it != j.end() && !it->is_null()) {
      cell.alt_ops = OpsFromJson(*it);
    }
    cell.declared_runtime_s = Get<double>(j, "declared_runtime_s", 0.0);
    if (cell.declared_runtime_s < 0) Malformed("negative runtime in " + cell.code_ref);
    if (auto it = j.find("annotations"); it != j.end()) {
      cell.never_rerun = Get<bool>(*it, "never_rerun", false);
      cell.nondeterministic = Get<bool>(*it, "nondeterministic", false);
    }
    return cell;
  });
}

Json ToJson(const Profile& p) {
  return {{"bandwidth_bytes_per_s", p.bandwidth_bytes_per_s},
          {"latency_s", p.latency_s},
          {"alpha", p.alpha},
          {"store_s", p.store_s},
          {"load_s", p.load_s}};
}

Profile ProfileFromJson(const Json& j) {
  return Parsing("profile", [&] {
    RequireObject(j, "profile");
    Profile p;
    p.bandwidth_bytes_per_s = Get<double>(j, "bandwidth_bytes_per_s", p.bandwidth_bytes_per_s);
    p.latency_s = Get<double>(j, "latency_s", p.latency_s);
    p.alpha = Get<double>(j, "alpha", p.alpha);
    p.store_s = Get<std::map<std::string, double>>(j, "store_s", {});
    p.load_s = Get<std::map<std::string, double>>(j, "load_s", {});
    if (!(p.bandwidth_bytes_per_s > 0)) Malformed("bandwidth must be positive");
    if (p.latency_s < 0) Malformed("latency must be non-negative");
    if (p.alpha < 0) Malformed("alpha must be non-negative");
    return p;
  });
}

Json ToJson(const std::map<std::string, VariableAnnotation>& annotations) {
  Json j = Json::object();
  for (const auto& [name, a] : annotations) j[name] = std::string(VariableAnnotationName(a));
  return j;
}

std::map<std::string, VariableAnnotation> AnnotationsFromJson(const Json& j) {
  return Parsing("annotations", [&] {
    RequireObject(j, "variable_annotations");
    std::map<std::string, VariableAnnotation> out;
    for (const auto& [name, v] : j.items()) {
      auto a = ParseVariableAnnotation(v.get<std::string>());
      if (!a) Malformed("unknown annotation for '" + name + "'");
      out.emplace(name, *a);
    }
    return out;
  });
}

Json ToJson(const Trace& trace) {
  Json cells = Json::array();
  for (const auto& c : trace.cells) cells.push_back(ToJson(c));
  return {{"version", trace.version},
          {"profile", ToJson(trace.profile)},
          {"cells", cells},
          {"variable_annotations", ToJson(trace.variable_annotations)}};
}

Trace TraceFromJson(const Json& j) {
  return Parsing("trace", [&] {
    RequireObject(j, "trace");
    Trace t;
    t.version = Get<int>(j, "version", 1);
    if (t.version != 1) Malformed("unsupported trace version " + std::to_string(t.version));
    if (auto it = j.find("profile"); it != j.end()) t.profile = ProfileFromJson(*it);
    const Json& cells = j.at("cells");
    if (!cells.is_array()) Malformed("cells must be an array");
    std::set<std::string> refs;
    for (const auto& c : cells) {
      t.cells.push_back(CellProgramFromJson(c));
      if (!refs.insert(t.cells.back().code_ref).second) {
        Malformed("duplicate code_ref '" + t.cells.back().code_ref + "'");
      }
    }
    if (auto it = j.find("variable_annotations"); it != j.end()) {
      t.variable_annotations = AnnotationsFromJson(*it);
    }
    return t;
  });
}

Json ToJson(const Ahg& ahg) {
  Json cells = Json::array();
  for (const auto& c : ahg.cells()) {
    Json reads = Json::array();
    for (const auto& vs : ahg.reads_of(c.t)) reads.push_back(Json::array({vs.name, vs.t.value}));
    auto writes = ahg.writes_of(c.t);
    auto deletes = ahg.deletes_of(c.t);
    cells.push_back({{"t", c.t.value},
                     {"code_ref", c.code_ref},
                     {"runtime_s", c.runtime_s},
                     {"never_rerun", c.never_rerun},
                     {"nondeterministic", c.nondeterministic},
                     {"reads", reads},
                     {"writes", std::vector<std::string>(writes.begin(), writes.end())},
                     {"deletes", std::vector<std::string>(deletes.begin(), deletes.end())}});
  }
  return {{"cells", cells}};
}

Ahg AhgFromJson(const Json& j) {
  return Parsing("ahg", [&] {
    RequireObject(j, "ahg");
    Ahg ahg;
    for (const auto& c : j.at("cells")) {
      CellRecord r;
      r.t = Timestamp{c.at("t").get<std::uint64_t>()};
      r.code_ref = c.at("code_ref").get<std::string>();
      r.runtime_s = Get<double>(c, "runtime_s", 0.0);
      r.never_rerun = Get<bool>(c, "never_rerun", false);
      r.nondeterministic = Get<bool>(c, "nondeterministic", false);
      for (const auto& rd : c.at("reads")) {
        r.accessed.insert(VariableSnapshot{rd.at(0).get<std::string>(),
                                           Timestamp{rd.at(1).get<std::uint64_t>()}});
      }
      r.written = c.at("writes").get<std::set<std::string>>();
      r.deleted = c.at("deletes").get<std::set<std::string>>();
      try {
        ahg.Update(r);
      } catch (const Error& e) {
        Malformed(std::string("inconsistent AHG: ") + e.what());
      }
    }
    return ahg;
  });
}

Json ToJson(const CostModel& cost) {
  Json runtimes = Json::array();
  for (const auto& [t, s] : cost.runtimes()) runtimes.push_back(Json::array({t, s}));
  Json vars = Json::object();
  for (const auto& [name, v] : cost.variables()) {
    vars[name] = {{"size_bytes", v.size_bytes},
                  {"serializable", v.serializable},
                  {"deserializable", v.deserializable}};
  }
  return {{"profile", ToJson(cost.profile())},
          {"nondeterministic_guard", cost.nondeterministic_guard()},
          {"runtimes", runtimes},
          {"variables", vars}};
}

CostModel CostModelFromJson(const Json& j) {
  return Parsing("cost model", [&] {
    RequireObject(j, "cost model");
    CostModel cost(ProfileFromJson(j.at("profile")));
    cost.set_nondeterministic_guard(Get<bool>(j, "nondeterministic_guard", true));
    for (const auto& rt : j.value("runtimes", Json::array())) {
      cost.RecordRuntime(Timestamp{rt.at(0).get<std::uint64_t>()}, rt.at(1).get<double>());
    }
    const Json vars = j.value("variables", Json::object());
    for (const auto& [name, v] : vars.items()) {
      cost.SetVariableProfile(name, VariableProfile{v.at("size_bytes").get<std::uint64_t>(),
                                                    v.at("serializable").get<bool>(),
                                                    v.at("deserializable").get<bool>()});
    }
    return cost;
  });
}

Json ToJson(const ReplicationPlan& plan) {
  std::vector<std::uint64_t> rerun;
  for (Timestamp t : plan.rerun) rerun.push_back(t.value);
  return {{"migrate", plan.migrate},
          {"rerun", rerun},
          {"cost_s", CostToJson(plan.cost)},
          {"overwrite_after_rerun", plan.overwrite_after_rerun},
          {"alpha", plan.alpha},
          {"bandwidth_bytes_per_s", plan.bandwidth_bytes_per_s},
          {"latency_s", plan.latency_s}};
}

ReplicationPlan PlanFromJson(const Json& j) {
  return Parsing("plan", [&] {
    RequireObject(j, "plan");
    ReplicationPlan plan;
    plan.migrate = j.at("migrate").get<std::set<std::string>>();
    for (auto t : j.at("rerun").get<std::vector<std::uint64_t>>()) {
      plan.rerun.push_back(Timestamp{t});
    }
    plan.cost = CostFromJson(j.at("cost_s"));
    plan.overwrite_after_rerun = Get<std::set<std::string>>(j, "overwrite_after_rerun", {});
    plan.alpha = Get<double>(j, "alpha", 1.0);
    plan.bandwidth_bytes_per_s = Get<double>(j, "bandwidth_bytes_per_s", 0.0);
    plan.latency_s = Get<double>(j, "latency_s", 0.0);
    return plan;
  });
}

Json ToJson(const VerificationReport& r) {
  return {{"value_equivalent", r.value_equivalent},
          {"isomorphic", r.isomorphic},
          {"missing", r.missing},
          {"unexpected", r.unexpected},
          {"value_diffs", r.value_diffs},
          {"violations", r.violations}};
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return Parsing(path.string().c_str(), [&] { return Json::parse(buf.str()); });
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

Trace LoadTrace(const std::filesystem::path& path) {
  return TraceFromJson(ReadJsonFile(path));
}

void SaveTrace(const Trace& trace, const std::filesystem::path& path) {
  WriteTextFile(path, ToJson(trace).dump(2) + "\n");
}

}  // namespace statecut
