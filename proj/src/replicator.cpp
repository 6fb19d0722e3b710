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

#include "statecut/replicator.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "statecut/error.hpp"
#include "statecut/serialization.hpp"

namespace statecut {

namespace {

constexpr std::uint8_t kFlagSerializable = 1;
constexpr std::uint8_t kFlagDeserializable = 2;
constexpr std::uint8_t kFlagHashable = 4;

class ByteWriter {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void Bytes(std::string_view s) { out_.append(s); }
  void Str(std::string_view s) {
    if (s.size() > UINT32_MAX) throw Error(ErrorCode::kSerializationError, "string too long");
    U32(static_cast<std::uint32_t>(s.size()));
    Bytes(s);
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  std::uint8_t U8() { return static_cast<std::uint8_t>(Take(1)[0]); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Le(4)); }
  std::uint64_t U64() { return Le(8); }
  std::string_view Take(std::size_t n) {
    if (n > in_.size() - pos_) {
      throw Error(ErrorCode::kFormatError, "checkpoint truncated at byte " + std::to_string(pos_));
    }
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string Str() { return std::string(Take(U32())); }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::uint64_t Le(int n) {
    std::string_view s = Take(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(s[i]);
    return v;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

Json ManifestJson(const Checkpoint& ck) {
  Json vars = Json::object();
  for (const auto& [name, id] : ck.variables) vars[name] = id.value;
  Json archive = Json::array();
  for (const auto& [ref, cell] : ck.archive) archive.push_back(ToJson(cell));
  return {{"format_version", ck.format_version},
          {"plan", ToJson(ck.plan)},
          {"ahg", ToJson(ck.ahg)},
          {"cost_model", ToJson(ck.cost)},
          {"variables", vars},
          {"archive", archive},
          {"annotations", ToJson(ck.annotations)},
          {"payload", {{"objects", ck.payload.size()},
                       {"logical_bytes", ck.payload_logical_bytes()}}}};
}

std::vector<HeapObject> DecodePayload(std::string_view bytes) {
  ByteReader r(bytes);
  std::uint64_t count = r.U64();
  std::vector<HeapObject> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    HeapObject obj;
    obj.id = ObjectId{r.U64()};
    std::uint8_t kind = r.U8();
    if (kind > static_cast<std::uint8_t>(ObjectKind::kOpaque)) {
      throw Error(ErrorCode::kFormatError, "bad object kind in payload");
    }
    obj.kind = static_cast<ObjectKind>(kind);
    std::uint8_t flags = r.U8();
    obj.serializable = (flags & kFlagSerializable) != 0;
    obj.deserializable = (flags & kFlagDeserializable) != 0;
    obj.hashable = (flags & kFlagHashable) != 0;
    obj.size_bytes = r.U64();
    obj.value = r.Str();
    std::uint32_t slots = r.U32();
    for (std::uint32_t s = 0; s < slots; ++s) {
      std::string label = r.Str();
      obj.slots.emplace(std::move(label), ObjectId{r.U64()});
    }
    if (!out.empty() && !(out.back().id < obj.id)) {
      throw Error(ErrorCode::kFormatError, "payload records not in ascending id order");
    }
    out.push_back(std::move(obj));
  }
  if (!r.done()) throw Error(ErrorCode::kFormatError, "trailing bytes in payload");
  return out;
}

}  // namespace

std::uint64_t Checkpoint::payload_logical_bytes() const {
  std::uint64_t n = 0;
  for (const auto& obj : payload) n += obj.size_bytes;
  return n;
}

Checkpoint MakeCheckpoint(const Session& session, const ReplicationPlan& plan) {
  Checkpoint ck;
  ck.plan = plan;
  ck.ahg = session.ahg;
  ck.cost = session.cost;
  ck.archive = session.archive;
  ck.annotations = session.annotations;

  std::map<ObjectId, std::string> first_owner;
  for (const auto& name : plan.migrate) {
    ObjectId root = session.heap.root(name);
    ck.variables[name] = session.origin_of(root);
    for (ObjectId id : ReachableFrom(session.heap, root)) first_owner.emplace(id, name);
  }
  for (const auto& [id, owner] : first_owner) {
    const HeapObject& obj = session.heap.object(id);
    if (!obj.serializable) {
      throw Error(ErrorCode::kSerializationError,
                  "variable '" + owner + "' reaches non-serializable object " +
                      std::to_string(id.value),
                  {owner});
    }
    HeapObject rec = obj;
    rec.id = session.origin_of(id);
    for (auto& [label, child] : rec.slots) child = session.origin_of(child);
    ck.payload.push_back(std::move(rec));
  }
  std::sort(ck.payload.begin(), ck.payload.end(),
            [](const HeapObject& a, const HeapObject& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < ck.payload.size(); ++i) {
    if (ck.payload[i - 1].id == ck.payload[i].id) {
      throw Error(ErrorCode::kInternal, "two live objects share an original id");
    }
  }
  return ck;
}

std::string EncodeManifest(const Checkpoint& checkpoint) {
  return ManifestJson(checkpoint).dump();
}

std::string EncodePayload(const Checkpoint& checkpoint) {
  ByteWriter w;
  w.U64(checkpoint.payload.size());
  for (const auto& obj : checkpoint.payload) {
    w.U64(obj.id.value);
    w.U8(static_cast<std::uint8_t>(obj.kind));
    w.U8(static_cast<std::uint8_t>((obj.serializable ? kFlagSerializable : 0) |
                                   (obj.deserializable ? kFlagDeserializable : 0) |
                                   (obj.hashable ? kFlagHashable : 0)));
    w.U64(obj.size_bytes);
    w.Str(obj.value);
    w.U32(static_cast<std::uint32_t>(obj.slots.size()));
    for (const auto& [label, child] : obj.slots) {
      w.Str(label);
      w.U64(child.value);
    }
  }
  return w.Take();
}

std::string EncodeCheckpoint(const Checkpoint& checkpoint) {
  std::string manifest = EncodeManifest(checkpoint);
  std::string payload = EncodePayload(checkpoint);
  ByteWriter w;
  w.Bytes(kCheckpointMagic);
  w.U32(checkpoint.format_version);
  w.U64(manifest.size());
  w.Bytes(manifest);
  w.U64(payload.size());
  w.Bytes(payload);
  return w.Take();
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.Take(kCheckpointMagic.size()) != kCheckpointMagic) {
    throw Error(ErrorCode::kFormatError, "not a checkpoint file (bad magic)");
  }
  Checkpoint ck;
  ck.format_version = r.U32();
  if (ck.format_version != kCheckpointFormatVersion) {
    throw Error(ErrorCode::kFormatError,
                "unsupported checkpoint version " + std::to_string(ck.format_version));
  }
  std::string_view manifest_text = r.Take(r.U64());
  std::string_view payload_bytes = r.Take(r.U64());
  if (!r.done()) throw Error(ErrorCode::kFormatError, "trailing bytes after payload");

  Json m = [&] {
    try {
      return Json::parse(manifest_text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormatError, std::string("manifest: ") + e.what());
    }
  }();
  try {
    ck.plan = PlanFromJson(m.at("plan"));
    ck.ahg = AhgFromJson(m.at("ahg"));
    ck.cost = CostModelFromJson(m.at("cost_model"));
    for (const auto& [name, id] : m.at("variables").items()) {
      ck.variables.emplace(name, ObjectId{id.get<std::uint64_t>()});
    }
    for (const auto& cell : m.at("archive")) {
      CellProgram p = CellProgramFromJson(cell);
      std::string ref = p.code_ref;
      ck.archive.emplace(std::move(ref), std::move(p));
    }
    ck.annotations = AnnotationsFromJson(m.at("annotations"));
    ck.payload = DecodePayload(payload_bytes);
    if (m.at("payload").at("objects").get<std::uint64_t>() != ck.payload.size() ||
        m.at("payload").at("logical_bytes").get<std::uint64_t>() !=
            ck.payload_logical_bytes()) {
      throw Error(ErrorCode::kFormatError, "payload does not match manifest summary");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("manifest: ") + e.what());
  }
  if (ck.variables.size() != ck.plan.migrate.size()) {
    throw Error(ErrorCode::kFormatError, "variable table does not match the plan");
  }
  return ck;
}

Checkpoint WriteCheckpoint(const Session& session, const ReplicationPlan& plan,
                           const std::filesystem::path& path) {
  Checkpoint ck = MakeCheckpoint(session, plan);
  WriteTextFile(path, EncodeCheckpoint(ck));
  return ck;
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return DecodeCheckpoint(buf.str());
}

std::uint64_t CopyAllPayloadBytes(const SimHeap& heap,
                                  const std::set<std::string>& names) {
  std::set<ObjectId> all;
  for (const auto& name : names) {
    auto reach = ReachableObjects(heap, name);
    all.insert(reach.begin(), reach.end());
  }
  std::uint64_t bytes = 0;
  for (ObjectId id : all) bytes += heap.object(id).size_bytes;
  return bytes;
}

std::vector<Timestamp> FallbackRecompute(const Checkpoint& checkpoint,
                                         const std::set<std::string>& failed) {
  const Ahg& ahg = checkpoint.ahg;
  std::set<std::string> ground;
  for (const auto& name : checkpoint.plan.migrate) {
    if (!failed.contains(name)) ground.insert(name);
  }
  std::vector<VariableSnapshot> targets;
  for (const auto& [name, vs] : ActiveSnapshots(ahg).snapshots) {
    if (!ground.contains(name)) targets.push_back(vs);
  }
  ReqClosure closure = CollectReq(ahg, targets, ground);
  for (Timestamp t : closure.cells) {
    if (RerunCost(checkpoint.cost, ahg, t).is_infinite()) {
      throw Error(ErrorCode::kUnreconstructable,
                  "cannot recompute variables that failed to load: cell t" +
                      std::to_string(t.value) + " cannot be rerun",
                  std::vector<std::string>(failed.begin(), failed.end()));
    }
  }
  return closure.cells;
}

namespace {

// Replays reruns and declarations onto a fresh heap, translating original
// object ids to freshly allocated ones.
class Replayer {
 public:
  explicit Replayer(const std::map<ObjectId, const HeapObject*>& stored)
      : stored_(stored) {}

  void Rerun(const CellProgram& cell, bool use_alt) {
    const auto& ops = (use_alt && cell.alt_ops) ? *cell.alt_ops : cell.ops;
    for (const auto& op : ops) {
      try {
        Apply(op);
      } catch (const Error& e) {
        throw Error(ErrorCode::kInternal,
                    "rerun of '" + cell.code_ref + "' failed: " + e.what(), {cell.code_ref});
      }
    }
  }

  void Declare(const std::string& name, ObjectId root, const std::set<ObjectId>& reach) {
    std::uint64_t next = heap_.AllocateId().value;
    std::vector<ObjectId> fresh;
    for (ObjectId old : reach) {
      if (!materialized_.contains(old)) {
        materialized_.emplace(old, ObjectId{next++});
        fresh.push_back(old);
      }
    }
    for (ObjectId old : fresh) {
      HeapObject obj = *stored_.at(old);
      obj.id = materialized_.at(old);
      for (auto& [label, child] : obj.slots) child = materialized_.at(child);
      origin_[obj.id] = old;
      heap_.Insert(std::move(obj));
    }
    // From here on, reruns that name these objects reach the stored copies.
    for (ObjectId old : reach) translate_[old] = materialized_.at(old);
    heap_.Apply(BindOp{name, materialized_.at(root)});
  }

  SimHeap& heap() { return heap_; }
  std::map<ObjectId, ObjectId>& origins() { return origin_; }

 private:
  ObjectId Map(ObjectId old) const {
    auto it = translate_.find(old);
    if (it == translate_.end()) {
      throw Error(ErrorCode::kInternal,
                  "object " + std::to_string(old.value) + " is not available during replay");
    }
    return it->second;
  }

  void Apply(const HeapOp& op) {
    if (const auto* c = std::get_if<CreateOp>(&op)) {
      CreateOp fresh = *c;
      fresh.id = heap_.AllocateId();
      heap_.Apply(fresh);
      translate_[c->id] = fresh.id;
      origin_[fresh.id] = c->id;
    } else if (const auto* b = std::get_if<BindOp>(&op)) {
      heap_.Apply(BindOp{b->name, Map(b->id)});
    } else if (const auto* u = std::get_if<UnbindOp>(&op)) {
      // The binding may have come from a cell that is not replayed.
      if (heap_.is_bound(u->name)) heap_.Apply(*u);
    } else if (const auto* s = std::get_if<SetSlotOp>(&op)) {
      heap_.Apply(SetSlotOp{Map(s->parent), s->slot, Map(s->child)});
    } else if (const auto* cs = std::get_if<ClearSlotOp>(&op)) {
      heap_.Apply(ClearSlotOp{Map(cs->parent), cs->slot});
    } else if (const auto* v = std::get_if<SetValueOp>(&op)) {
      heap_.Apply(SetValueOp{Map(v->id), v->value});
    }
  }

  const std::map<ObjectId, const HeapObject*>& stored_;
  SimHeap heap_;
  std::unordered_map<ObjectId, ObjectId> translate_;
  std::unordered_map<ObjectId, ObjectId> materialized_;
  std::map<ObjectId, ObjectId> origin_;
};

}  // namespace

RestoreResult Restore(const Checkpoint& ck, const RestoreOptions& options) {
  const Ahg& ahg = ck.ahg;
  ActiveSet active = ActiveSnapshots(ahg);

  std::map<ObjectId, const HeapObject*> stored;
  for (const auto& obj : ck.payload) stored.emplace(obj.id, &obj);

  // Decode every migrated variable up front so load failures are known
  // before any cell is replayed.
  std::map<std::string, std::set<ObjectId>> reach;
  std::unordered_map<ObjectId, std::vector<std::string>> owners;
  for (const auto& [name, root] : ck.variables) {
    if (!ck.plan.migrate.contains(name) || !active.snapshots.contains(name)) {
      throw Error(ErrorCode::kFormatError,
                  "stored variable '" + name + "' is not an active migrated variable", {name});
    }
    std::set<ObjectId>& r = reach[name];
    std::deque<ObjectId> queue{root};
    r.insert(root);
    while (!queue.empty()) {
      auto it = stored.find(queue.front());
      queue.pop_front();
      if (it == stored.end()) {
        throw Error(ErrorCode::kFormatError, "payload is not self-contained", {name});
      }
      for (const auto& [label, child] : it->second->slots) {
        if (r.insert(child).second) queue.push_back(child);
      }
    }
    for (ObjectId id : r) owners[id].push_back(name);
  }

  std::set<std::string> failed;
  for (const auto& [name, objs] : reach) {
    for (ObjectId id : objs) {
      const HeapObject& obj = *stored.at(id);
      if (!obj.deserializable || (options.fail_load && options.fail_load(id))) {
        failed.insert(name);
        break;
      }
    }
  }
  // Variables sharing objects with a failed one must be recomputed with it,
  // or the shared objects would be split between two copies.
  std::deque<std::string> pending(failed.begin(), failed.end());
  while (!pending.empty()) {
    std::string name = pending.front();
    pending.pop_front();
    for (ObjectId id : reach.at(name)) {
      for (const auto& other : owners.at(id)) {
        if (failed.insert(other).second) pending.push_back(other);
      }
    }
  }

  RestoreResult result;
  result.fallback = failed;
  result.rerun = failed.empty() ? ck.plan.rerun : FallbackRecompute(ck, failed);

  std::map<Timestamp, std::vector<std::string>> declare_at;
  for (const auto& [name, root] : ck.variables) {
    if (!failed.contains(name)) declare_at[active.snapshots.at(name).t].push_back(name);
  }
  std::set<Timestamp> events(result.rerun.begin(), result.rerun.end());
  for (const auto& [t, names] : declare_at) events.insert(t);
  const std::set<Timestamp> rerun_set(result.rerun.begin(), result.rerun.end());

  Replayer replay(stored);
  for (Timestamp t : events) {
    if (rerun_set.contains(t)) {
      const CellExecution& ce = ahg.cell(t);
      auto prog = ck.archive.find(ce.code_ref);
      if (prog == ck.archive.end()) {
        throw Error(ErrorCode::kMissingCellProgram,
                    "no program archived for '" + ce.code_ref + "'", {ce.code_ref});
      }
      replay.Rerun(prog->second, ce.nondeterministic);
    }
    if (auto it = declare_at.find(t); it != declare_at.end()) {
      for (const auto& name : it->second) {
        replay.Declare(name, ck.variables.at(name), reach.at(name));
      }
    }
  }

  SimHeap& heap = replay.heap();
  std::vector<std::string> stale;
  for (const auto& [name, id] : heap.names()) {
    if (!active.snapshots.contains(name)) stale.push_back(name);
  }
  for (const auto& name : stale) heap.Apply(UnbindOp{name});
  for (const auto& [name, vs] : active.snapshots) {
    if (!heap.is_bound(name)) {
      throw Error(ErrorCode::kInternal, "restore did not produce '" + name + "'", {name});
    }
  }
  heap.CollectGarbage();

  Session& s = result.session;
  s.heap = std::move(heap);
  for (const auto& [fresh, old] : replay.origins()) {
    if (s.heap.contains(fresh)) s.origin_ids.emplace(fresh, old);
  }
  s.ahg = ck.ahg;
  s.cost = ck.cost;
  s.archive = ck.archive;
  s.annotations = ck.annotations;
  for (Timestamp t : result.rerun) {
    s.cost.RecordRuntime(t, ck.archive.at(ahg.cell(t).code_ref).declared_runtime_s);
  }

  TimingReport& timing = result.timing;
  timing.alpha = ck.cost.profile().alpha;
  timing.store = Cost::Zero();
  timing.load = Cost::Zero();
  for (const auto& name : ck.plan.migrate) {
    timing.store += EstimateStore(ck.cost, name);
    timing.load += EstimateLoad(ck.cost, name);
  }
  timing.rerun = RerunCost(ck.cost, ahg, result.rerun);
  return result;
}

}  // namespace statecut
