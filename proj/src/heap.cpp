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

#include "statecut/heap.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "statecut/error.hpp"

namespace statecut {

std::string_view ObjectKindName(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kScalar: return "scalar";
    case ObjectKind::kContainer: return "container";
    case ObjectKind::kOpaque: return "opaque";
  }
  return "scalar";
}

std::optional<ObjectKind> ParseObjectKind(std::string_view name) {
  if (name == "scalar") return ObjectKind::kScalar;
  if (name == "container") return ObjectKind::kContainer;
  if (name == "opaque") return ObjectKind::kOpaque;
  return std::nullopt;
}

std::vector<ObjectId> ReferencedObjects(const HeapOp& op) {
  struct Visitor {
    std::vector<ObjectId> operator()(const CreateOp&) const { return {}; }
    std::vector<ObjectId> operator()(const BindOp& b) const { return {b.id}; }
    std::vector<ObjectId> operator()(const UnbindOp&) const { return {}; }
    std::vector<ObjectId> operator()(const SetSlotOp& s) const {
      return {s.parent, s.child};
    }
    std::vector<ObjectId> operator()(const ClearSlotOp& c) const {
      return {c.parent};
    }
    std::vector<ObjectId> operator()(const SetValueOp& v) const { return {v.id}; }
  };
  return std::visit(Visitor{}, op);
}

void MutationRecord::Merge(const MutationRecord& other) {
  for (const auto& n : other.bound) {
    bound.insert(n);
    unbound.erase(n);
  }
  for (const auto& n : other.unbound) {
    unbound.insert(n);
    bound.erase(n);
  }
  created.insert(other.created.begin(), other.created.end());
  touched.insert(other.touched.begin(), other.touched.end());
}

const HeapObject& SimHeap::object(ObjectId id) const {
  auto it = objects_.find(id);
  if (it == objects_.end()) {
    throw Error(ErrorCode::kUnknownObject,
                "object " + std::to_string(id.value) + " is not live");
  }
  return it->second;
}

HeapObject& SimHeap::mutable_object(ObjectId id) {
  return const_cast<HeapObject&>(std::as_const(*this).object(id));
}

bool SimHeap::is_bound(std::string_view name) const {
  return namespace_.find(name) != namespace_.end();
}

std::optional<ObjectId> SimHeap::lookup(std::string_view name) const {
  auto it = namespace_.find(name);
  if (it == namespace_.end()) return std::nullopt;
  return it->second;
}

ObjectId SimHeap::root(std::string_view name) const {
  auto it = namespace_.find(name);
  if (it == namespace_.end()) {
    throw Error(ErrorCode::kUnknownVariable,
                "variable '" + std::string(name) + "' is not bound",
                {std::string(name)});
  }
  return it->second;
}

void SimHeap::NoteId(ObjectId id) {
  ever_created_.insert(id);
  max_id_ever_ = std::max(max_id_ever_, id.value);
}

MutationRecord SimHeap::Apply(const HeapOp& op) {
  MutationRecord rec;
  if (const auto* c = std::get_if<CreateOp>(&op)) {
    if (ever_created_.contains(c->id)) {
      throw Error(ErrorCode::kDuplicateObject,
                  "object id " + std::to_string(c->id.value) + " already used");
    }
    if (c->kind == ObjectKind::kContainer && !c->value.empty()) {
      throw Error(ErrorCode::kInvalidOp, "containers carry no value payload");
    }
    HeapObject obj;
    obj.id = c->id;
    obj.kind = c->kind;
    obj.value = c->value;
    obj.size_bytes = c->size_bytes;
    obj.serializable = c->serializable;
    // An object that cannot be stored can never be loaded back.
    obj.deserializable = c->serializable && c->deserializable;
    obj.hashable = c->hashable;
    NoteId(c->id);
    objects_.emplace(c->id, std::move(obj));
    rec.created.insert(c->id);
    rec.touched.insert(c->id);
  } else if (const auto* b = std::get_if<BindOp>(&op)) {
    object(b->id);
    namespace_.insert_or_assign(b->name, b->id);
    rec.bound.insert(b->name);
  } else if (const auto* u = std::get_if<UnbindOp>(&op)) {
    auto it = namespace_.find(u->name);
    if (it == namespace_.end()) {
      throw Error(ErrorCode::kUnknownVariable,
                  "cannot unbind '" + u->name + "'", {u->name});
    }
    namespace_.erase(it);
    rec.unbound.insert(u->name);
  } else if (const auto* s = std::get_if<SetSlotOp>(&op)) {
    object(s->child);
    HeapObject& parent = mutable_object(s->parent);
    if (parent.kind != ObjectKind::kContainer) {
      throw Error(ErrorCode::kInvalidOp, "set_slot on a non-container object");
    }
    // Cycles are allowed; every traversal carries a visited set.
    parent.slots.insert_or_assign(s->slot, s->child);
    rec.touched.insert(s->parent);
  } else if (const auto* cs = std::get_if<ClearSlotOp>(&op)) {
    HeapObject& parent = mutable_object(cs->parent);
    if (parent.slots.erase(cs->slot) == 0) {
      throw Error(ErrorCode::kInvalidOp, "slot '" + cs->slot + "' is not set");
    }
    rec.touched.insert(cs->parent);
  } else if (const auto* v = std::get_if<SetValueOp>(&op)) {
    HeapObject& obj = mutable_object(v->id);
    if (obj.kind == ObjectKind::kContainer) {
      throw Error(ErrorCode::kInvalidOp, "containers carry no value payload");
    }
    obj.value = v->value;
    rec.touched.insert(v->id);
  }
  return rec;
}

MutationRecord SimHeap::ApplyOps(std::span<const HeapOp> ops) {
  MutationRecord rec;
  for (const auto& op : ops) rec.Merge(Apply(op));
  return rec;
}

void SimHeap::Insert(HeapObject object) {
  if (ever_created_.contains(object.id)) {
    throw Error(ErrorCode::kDuplicateObject,
                "object id " + std::to_string(object.id.value) + " already used");
  }
  NoteId(object.id);
  objects_.emplace(object.id, std::move(object));
}

ObjectId SimHeap::AllocateId() { return ObjectId{max_id_ever_ + 1}; }

std::size_t SimHeap::CollectGarbage() {
  std::set<ObjectId> live;
  std::vector<ObjectId> stack;
  for (const auto& [name, id] : namespace_) stack.push_back(id);
  while (!stack.empty()) {
    ObjectId id = stack.back();
    stack.pop_back();
    if (!live.insert(id).second) continue;
    for (const auto& [label, child] : objects_.at(id).slots) stack.push_back(child);
  }
  std::size_t freed = 0;
  for (auto it = objects_.begin(); it != objects_.end();) {
    if (live.contains(it->first)) {
      ++it;
    } else {
      it = objects_.erase(it);
      ++freed;
    }
  }
  return freed;
}

std::set<ObjectId> ReachableFrom(const SimHeap& heap, ObjectId root) {
  std::set<ObjectId> seen;
  std::deque<ObjectId> queue{root};
  heap.object(root);
  seen.insert(root);
  while (!queue.empty()) {
    ObjectId id = queue.front();
    queue.pop_front();
    for (const auto& [label, child] : heap.object(id).slots) {
      if (seen.insert(child).second) queue.push_back(child);
    }
  }
  return seen;
}

std::set<ObjectId> ReachableObjects(const SimHeap& heap, std::string_view name) {
  return ReachableFrom(heap, heap.root(name));
}

IdGraph BuildIdGraph(const SimHeap& heap, std::string_view name) {
  IdGraph g;
  g.root_name = std::string(name);
  g.root = heap.root(name);
  std::set<ObjectId> nodes = ReachableFrom(heap, g.root);
  g.nodes.assign(nodes.begin(), nodes.end());
  for (ObjectId id : g.nodes) {
    for (const auto& [label, child] : heap.object(id).slots) {
      g.edges.push_back(IdEdge{id, label, child});
    }
  }
  // Nodes are visited in id order and slots in label order, so edges come
  // out sorted already.
  return g;
}

bool IdGraphsOverlap(const IdGraph& a, const IdGraph& b) {
  auto i = a.nodes.begin();
  auto j = b.nodes.begin();
  while (i != a.nodes.end() && j != b.nodes.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

bool IdGraphStructuralDiff(const IdGraph& before, const IdGraph& after) {
  if (before.root_name != after.root_name) {
    throw Error(ErrorCode::kRootMismatch,
                "'" + before.root_name + "' vs '" + after.root_name + "'");
  }
  return before.root != after.root || before.nodes != after.nodes ||
         before.edges != after.edges;
}

namespace {

// FNV-1a over a canonical byte stream, finished with a splitmix64 avalanche.
class StableHasher {
 public:
  void Byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= 0x100000001b3ULL;
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) Byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void Str(std::string_view s) {
    U64(s.size());
    for (char c : s) Byte(static_cast<std::uint8_t>(c));
  }
  std::uint64_t Finish() const {
    std::uint64_t z = state_ + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

constexpr std::uint8_t kNodeMarker = 0x4e;
constexpr std::uint8_t kBackRefMarker = 0x42;

// Depth-first in slot-label order. A revisited object contributes only its
// first-visit index, which cuts cycles and encodes sharing without ids.
bool HashNode(const SimHeap& heap, ObjectId id,
              std::unordered_map<ObjectId, std::uint64_t>& order,
              StableHasher& h) {
  if (auto it = order.find(id); it != order.end()) {
    h.Byte(kBackRefMarker);
    h.U64(it->second);
    return true;
  }
  const HeapObject& obj = heap.object(id);
  if (!obj.hashable) return false;
  order.emplace(id, order.size());
  h.Byte(kNodeMarker);
  h.Byte(static_cast<std::uint8_t>(obj.kind));
  h.Str(obj.value);
  h.U64(obj.slots.size());
  for (const auto& [label, child] : obj.slots) {
    h.Str(label);
    if (!HashNode(heap, child, order, h)) return false;
  }
  return true;
}

}  // namespace

std::optional<std::uint64_t> ValueHashFrom(const SimHeap& heap, ObjectId root,
                                           std::size_t* objects_visited) {
  std::unordered_map<ObjectId, std::uint64_t> order;
  StableHasher h;
  bool ok = HashNode(heap, root, order, h);
  if (objects_visited != nullptr) *objects_visited += order.size();
  if (!ok) return std::nullopt;
  return h.Finish();
}

std::optional<std::uint64_t> ValueHash(const SimHeap& heap, std::string_view name) {
  return ValueHashFrom(heap, heap.root(name));
}

MutationRecord ApplyOps(SimHeap& heap, std::span<const HeapOp> ops) {
  return heap.ApplyOps(ops);
}

}  // namespace statecut
