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

// Simulated kernel state: an object heap with named bindings.
//
// The heap stands in for an interpreter namespace. Objects carry a byte
// payload, labelled child references ("slots"), a logical size, and the
// three capability flags that matter for replication (can it be stored, can
// it be loaded back, can its value be hashed). Variables are namespace
// bindings from a name to a root object; everything reachable through slots
// belongs to the variable.

#ifndef STATECUT_HEAP_HPP_
#define STATECUT_HEAP_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "statecut/types.hpp"

namespace statecut {

enum class ObjectKind : std::uint8_t { kScalar = 0, kContainer = 1, kOpaque = 2 };

std::string_view ObjectKindName(ObjectKind kind);
std::optional<ObjectKind> ParseObjectKind(std::string_view name);

struct HeapObject {
  ObjectId id;
  ObjectKind kind = ObjectKind::kScalar;
  std::string value;
  std::map<std::string, ObjectId> slots;
  std::uint64_t size_bytes = 0;
  bool serializable = true;
  bool deserializable = true;
  bool hashable = true;

  bool operator==(const HeapObject&) const = default;
};

// Heap operations. Object ids are supplied by the caller so traces replay
// deterministically.
struct CreateOp {
  ObjectId id;
  ObjectKind kind = ObjectKind::kScalar;
  std::string value;
  std::uint64_t size_bytes = 0;
  bool serializable = true;
  bool deserializable = true;
  bool hashable = true;
  bool operator==(const CreateOp&) const = default;
};
struct BindOp {
  std::string name;
  ObjectId id;
  bool operator==(const BindOp&) const = default;
};
struct UnbindOp {
  std::string name;
  bool operator==(const UnbindOp&) const = default;
};
struct SetSlotOp {
  ObjectId parent;
  std::string slot;
  ObjectId child;
  bool operator==(const SetSlotOp&) const = default;
};
struct ClearSlotOp {
  ObjectId parent;
  std::string slot;
  bool operator==(const ClearSlotOp&) const = default;
};
struct SetValueOp {
  ObjectId id;
  std::string value;
  bool operator==(const SetValueOp&) const = default;
};

using HeapOp =
    std::variant<CreateOp, BindOp, UnbindOp, SetSlotOp, ClearSlotOp, SetValueOp>;

/// Object ids an op refers to that must already exist (create refers to none).
std::vector<ObjectId> ReferencedObjects(const HeapOp& op);

/// What a sequence of ops did to the heap.
struct MutationRecord {
  std::set<std::string> bound;    // names bound or rebound
  std::set<std::string> unbound;  // names removed
  std::set<ObjectId> created;
  std::set<ObjectId> touched;     // created or mutated objects

  void Merge(const MutationRecord& other);
};

class SimHeap {
 public:
  SimHeap() = default;

  bool contains(ObjectId id) const { return objects_.contains(id); }
  const HeapObject& object(ObjectId id) const;
  const std::map<ObjectId, HeapObject>& objects() const { return objects_; }

  bool is_bound(std::string_view name) const;
  std::optional<ObjectId> lookup(std::string_view name) const;
  /// Root object of `name`; throws kUnknownVariable.
  ObjectId root(std::string_view name) const;
  const std::map<std::string, ObjectId, std::less<>>& names() const {
    return namespace_;
  }

  MutationRecord Apply(const HeapOp& op);
  /// Applies ops in order. On error the ops before the failing one stay
  /// applied and the error propagates.
  MutationRecord ApplyOps(std::span<const HeapOp> ops);

  /// Inserts a fully formed object (used when loading stored objects).
  /// Slots may reference objects inserted later; callers validate.
  void Insert(HeapObject object);

  /// Next id never used in this heap.
  ObjectId AllocateId();

  /// Mark-and-sweep from the namespace. Returns the number of objects freed.
  std::size_t CollectGarbage();

 private:
  HeapObject& mutable_object(ObjectId id);
  void NoteId(ObjectId id);

  std::map<ObjectId, HeapObject> objects_;
  std::map<std::string, ObjectId, std::less<>> namespace_;
  std::uint64_t max_id_ever_ = 0;
  std::set<ObjectId> ever_created_;
};

/// Transitive closure over slots from `root`, including `root`.
std::set<ObjectId> ReachableFrom(const SimHeap& heap, ObjectId root);

/// Transitive closure from the object bound to `name`.
std::set<ObjectId> ReachableObjects(const SimHeap& heap, std::string_view name);

struct IdEdge {
  ObjectId parent;
  std::string slot;
  ObjectId child;
  friend auto operator<=>(const IdEdge&, const IdEdge&) = default;
};

/// Reference-structure fingerprint of one variable.
struct IdGraph {
  std::string root_name;
  ObjectId root;
  std::vector<ObjectId> nodes;  // sorted
  std::vector<IdEdge> edges;    // sorted

  bool operator==(const IdGraph&) const = default;
};

IdGraph BuildIdGraph(const SimHeap& heap, std::string_view name);

/// True iff the node sets intersect.
bool IdGraphsOverlap(const IdGraph& a, const IdGraph& b);

/// True iff the reference structure differs. Throws kRootMismatch when the
/// graphs describe different variables.
bool IdGraphStructuralDiff(const IdGraph& before, const IdGraph& after);

/// Identity-blind 64-bit hash of the reachable subgraph of `name`, or
/// nullopt (unhashable) when any reachable object is not hashable.
std::optional<std::uint64_t> ValueHash(const SimHeap& heap, std::string_view name);
std::optional<std::uint64_t> ValueHashFrom(const SimHeap& heap, ObjectId root,
                                           std::size_t* objects_visited = nullptr);

/// Applies `ops` to `heap` (free-function form of SimHeap::ApplyOps).
MutationRecord ApplyOps(SimHeap& heap, std::span<const HeapOp> ops);

}  // namespace statecut

#endif  // STATECUT_HEAP_HPP_
