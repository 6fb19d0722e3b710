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

// Checkpoint writer and session restorer.
//
// File layout (little-endian):
//   8 bytes   magic "STATECUT"
//   u32       format version
//   u64 + N   JSON manifest (plan, AHG, cost model, variable table, cell
//             archive, annotations)
//   u64 + M   payload: u64 record count, then per object, in ascending
//             original id order:
//               u64 id, u8 kind, u8 flags (1 serializable, 2 deserializable,
//               4 hashable), u64 size_bytes, u32 + bytes value,
//               u32 slot count, per slot u32 + bytes label and u64 child id

#ifndef STATECUT_REPLICATOR_HPP_
#define STATECUT_REPLICATOR_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "statecut/ahg.hpp"
#include "statecut/cost_model.hpp"
#include "statecut/heap.hpp"
#include "statecut/planner.hpp"
#include "statecut/session.hpp"

namespace statecut {

inline constexpr std::string_view kCheckpointMagic = "STATECUT";
inline constexpr std::uint32_t kCheckpointFormatVersion = 1;

struct Checkpoint {
  std::uint32_t format_version = kCheckpointFormatVersion;
  ReplicationPlan plan;
  Ahg ahg;
  CostModel cost;
  /// Migrated variable -> original root id.
  std::map<std::string, ObjectId> variables;
  std::map<std::string, CellProgram> archive;
  std::map<std::string, VariableAnnotation> annotations;
  /// Union of the migrated variables' reachable objects, each once, keyed
  /// and sorted by original id.
  std::vector<HeapObject> payload;

  /// Sum of size_bytes over the stored objects.
  std::uint64_t payload_logical_bytes() const;
};

/// Snapshot of `session` under `plan`. Ids are translated back to the
/// original session's ids, so checkpointing a restored session reproduces
/// the original bytes. Throws kSerializationError when a migrated variable
/// reaches a non-serializable object.
Checkpoint MakeCheckpoint(const Session& session, const ReplicationPlan& plan);

std::string EncodeManifest(const Checkpoint& checkpoint);
std::string EncodePayload(const Checkpoint& checkpoint);
std::string EncodeCheckpoint(const Checkpoint& checkpoint);
/// Throws kFormatError on any malformed input.
Checkpoint DecodeCheckpoint(std::string_view bytes);

Checkpoint WriteCheckpoint(const Session& session, const ReplicationPlan& plan,
                           const std::filesystem::path& path);
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

/// Logical bytes a copy-everything checkpoint of the session would store.
std::uint64_t CopyAllPayloadBytes(const SimHeap& heap,
                                  const std::set<std::string>& names);

/// Profile-evaluated time spent on each replication phase.
struct TimingReport {
  Cost store;
  Cost load;
  Cost rerun;
  double alpha = 1.0;

  /// alpha * store + load + rerun; equals the plan cost when no fallback
  /// recomputation happened.
  Cost weighted_total() const { return alpha * store + load + rerun; }
  /// load + rerun.
  Cost restore_time() const { return load + rerun; }
};

struct RestoreOptions {
  /// Fault injection: return true to make loading the object with this
  /// original id fail as if it were undeserializable.
  std::function<bool(ObjectId)> fail_load;
};

struct RestoreResult {
  Session session;
  /// Migrated variables that failed to load and were recomputed instead.
  std::set<std::string> fallback;
  /// Cells actually rerun, oldest first.
  std::vector<Timestamp> rerun;
  TimingReport timing;
};

/// Cells to rerun when the variables in `failed` cannot be loaded: the
/// plan's recompute set plus `failed`, grounded on the remaining migrated
/// variables. Throws kUnreconstructable when a required cell cannot be
/// rerun.
std::vector<Timestamp> FallbackRecompute(const Checkpoint& checkpoint,
                                         const std::set<std::string>& failed);

/// Rebuilds the session on a fresh heap: reruns cells and declares migrated
/// variables in original timestamp order. A migrated variable is declared
/// after any rerun at its snapshot's timestamp, so the stored copy wins and
/// aliases into it are preserved. Variables that fail to load (and those
/// sharing objects with them) fall back to recomputation.
RestoreResult Restore(const Checkpoint& checkpoint, const RestoreOptions& options = {});

}  // namespace statecut

#endif  // STATECUT_REPLICATOR_HPP_
