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

// Cost model: profiled sizes, network profile and cell runtimes, and the
// migration / recomputation cost functions the optimizer minimizes.
//
//   w_M(S)          = sum_{x in S} alpha * store(x) + load(x)
//   w_R(S, ground)  = sum_{c in req_merged(active(S), ground)} rerun(c)
//   total(S)        = w_M(S) + w_R(X - S, ground = S)

#ifndef STATECUT_COST_MODEL_HPP_
#define STATECUT_COST_MODEL_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "statecut/ahg.hpp"
#include "statecut/heap.hpp"
#include "statecut/types.hpp"

namespace statecut {

/// Paper's restoration-centric storage discount.
inline constexpr double kRestoreObjectiveAlpha = 0.05;

struct Profile {
  double bandwidth_bytes_per_s = 1e8;
  double latency_s = 0.0;
  /// Storage-time discount; 1 weighs checkpoint writing like restoring.
  double alpha = 1.0;
  /// Measured per-variable store/load times that replace the
  /// latency + size / bandwidth estimate when present.
  std::map<std::string, double> store_s;
  std::map<std::string, double> load_s;

  bool operator==(const Profile&) const = default;
};

/// What the cost model knows about one variable's reachable object set.
struct VariableProfile {
  std::uint64_t size_bytes = 0;
  bool serializable = true;
  bool deserializable = true;

  bool operator==(const VariableProfile&) const = default;
};

class CostModel {
 public:
  CostModel() = default;
  explicit CostModel(Profile profile) : profile_(std::move(profile)) {}

  const Profile& profile() const { return profile_; }
  Profile& mutable_profile() { return profile_; }

  /// Rerunning a nondeterministic cell would not reproduce its outputs, so
  /// by default such cells are priced at infinity. Disabling the guard is
  /// only useful to demonstrate the hazard.
  bool nondeterministic_guard() const { return nondeterministic_guard_; }
  void set_nondeterministic_guard(bool on) { nondeterministic_guard_ = on; }

  void RecordRuntime(Timestamp t, double seconds) { runtimes_[t.value] = seconds; }
  const std::map<std::uint64_t, double>& runtimes() const { return runtimes_; }

  /// Replaces the variable profiles with fresh ones for `names`.
  void ProfileVariables(const SimHeap& heap, const std::set<std::string>& names);
  void SetVariableProfile(const std::string& name, VariableProfile p) {
    variables_[name] = p;
  }
  const std::map<std::string, VariableProfile>& variables() const {
    return variables_;
  }
  /// Throws kUnknownVariable when `name` has not been profiled.
  const VariableProfile& variable(const std::string& name) const;

  bool operator==(const CostModel&) const = default;

 private:
  Profile profile_;
  bool nondeterministic_guard_ = true;
  std::map<std::uint64_t, double> runtimes_;
  std::map<std::string, VariableProfile> variables_;
};

/// Size and capability flags of everything reachable from `name`; shared
/// objects are counted once.
VariableProfile ProfileVariable(const SimHeap& heap, const std::string& name);

Cost EstimateStore(const CostModel& model, const std::string& name);
Cost EstimateLoad(const CostModel& model, const std::string& name);

/// alpha * store(x) + load(x) for one variable.
Cost MigrationCost(const CostModel& model, const std::string& name);
Cost MigrationCost(const CostModel& model, const std::set<std::string>& names);

/// Cost of rerunning one cell: its observed runtime, or infinity when it is
/// never-rerun (or nondeterministic while the guard is on).
Cost RerunCost(const CostModel& model, const Ahg& ahg, Timestamp t);

/// Sum of RerunCost over `cells`.
Cost RerunCost(const CostModel& model, const Ahg& ahg,
               const std::vector<Timestamp>& cells);

/// Cost of recomputing the active snapshots of `names` from `ground`.
Cost RecomputeCost(const CostModel& model, const Ahg& ahg,
                   const std::set<std::string>& names,
                   const std::set<std::string>& ground);

/// Migrate `migrate`, recompute every other active variable.
Cost TotalCost(const CostModel& model, const Ahg& ahg,
               const std::set<std::string>& migrate);

/// Unordered pairs (first < second) of variables whose reachable object
/// sets intersect.
struct LinkedPairs {
  std::set<std::pair<std::string, std::string>> pairs;

  bool linked(const std::string& a, const std::string& b) const;
  bool operator==(const LinkedPairs&) const = default;
};

LinkedPairs ComputeLinkedPairs(const SimHeap& heap,
                               const std::set<std::string>& names);

/// True when every linked pair is either fully inside or fully outside S.
bool SatisfiesLinkedConstraint(const LinkedPairs& linked,
                               const std::set<std::string>& migrate);

}  // namespace statecut

#endif  // STATECUT_COST_MODEL_HPP_
