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

#include "statecut/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "statecut/heap.hpp"

namespace statecut {

namespace {

class TraceBuilder {
 public:
  explicit TraceBuilder(const GeneratorOptions& o) : opt_(o), rng_(o.seed) {}

  Trace Build() {
    Trace trace;
    trace.profile = opt_.profile;
    if (opt_.random_profile) {
      trace.profile.bandwidth_bytes_per_s = LogUniform(1e6, 1e9);
      trace.profile.latency_s = Uniform(0.0, 1e-3);
      trace.profile.alpha = Chance(0.5) ? 1.0 : Uniform(0.0, 1.0);
    }
    for (std::size_t i = 0; i < opt_.cells; ++i) trace.cells.push_back(Cell(i));
    return trace;
  }

 private:
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double LogUniform(double lo, double hi) {
    return std::exp(Uniform(std::log(lo), std::log(hi)));
  }
  bool Chance(double p) { return p > 0 && Uniform(0.0, 1.0) < p; }
  std::size_t Index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[Index(v.size())];
  }
  std::string Value() { return std::to_string(Index(8)); }

  // Applies `op` to the shadow heap and records it.
  void Emit(HeapOp op) {
    heap_.Apply(op);
    ops_.push_back(std::move(op));
  }

  ObjectId NewLeaf() {
    CreateOp c;
    c.id = ObjectId{++last_id_};
    c.size_bytes = static_cast<std::uint64_t>(LogUniform(opt_.min_size_bytes, opt_.max_size_bytes));
    if (Chance(opt_.unserializable_rate)) {
      c.kind = ObjectKind::kOpaque;
      c.serializable = false;
      c.deserializable = false;
      c.hashable = Chance(0.5);
      c.value = "opaque" + Value();
    } else {
      c.kind = ObjectKind::kScalar;
      c.deserializable = !Chance(opt_.undeserializable_rate);
      c.value = Value();
    }
    Emit(c);
    touchable_.push_back(c.id);
    return c.id;
  }

  ObjectId NewContainer() {
    CreateOp c;
    c.id = ObjectId{++last_id_};
    c.kind = ObjectKind::kContainer;
    c.size_bytes = static_cast<std::uint64_t>(LogUniform(64, 1e4));
    Emit(c);
    touchable_.push_back(c.id);
    std::size_t slots = 1 + Index(3);
    for (std::size_t s = 0; s < slots; ++s) {
      ObjectId child = (Chance(opt_.alias_density) && touchable_.size() > 1)
                           ? Pick(touchable_)
                           : NewLeaf();
      Emit(SetSlotOp{c.id, std::to_string(s), child});
    }
    return c.id;
  }

  void CreateVariable() {
    std::string name = "v" + std::to_string(Index(opt_.max_variables));
    ObjectId root;
    if (!touchable_.empty() && Chance(opt_.alias_density * 0.5)) {
      root = Pick(touchable_);  // plain alias: y = x
    } else if (Chance(0.5)) {
      root = NewLeaf();
    } else {
      root = NewContainer();
    }
    Emit(BindOp{name, root});
  }

  void Mutate() {
    ObjectId target = Pick(touchable_);
    const HeapObject& obj = heap_.object(target);
    if (obj.kind != ObjectKind::kContainer) {
      Emit(SetValueOp{target, Value()});
      return;
    }
    double roll = Uniform(0.0, 1.0);
    if (roll < 0.2 && !obj.slots.empty()) {
      auto it = obj.slots.begin();
      std::advance(it, static_cast<long>(Index(obj.slots.size())));
      Emit(ClearSlotOp{target, it->first});
    } else {
      std::string slot = std::to_string(Index(4));
      ObjectId child = Chance(opt_.alias_density) ? Pick(touchable_) : NewLeaf();
      Emit(SetSlotOp{target, slot, child});
    }
  }

  CellProgram Cell(std::size_t index) {
    CellProgram cell;
    cell.code_ref = opt_.template_pool == 0
                        ? "cell" + std::to_string(index + 1)
                        : "tpl" + std::to_string(Index(opt_.template_pool)) + "@" +
                              std::to_string(index + 1);
    ops_.clear();
    touchable_.clear();

    std::vector<std::string> bound;
    for (const auto& [name, id] : heap_.names()) bound.push_back(name);
    std::size_t reads = bound.empty() ? 0 : Index(std::min<std::size_t>(3, bound.size() + 1));
    for (std::size_t r = 0; r < reads; ++r) cell.direct_reads.insert(Pick(bound));
    std::set<ObjectId> allowed;
    for (const auto& name : cell.direct_reads) {
      auto reach = ReachableObjects(heap_, name);
      allowed.insert(reach.begin(), reach.end());
    }
    touchable_.assign(allowed.begin(), allowed.end());

    std::size_t actions = 1 + Index(3);
    for (std::size_t a = 0; a < actions; ++a) {
      double roll = Uniform(0.0, 1.0);
      if (roll < opt_.delete_rate && !cell.direct_reads.empty()) {
        const std::string& victim = *std::next(cell.direct_reads.begin(),
                                               static_cast<long>(Index(cell.direct_reads.size())));
        if (heap_.is_bound(victim)) Emit(UnbindOp{victim});
      } else if (roll < 0.55 || touchable_.empty()) {
        CreateVariable();
      } else {
        Mutate();
      }
    }
    cell.ops = ops_;
    cell.declared_runtime_s = LogUniform(opt_.min_runtime_s, opt_.max_runtime_s);
    cell.never_rerun = Chance(opt_.never_rerun_rate);
    if (Chance(opt_.nondeterministic_rate)) {
      cell.nondeterministic = true;
      std::vector<HeapOp> alt = ops_;
      for (auto& op : alt) {
        if (auto* c = std::get_if<CreateOp>(&op)) c->value += "~";
        if (auto* v = std::get_if<SetValueOp>(&op)) v->value += "~";
      }
      cell.alt_ops = std::move(alt);
    }
    heap_.CollectGarbage();
    return cell;
  }

  const GeneratorOptions& opt_;
  std::mt19937_64 rng_;
  SimHeap heap_;
  std::uint64_t last_id_ = 0;
  std::vector<HeapOp> ops_;
  std::vector<ObjectId> touchable_;
};

}  // namespace

Trace GenerateTrace(const GeneratorOptions& options) {
  return TraceBuilder(options).Build();
}

}  // namespace statecut
