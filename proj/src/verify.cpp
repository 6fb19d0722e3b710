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

#include "statecut/verify.hpp"

#include <map>
#include <set>
#include <utility>

namespace statecut {

namespace {

using Pair = std::pair<ObjectId, ObjectId>;

bool SameShape(const HeapObject& x, const HeapObject& y) {
  if (x.kind != y.kind || x.value != y.value || x.slots.size() != y.slots.size()) {
    return false;
  }
  auto i = x.slots.begin();
  auto j = y.slots.begin();
  for (; i != x.slots.end(); ++i, ++j) {
    if (i->first != j->first) return false;
  }
  return true;
}

// Walks both graphs in lockstep and collects every visited pair. Returns
// false at the first pair whose objects differ.
bool Bisimilar(const SimHeap& lhs, ObjectId a, const SimHeap& rhs, ObjectId b,
               std::set<Pair>& pairs) {
  std::vector<Pair> stack{{a, b}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (!pairs.insert({x, y}).second) continue;
    const HeapObject& ox = lhs.object(x);
    const HeapObject& oy = rhs.object(y);
    if (!SameShape(ox, oy)) return false;
    auto j = oy.slots.begin();
    for (auto i = ox.slots.begin(); i != ox.slots.end(); ++i, ++j) {
      stack.emplace_back(i->second, j->second);
    }
  }
  return true;
}

}  // namespace

bool ValueEqual(const SimHeap& lhs, ObjectId a, const SimHeap& rhs, ObjectId b) {
  std::set<Pair> pairs;
  return Bisimilar(lhs, a, rhs, b, pairs);
}

VerificationReport Verify(const SimHeap& original, const SimHeap& restored) {
  VerificationReport report;
  std::set<Pair> relation;
  for (const auto& [name, root] : original.names()) {
    auto other = restored.lookup(name);
    if (!other) {
      report.missing.push_back(name);
      continue;
    }
    std::set<Pair> pairs;
    if (!Bisimilar(original, root, restored, *other, pairs)) {
      report.value_diffs.push_back(name);
    }
    relation.insert(pairs.begin(), pairs.end());
  }
  for (const auto& [name, root] : restored.names()) {
    if (!original.is_bound(name)) report.unexpected.push_back(name);
  }
  report.value_equivalent =
      report.missing.empty() && report.unexpected.empty() && report.value_diffs.empty();

  std::map<ObjectId, ObjectId> forward;
  std::map<ObjectId, ObjectId> backward;
  for (const auto& [old_id, new_id] : relation) {
    auto [f, fresh_f] = forward.emplace(old_id, new_id);
    if (!fresh_f && f->second != new_id) {
      report.violations.push_back("original object " + std::to_string(old_id.value) +
                                  " restored as both " + std::to_string(f->second.value) +
                                  " and " + std::to_string(new_id.value));
    }
    auto [b, fresh_b] = backward.emplace(new_id, old_id);
    if (!fresh_b && b->second != old_id) {
      report.violations.push_back("restored object " + std::to_string(new_id.value) +
                                  " stands for both " + std::to_string(b->second.value) +
                                  " and " + std::to_string(old_id.value));
    }
  }
  report.isomorphic = report.value_equivalent && report.violations.empty();
  return report;
}

}  // namespace statecut
