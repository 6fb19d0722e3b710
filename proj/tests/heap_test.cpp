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

#include <gtest/gtest.h>

#include <random>

#include "statecut/error.hpp"
#include "test_util.hpp"

namespace statecut {
namespace {

using namespace statecut::testing;

SimHeap NestedLists() {
  SimHeap h;
  std::vector<HeapOp> ops{Scalar(1, "a", 10), Scalar(2, "b", 20), List(3, 5),
                          Slot(3, "0", 1),    Slot(3, "1", 2),    Bind("l", 3),
                          List(4),            Slot(4, "0", 3),    Bind("ll", 4)};
  h.ApplyOps(ops);
  return h;
}

TEST(HeapTest, ReachabilityFollowsSlots) {
  SimHeap h = NestedLists();
  EXPECT_EQ(ReachableObjects(h, "l"), (std::set<ObjectId>{Id(1), Id(2), Id(3)}));
  EXPECT_EQ(ReachableObjects(h, "ll").size(), 4u);
}

TEST(HeapTest, ReachabilityTerminatesOnCycles) {
  SimHeap h;
  h.ApplyOps(std::vector<HeapOp>{List(1), List(2), Slot(1, "n", 2), Slot(2, "n", 1),
                                 Bind("c", 1)});
  EXPECT_EQ(ReachableObjects(h, "c").size(), 2u);
  EXPECT_TRUE(ValueHash(h, "c").has_value());
}

TEST(HeapTest, RejectsReusedIdsEvenAfterCollection) {
  SimHeap h;
  h.Apply(Scalar(1, "x"));
  EXPECT_EQ(h.CollectGarbage(), 1u);
  EXPECT_FALSE(h.contains(Id(1)));
  try {
    h.Apply(Scalar(1, "y"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateObject);
  }
  EXPECT_EQ(h.AllocateId(), Id(2));
}

TEST(HeapTest, InvalidOpsThrow) {
  SimHeap h = NestedLists();
  auto code_of = [&](const HeapOp& op) {
    try {
      h.Apply(op);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code_of(Slot(1, "x", 2)), ErrorCode::kInvalidOp);
  EXPECT_EQ(code_of(Slot(3, "x", 99)), ErrorCode::kUnknownObject);
  EXPECT_EQ(code_of(ClearSlotOp{Id(3), "nope"}), ErrorCode::kInvalidOp);
  EXPECT_EQ(code_of(Value(3, "v")), ErrorCode::kInvalidOp);
  EXPECT_EQ(code_of(UnbindOp{"ghost"}), ErrorCode::kUnknownVariable);
  EXPECT_EQ(code_of(Bind("z", 42)), ErrorCode::kUnknownObject);
}

TEST(HeapTest, GarbageCollectionKeepsReachableObjects) {
  SimHeap h = NestedLists();
  h.Apply(UnbindOp{"ll"});
  EXPECT_EQ(h.CollectGarbage(), 1u);
  EXPECT_TRUE(h.contains(Id(3)));
  EXPECT_FALSE(h.contains(Id(4)));
}

TEST(HeapTest, HashIgnoresObjectIdentity) {
  SimHeap a, b;
  a.ApplyOps(std::vector<HeapOp>{Scalar(1, "v"), List(2), Slot(2, "0", 1), Bind("x", 2)});
  b.ApplyOps(std::vector<HeapOp>{Scalar(70, "v"), List(9), Slot(9, "0", 70), Bind("x", 9)});
  EXPECT_EQ(ValueHash(a, "x"), ValueHash(b, "x"));
  b.Apply(Value(70, "w"));
  EXPECT_NE(ValueHash(a, "x"), ValueHash(b, "x"));
}

TEST(HeapTest, HashSeesSharingButIdGraphSeesSwap) {
  // [[1]] built from one list versus a fresh equal list: same value.
  SimHeap h;
  h.ApplyOps(std::vector<HeapOp>{Scalar(1, "1"), List(2), Slot(2, "0", 1), Bind("a", 2),
                                 List(3), Slot(3, "0", 2), Bind("aa", 3)});
  auto hash_before = ValueHash(h, "aa");
  IdGraph before = BuildIdGraph(h, "aa");
  h.ApplyOps(std::vector<HeapOp>{Scalar(4, "1"), List(5), Slot(5, "0", 4), Slot(3, "0", 5)});
  EXPECT_EQ(ValueHash(h, "aa"), hash_before);
  EXPECT_TRUE(IdGraphStructuralDiff(before, BuildIdGraph(h, "aa")));
}

TEST(HeapTest, UnhashableObjectsPoisonTheHash) {
  SimHeap h;
  h.ApplyOps(std::vector<HeapOp>{Opaque(1), List(2), Slot(2, "0", 1), Bind("x", 2)});
  EXPECT_FALSE(ValueHash(h, "x").has_value());
}

TEST(HeapTest, UnserializableImpliesUndeserializable) {
  SimHeap h;
  h.Apply(CreateOp{.id = Id(1), .serializable = false, .deserializable = true});
  EXPECT_FALSE(h.object(Id(1)).deserializable);
}

TEST(HeapTest, IdGraphOverlapDetectsAliases) {
  SimHeap h = NestedLists();
  h.ApplyOps(std::vector<HeapOp>{Scalar(9, "z"), Bind("z", 9)});
  EXPECT_TRUE(IdGraphsOverlap(BuildIdGraph(h, "l"), BuildIdGraph(h, "ll")));
  EXPECT_FALSE(IdGraphsOverlap(BuildIdGraph(h, "l"), BuildIdGraph(h, "z")));
}

TEST(HeapTest, StructuralDiffRequiresSameRootName) {
  SimHeap h = NestedLists();
  EXPECT_THROW(IdGraphStructuralDiff(BuildIdGraph(h, "l"), BuildIdGraph(h, "ll")), Error);
}

// Property: relabelling every id leaves value hashes unchanged, and
// changing any single scalar value changes the hash of its owners.
TEST(HeapProperty, HashIsIdentityFreeOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    SimHeap a, b;
    const std::uint64_t offset = 1000;
    int n = 2 + static_cast<int>(rng() % 12);
    std::vector<HeapOp> ops;
    for (int i = 1; i <= n; ++i) {
      bool container = rng() % 2 == 0;
      ops.push_back(container ? List(i) : Scalar(i, std::to_string(rng() % 3)));
    }
    for (int e = 0; e < n * 2; ++e) {
      std::uint64_t p = 1 + rng() % n;
      std::uint64_t c = 1 + rng() % n;
      if (std::get<CreateOp>(ops[p - 1]).kind == ObjectKind::kContainer) {
        ops.push_back(Slot(p, std::to_string(rng() % 3), c));
      }
    }
    ops.push_back(Bind("root", 1));
    a.ApplyOps(ops);
    for (auto& op : ops) {
      std::visit([&](auto& o) {
        using O = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<O, CreateOp> || std::is_same_v<O, BindOp>) {
          o.id.value += offset;
        } else if constexpr (std::is_same_v<O, SetSlotOp>) {
          o.parent.value += offset;
          o.child.value += offset;
        }
      }, op);
    }
    b.ApplyOps(ops);
    ASSERT_EQ(ValueHash(a, "root"), ValueHash(b, "root"));
    for (ObjectId id : ReachableObjects(a, "root")) {
      if (a.object(id).kind != ObjectKind::kScalar) continue;
      SimHeap c = a;
      c.Apply(Value(id.value, "changed"));
      EXPECT_NE(ValueHash(c, "root"), ValueHash(a, "root"));
    }
  }
}

}  // namespace
}  // namespace statecut
