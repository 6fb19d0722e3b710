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

#include "statecut/cost_model.hpp"

#include <gtest/gtest.h>

#include "statecut/error.hpp"
#include "statecut/monitor.hpp"
#include "statecut/serialization.hpp"
#include "test_util.hpp"

namespace statecut {
namespace {

using namespace statecut::testing;

Session Profiled(const Trace& t) {
  Session s = RunTrace(t);
  s.cost.ProfileVariables(s.heap, ActiveSnapshots(s.ahg).names());
  return s;
}

TEST(CostModelTest, TransferTimeFromSizeAndBandwidth) {
  Trace t;
  t.profile = Bandwidth(1e6, 0.5);
  t.profile.latency_s = 0.25;
  t.cells.push_back(Cell("c", 3, {}, {Scalar(1, "a", 2'000'000), List(2, 1'000'000),
                                      Slot(2, "0", 1), Bind("x", 2)}));
  Session s = Profiled(t);
  EXPECT_EQ(s.cost.variable("x").size_bytes, 3'000'000u);
  EXPECT_DOUBLE_EQ(EstimateStore(s.cost, "x").seconds(), 3.25);
  EXPECT_DOUBLE_EQ(EstimateLoad(s.cost, "x").seconds(), 3.25);
  EXPECT_DOUBLE_EQ(MigrationCost(s.cost, "x").seconds(), 0.5 * 3.25 + 3.25);
  EXPECT_DOUBLE_EQ(RerunCost(s.cost, s.ahg, T(1)).seconds(), 3.0);
}

TEST(CostModelTest, MeasuredOverridesWin) {
  Session s = Profiled(LoadTrace(TraceFile("sklearn_df")));
  EXPECT_DOUBLE_EQ(EstimateStore(s.cost, "df").seconds(), 6.19);
  EXPECT_DOUBLE_EQ(EstimateLoad(s.cost, "df").seconds(), 1.17);
  EXPECT_DOUBLE_EQ(MigrationCost(s.cost, "df").seconds(), 6.19 + 1.17);
}

TEST(CostModelTest, UnserializableMeansInfiniteStore) {
  Trace t;
  t.cells.push_back(Cell("c", 1, {}, {Opaque(1, 10), List(2), Slot(2, "0", 1), Bind("x", 2)}));
  Session s = Profiled(t);
  EXPECT_TRUE(EstimateStore(s.cost, "x").is_infinite());
  EXPECT_TRUE(EstimateLoad(s.cost, "x").is_finite());
  EXPECT_TRUE(MigrationCost(s.cost, std::set<std::string>{"x"}).is_infinite());
}

TEST(CostModelTest, NeverRerunAndNondeterministicCells) {
  Trace t = LoadTrace(TraceFile("nondeterministic"));
  Session s = Profiled(t);
  EXPECT_TRUE(RerunCost(s.cost, s.ahg, T(1)).is_infinite());
  s.cost.set_nondeterministic_guard(false);
  EXPECT_DOUBLE_EQ(RerunCost(s.cost, s.ahg, T(1)).seconds(), 1.0);
  t.cells[0].nondeterministic = false;
  t.cells[0].never_rerun = true;
  Session n = Profiled(t);
  EXPECT_TRUE(RerunCost(n.cost, n.ahg, T(1)).is_infinite());
}

TEST(CostModelTest, TotalCostMatchesHandComputation) {
  Session s = Profiled(LoadTrace(TraceFile("motivating")));
  EXPECT_DOUBLE_EQ(TotalCost(s.cost, s.ahg, {}).seconds(), 1980.0);
  EXPECT_DOUBLE_EQ(TotalCost(s.cost, s.ahg, {"model", "plot"}).seconds(), 36.0 + 240.0);
  EXPECT_DOUBLE_EQ(
      TotalCost(s.cost, s.ahg, {"data", "X_train", "X_test", "model", "plot"}).seconds(),
      1236.0);
  EXPECT_DOUBLE_EQ(RecomputeCost(s.cost, s.ahg, {"plot"}, {"model", "X_test"}).seconds(), 240.0);
}

TEST(CostModelTest, LinkedPairsFromSharedObjects) {
  Session s = Profiled(LoadTrace(TraceFile("five_cell")));
  LinkedPairs lp = ComputeLinkedPairs(s.heap, ActiveSnapshots(s.ahg).names());
  EXPECT_EQ(lp.pairs.size(), 1u);
  EXPECT_TRUE(lp.linked("l1", "2dlist1"));
  EXPECT_TRUE(lp.linked("2dlist1", "l1"));
  EXPECT_FALSE(lp.linked("x", "y"));
  EXPECT_TRUE(SatisfiesLinkedConstraint(lp, {"l1", "2dlist1"}));
  EXPECT_FALSE(SatisfiesLinkedConstraint(lp, {"l1"}));
}

TEST(CostModelTest, UnknownVariableThrows) {
  CostModel m;
  try {
    m.variable("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownVariable);
  }
}

}  // namespace
}  // namespace statecut
