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

#include <gtest/gtest.h>

#include "statecut/error.hpp"
#include "statecut/generator.hpp"
#include "statecut/monitor.hpp"
#include "statecut/planner.hpp"
#include "test_util.hpp"

namespace statecut {
namespace {

using namespace statecut::testing;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(SerializationTest, TraceRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorOptions g;
    g.seed = seed;
    g.nondeterministic_rate = 0.3;
    Trace t = GenerateTrace(g);
    t.variable_annotations["v0"] = VariableAnnotation::kAlwaysCopy;
    EXPECT_EQ(TraceFromJson(ToJson(t)), t);
  }
}

TEST(SerializationTest, TraceFileRoundTrip) {
  Trace t = LoadTrace(TraceFile("five_cell"));
  auto path = TempPath("five_cell.json");
  SaveTrace(t, path);
  EXPECT_EQ(LoadTrace(path), t);
  std::filesystem::remove(path);
}

TEST(SerializationTest, AhgAndCostModelRoundTrip) {
  Session s = RunTrace(LoadTrace(TraceFile("five_cell")));
  s.cost.ProfileVariables(s.heap, ActiveSnapshots(s.ahg).names());
  Ahg back = AhgFromJson(ToJson(s.ahg));
  EXPECT_EQ(ToJson(back), ToJson(s.ahg));
  EXPECT_EQ(CostModelFromJson(ToJson(s.cost)), s.cost);
}

TEST(SerializationTest, PlanRoundTripIncludingInfiniteCost) {
  Session s = RunTrace(LoadTrace(TraceFile("five_cell")));
  ReplicationPlan p = PlanSession(s);
  EXPECT_EQ(PlanFromJson(ToJson(p)), p);
  p.cost = Cost::Infinite();
  EXPECT_EQ(ToJson(p)["cost_s"], "inf");
  EXPECT_EQ(PlanFromJson(ToJson(p)), p);
}

TEST(SerializationTest, MalformedInputIsAFormatError) {
  EXPECT_EQ(CodeOf([] { TraceFromJson(Json::array()); }), ErrorCode::kFormatError);
  EXPECT_EQ(CodeOf([] { TraceFromJson(Json{{"cells", {{{"ops", Json::array()}}}}}); }),
            ErrorCode::kFormatError);
  EXPECT_EQ(CodeOf([] { HeapOpFromJson(Json{{"op", "explode"}}); }), ErrorCode::kFormatError);
  EXPECT_EQ(CodeOf([] { ProfileFromJson(Json{{"bandwidth_bytes_per_s", -1}}); }),
            ErrorCode::kFormatError);
  EXPECT_EQ(CodeOf([] { AnnotationsFromJson(Json{{"x", "sometimes"}}); }),
            ErrorCode::kFormatError);
  EXPECT_EQ(CodeOf([] { CostFromJson("lots"); }), ErrorCode::kFormatError);
}

TEST(SerializationTest, DuplicateCodeRefsRejected) {
  Trace t;
  t.cells.push_back(Cell("same", 1, {}, {}));
  t.cells.push_back(Cell("same", 1, {}, {}));
  EXPECT_EQ(CodeOf([&] { TraceFromJson(ToJson(t)); }), ErrorCode::kFormatError);
}

TEST(SerializationTest, MissingFileIsAnIoError) {
  EXPECT_EQ(CodeOf([] { LoadTrace("/nonexistent/trace.json"); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace statecut
