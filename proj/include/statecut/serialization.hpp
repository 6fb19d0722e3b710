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

// JSON forms of traces, plans, the AHG, the cost model and reports.
// Object keys are emitted in sorted order, so output is byte-stable.
// Malformed input raises kFormatError.

#ifndef STATECUT_SERIALIZATION_HPP_
#define STATECUT_SERIALIZATION_HPP_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "statecut/ahg.hpp"
#include "statecut/cost_model.hpp"
#include "statecut/heap.hpp"
#include "statecut/planner.hpp"
#include "statecut/session.hpp"
#include "statecut/verify.hpp"

namespace statecut {

using Json = nlohmann::json;

Json ToJson(const HeapOp& op);
HeapOp HeapOpFromJson(const Json& j);

Json ToJson(const CellProgram& cell);
CellProgram CellProgramFromJson(const Json& j);

Json ToJson(const Profile& profile);
Profile ProfileFromJson(const Json& j);

Json ToJson(const Trace& trace);
Trace TraceFromJson(const Json& j);

Json ToJson(const Ahg& ahg);
Ahg AhgFromJson(const Json& j);

Json ToJson(const CostModel& cost);
CostModel CostModelFromJson(const Json& j);

Json ToJson(const ReplicationPlan& plan);
ReplicationPlan PlanFromJson(const Json& j);

Json ToJson(const VerificationReport& report);

Json ToJson(const std::map<std::string, VariableAnnotation>& annotations);
std::map<std::string, VariableAnnotation> AnnotationsFromJson(const Json& j);

/// JSON value of a cost: a number, or the string "inf".
Json CostToJson(Cost c);
Cost CostFromJson(const Json& j);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

Trace LoadTrace(const std::filesystem::path& path);
void SaveTrace(const Trace& trace, const std::filesystem::path& path);

}  // namespace statecut

#endif  // STATECUT_SERIALIZATION_HPP_
