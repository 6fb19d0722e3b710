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

// Small builders that keep hand-written test traces readable.

#ifndef STATECUT_TESTS_TEST_UTIL_HPP_
#define STATECUT_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "statecut/session.hpp"

namespace statecut::testing {

inline ObjectId Id(std::uint64_t v) { return ObjectId{v}; }
inline Timestamp T(std::uint64_t v) { return Timestamp{v}; }

inline CreateOp Scalar(std::uint64_t id, std::string value, std::uint64_t size = 0) {
  return CreateOp{.id = Id(id), .value = std::move(value), .size_bytes = size};
}
inline CreateOp List(std::uint64_t id, std::uint64_t size = 0) {
  return CreateOp{.id = Id(id), .kind = ObjectKind::kContainer, .size_bytes = size};
}
inline CreateOp Opaque(std::uint64_t id, std::uint64_t size = 0) {
  return CreateOp{.id = Id(id),
                  .kind = ObjectKind::kOpaque,
                  .value = "handle",
                  .size_bytes = size,
                  .serializable = false,
                  .deserializable = false,
                  .hashable = false};
}
inline BindOp Bind(std::string name, std::uint64_t id) { return {std::move(name), Id(id)}; }
inline SetSlotOp Slot(std::uint64_t parent, std::string slot, std::uint64_t child) {
  return {Id(parent), std::move(slot), Id(child)};
}
inline SetValueOp Value(std::uint64_t id, std::string v) { return {Id(id), std::move(v)}; }

inline CellProgram Cell(std::string code, double runtime, std::set<std::string> reads,
                        std::vector<HeapOp> ops) {
  CellProgram c;
  c.code_ref = std::move(code);
  c.declared_runtime_s = runtime;
  c.direct_reads = std::move(reads);
  c.ops = std::move(ops);
  return c;
}

inline Profile Bandwidth(double bytes_per_s, double alpha = 1.0) {
  Profile p;
  p.bandwidth_bytes_per_s = bytes_per_s;
  p.alpha = alpha;
  return p;
}

inline std::filesystem::path TraceFile(const std::string& name) {
  return std::filesystem::path(STATECUT_TRACE_DIR) / (name + ".json");
}

inline std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("statecut_test_" + name);
}

}  // namespace statecut::testing

#endif  // STATECUT_TESTS_TEST_UTIL_HPP_
