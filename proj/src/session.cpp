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

#include "statecut/session.hpp"

namespace statecut {

std::string_view VariableAnnotationName(VariableAnnotation a) {
  switch (a) {
    case VariableAnnotation::kAlwaysCopy: return "always_copy";
    case VariableAnnotation::kAlwaysRecompute: return "always_recompute";
  }
  return "always_copy";
}

std::optional<VariableAnnotation> ParseVariableAnnotation(std::string_view s) {
  if (s == "always_copy") return VariableAnnotation::kAlwaysCopy;
  if (s == "always_recompute") return VariableAnnotation::kAlwaysRecompute;
  return std::nullopt;
}

Timestamp Session::next_timestamp() const {
  const auto& cells = ahg.cells();
  return Timestamp{cells.empty() ? 1 : cells.back().t.value + 1};
}

ObjectId Session::origin_of(ObjectId id) const {
  auto it = origin_ids.find(id);
  return it == origin_ids.end() ? id : it->second;
}

}  // namespace statecut
