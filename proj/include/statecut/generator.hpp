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

// Random session traces for property tests and benchmarks. Every trace is
// valid by construction: ops only touch objects reachable from the cell's
// declared reads or created by the cell.

#ifndef STATECUT_GENERATOR_HPP_
#define STATECUT_GENERATOR_HPP_

#include <cstddef>
#include <cstdint>

#include "statecut/session.hpp"

namespace statecut {

struct GeneratorOptions {
  std::uint64_t seed = 0;
  std::size_t cells = 10;
  /// Size of the variable-name pool, hence an upper bound on active
  /// variables.
  std::size_t max_variables = 12;
  /// Probability that a new reference points at an existing object.
  double alias_density = 0.3;
  /// Per-leaf probability of an opaque, non-serializable object.
  double unserializable_rate = 0.1;
  /// Per-leaf probability of an object that stores but fails to load.
  double undeserializable_rate = 0.05;
  double never_rerun_rate = 0.05;
  double nondeterministic_rate = 0.0;
  double delete_rate = 0.05;
  double min_runtime_s = 0.1;
  double max_runtime_s = 100.0;
  double min_size_bytes = 1e3;
  double max_size_bytes = 1e8;
  /// Draw bandwidth, latency and alpha at random; otherwise keep `profile`.
  bool random_profile = true;
  Profile profile;
  /// When non-zero, code_refs name one of this many templates plus the
  /// execution index, modelling re-execution of the same cells.
  std::size_t template_pool = 0;
};

Trace GenerateTrace(const GeneratorOptions& options);

}  // namespace statecut

#endif  // STATECUT_GENERATOR_HPP_
