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

// Command-line front end: statecut run|plan|checkpoint|restore|verify|
// sweep|gen|bench.

#ifndef STATECUT_CLI_HPP_
#define STATECUT_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace statecut {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitInfeasible = 2,
  kExitVerificationFailed = 3,
  kExitFormatError = 4,
};

/// Seed for generated sessions and fault injection: $STATECUT_SEED, or 0.
std::uint64_t SeedFromEnvironment();

struct BenchResult {
  std::size_t cells = 0;
  std::size_t active_variables = 0;
  std::size_t ahg_bytes = 0;
  std::size_t read_edges = 0;
  std::size_t write_edges = 0;
  /// Fastest of the repeated planning runs.
  double plan_ms = 0.0;
  double monitor_ms = 0.0;
  bool feasible = true;
};

/// Executes `cells` generated cell re-executions drawn from a fixed pool of
/// templates and times planning on the resulting session.
BenchResult RunBench(std::size_t cells, std::uint64_t seed, int repeats = 3);

/// Runs the CLI with `args` (excluding the program name). Output goes to
/// `out`, diagnostics to `err`; the return value is an ExitCode.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace statecut

#endif  // STATECUT_CLI_HPP_
