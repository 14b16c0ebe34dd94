// Copyright 2026 The threadtree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef THREADTREE_CLI_HPP_
#define THREADTREE_CLI_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace threadtree {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,    // bad flags or flag combinations
  kExitIngest = 3,   // unreadable or invalid dataset
  kExitCompute = 4,  // estimation, simulation or output failure
};

// Environment overrides; command-line flags take precedence.
struct CliEnvironment {
  std::optional<std::string> out_dir;  // THREADTREE_OUT
  std::optional<std::string> jobs;     // THREADTREE_JOBS

  static CliEnvironment from_process();
};

// Runs one command. `args` excludes the program name. Results go to files
// under --out when set, otherwise the command's main table goes to `out`.
// Progress and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const CliEnvironment& env = CliEnvironment::from_process());

}  // namespace threadtree

#endif  // THREADTREE_CLI_HPP_
