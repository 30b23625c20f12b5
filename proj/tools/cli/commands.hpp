// Copyright 2026-present the promptfuse project
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
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace promptfuse::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitInput = 2,
    kExitNumerical = 3,
};

/// Seed used when neither --seed nor PROMPTFUSE_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Runs the command line (args excludes the program name) and returns the
/// exit code. Normal output goes to \p out, diagnostics to \p err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace promptfuse::cli
