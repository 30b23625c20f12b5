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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace promptfuse::testing {

struct PropertyOutcome {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    /// Description of the first failing case, empty when all passed.
    std::string first_failure;
};

/// Runs every algebraic property over \p cases randomized inputs each.
std::vector<PropertyOutcome> run_algebraic_suite(std::uint64_t seed, std::size_t cases);

}  // namespace promptfuse::testing
