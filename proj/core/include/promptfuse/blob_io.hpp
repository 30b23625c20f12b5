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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace promptfuse::io {

/// Writes values as raw little-endian IEEE-754 binary32.
void write_f32_blob(const std::filesystem::path& path, std::span<const double> values);

/// Reads exactly \p expected_values binary32 values. A file of any other
/// size raises FormatError naming the expected and actual byte counts.
std::vector<double> read_f32_blob(const std::filesystem::path& path, std::size_t expected_values);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Creates \p dir (and parents) or throws IoError.
void ensure_directory(const std::filesystem::path& dir);

/// Rounds through binary32, the precision every blob is stored at.
inline double round_to_f32(double x) { return static_cast<double>(static_cast<float>(x)); }

}  // namespace promptfuse::io
