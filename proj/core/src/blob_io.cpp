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
#include "promptfuse/blob_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "promptfuse/errors.hpp"

namespace promptfuse::io {

namespace fs = std::filesystem;

namespace {

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
    }
    return v;
}

}  // namespace

void write_f32_blob(const fs::path& path, std::span<const double> values) {
    std::vector<std::uint32_t> words(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        words[i] = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(words.data()),
              static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::vector<double> read_f32_blob(const fs::path& path, std::size_t expected_values) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw IoError("missing file: " + path.string());
    }
    const auto actual_bytes = fs::file_size(path, ec);
    if (ec) {
        throw IoError("cannot stat " + path.string() + ": " + ec.message());
    }
    const std::uintmax_t expected_bytes = expected_values * sizeof(float);
    if (actual_bytes != expected_bytes) {
        throw FormatError(path.filename().string() + ": expected " + std::to_string(expected_bytes) +
                          " bytes (" + std::to_string(expected_values) + " float32 values), found " +
                          std::to_string(actual_bytes) + " bytes");
    }
    std::vector<std::uint32_t> words(expected_values);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(expected_bytes));
    if (!in) {
        throw IoError("read failed: " + path.string());
    }
    std::vector<double> values(expected_values);
    for (std::size_t i = 0; i < expected_values; ++i) {
        values[i] = static_cast<double>(std::bit_cast<float>(to_little_endian(words[i])));
    }
    return values;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("missing file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << contents;
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
}

}  // namespace promptfuse::io
