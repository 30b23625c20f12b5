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
#include <nlohmann/json.hpp>

#include "promptfuse/blob_io.hpp"
#include "promptfuse/errors.hpp"
#include "promptfuse/mm_classifier.hpp"

namespace promptfuse {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void save_head(const HeadCheckpoint& checkpoint, const fs::path& dir) {
    const auto& head = checkpoint.head;
    head.validate();
    ordered_json manifest = {{"format_version", 1},
                             {"in_dim", head.in_dim},
                             {"out_dim", head.out_dim},
                             {"temperature", head.temperature},
                             {"seed", checkpoint.seed},
                             {"steps", checkpoint.steps}};
    std::vector<double> params(head.weight);
    params.insert(params.end(), head.bias.begin(), head.bias.end());
    io::ensure_directory(dir);
    io::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    io::write_f32_blob(dir / "params.f32", params);
}

HeadCheckpoint load_head(const fs::path& dir) {
    ordered_json manifest;
    try {
        manifest = ordered_json::parse(io::read_text_file(dir / "manifest.json"));
        if (manifest.at("format_version").get<int>() != 1) {
            throw FormatError("head manifest: unsupported format_version");
        }
        HeadCheckpoint ckpt;
        ckpt.head.in_dim = manifest.at("in_dim").get<std::size_t>();
        ckpt.head.out_dim = manifest.at("out_dim").get<std::size_t>();
        ckpt.head.temperature = manifest.at("temperature").get<double>();
        ckpt.seed = manifest.at("seed").get<std::uint64_t>();
        ckpt.steps = manifest.at("steps").get<std::size_t>();
        const std::size_t n_weight = ckpt.head.in_dim * ckpt.head.out_dim;
        const auto params = io::read_f32_blob(dir / "params.f32", n_weight + ckpt.head.out_dim);
        ckpt.head.weight.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(n_weight));
        ckpt.head.bias.assign(params.begin() + static_cast<std::ptrdiff_t>(n_weight), params.end());
        ckpt.head.validate();
        return ckpt;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("head manifest: " + std::string(e.what()));
    }
}

}  // namespace promptfuse
