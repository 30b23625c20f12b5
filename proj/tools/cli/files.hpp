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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "promptfuse/mm_classifier.hpp"
#include "promptfuse/prompt_fusion.hpp"
#include "promptfuse/tpdw.hpp"

namespace promptfuse::cli {

/// Patch features of one or more images: manifest.json + features.f32 with
/// images * patches_per_image rows.
struct PatchFile {
    std::size_t dim = 0;
    std::vector<PatchFeatures> images;
};

void save_patches(const PatchFile& file, const std::filesystem::path& dir);
PatchFile load_patches(const std::filesystem::path& dir);

/// Proposal features: manifest.json (labels, optional image index per row)
/// + features.f32.
struct ProposalFile {
    std::size_t dim = 0;
    std::vector<Proposal> proposals;
    /// Empty, or one image index per proposal.
    std::vector<std::size_t> image_index;
};

void save_proposals(const ProposalFile& file, const std::filesystem::path& dir);
ProposalFile load_proposals(const std::filesystem::path& dir);

/// Provenance written next to fused prompts.
struct FuseRecord {
    std::string scenario;
    std::uint64_t seed = 0;
    TpdwConfig tpdw;
    std::size_t image = 0;
    MaskSpec mask;
    FinalPromptSet text;
    FinalPromptSet image_finals;
};

/// fused.f32 (non-excluded categories, ascending id) + fused.json sidecar.
void save_fused(const FusedPromptSet& fused, std::size_t dim, const FuseRecord& record,
                const std::filesystem::path& dir);
FusedPromptSet load_fused(const std::filesystem::path& dir);

/// Group proposals by image using image_index (all in image 0 when absent).
std::vector<LabeledImage> group_by_image(const PatchFile& patches, const ProposalFile& proposals);

}  // namespace promptfuse::cli
