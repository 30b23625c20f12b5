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
#include <map>
#include <span>
#include <vector>

#include "promptfuse/core_math.hpp"
#include "promptfuse/prompt_bank.hpp"

namespace promptfuse {

inline constexpr std::size_t kDefaultTopK = 5;
inline constexpr std::size_t kDefaultPatchCount = 4;

/// Feature vectors of the P patches of one image (last-layer features).
struct PatchFeatures {
    std::vector<Embedding> patches;
};

struct TpdwConfig {
    /// Candidate categories kept per patch.
    std::size_t k = kDefaultTopK;
    /// Expected number of patch features per image.
    std::size_t patches = kDefaultPatchCount;

    /// Throws DegenerateInput when k or patches is zero.
    void validate() const;
};

/// Final prompt of one category in one modality.
struct FinalPrompt {
    Embedding final;
    /// Patch indices that selected this category, ascending.
    std::vector<std::size_t> weighted_by;
    /// True when no patch selected the category and the plain prompt mean
    /// was used. Always equal to weighted_by.empty().
    bool fallback = false;
    /// Set by apply_mask when the modality was dropped; \c final is then zero.
    bool masked = false;
};

struct FinalPromptSet {
    Modality modality = Modality::Text;
    std::map<CategoryId, FinalPrompt> entries;
};

struct CategoryWeighting {
    /// Softmax over cosine(patch, prompt_i); sums to 1.
    std::vector<double> weights;
    /// sum_i weights[i] * prompts[i]
    Embedding weighted;
};

/// Cosine between the patch and each category's mean prompt. Categories with
/// no prompts in \p modality are omitted.
std::vector<ScoredId> rough_scores(std::span<const double> patch, const PromptBank& bank, Modality modality);

/// arg_top_k over rough scores.
std::vector<CategoryId> select_candidates(std::span<const ScoredId> scores, std::size_t k);

CategoryWeighting weight_category(std::span<const double> patch, const std::vector<Embedding>& prompts);

/// Target-guided prompt weighting for one modality. Every patch selects its
/// top-k categories by rough score and re-weights their prompts; a category's
/// final prompt is the plain average over the patches that selected it, or
/// the mean of its stored prompts if none did. Outputs are not normalized.
FinalPromptSet run_tpdw(const PatchFeatures& patches, const PromptBank& bank, const TpdwConfig& config,
                        Modality modality);

}  // namespace promptfuse
