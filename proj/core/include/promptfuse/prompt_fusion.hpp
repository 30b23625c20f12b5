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
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "promptfuse/errors.hpp"
#include "promptfuse/prompt_bank.hpp"
#include "promptfuse/tpdw.hpp"

namespace promptfuse {

struct MaskBits {
    bool keep_text = true;
    bool keep_image = true;

    bool keeps(Modality m) const { return m == Modality::Text ? keep_text : keep_image; }
    bool operator==(const MaskBits&) const = default;
};

/// Per-category keep/drop bits for the two prompt modalities.
struct MaskSpec {
    std::map<CategoryId, MaskBits> bits;

    bool operator==(const MaskSpec&) const = default;
};

/// Test-time prompt availability scenarios. Display names follow the
/// T / I / F / T/2-I/2 / T-I/2 / T/2-I notation.
enum class ScenarioTag { T, I, F, THalfIHalf, TIHalf, THalfI };

inline constexpr ScenarioTag kAllScenarios[] = {ScenarioTag::T,          ScenarioTag::I,      ScenarioTag::F,
                                                ScenarioTag::THalfIHalf, ScenarioTag::TIHalf, ScenarioTag::THalfI};

std::string_view to_string(ScenarioTag tag);
std::optional<ScenarioTag> parse_scenario_tag(std::string_view s);
/// True for the three half-split scenarios, whose masks depend on a seed.
bool is_random_split(ScenarioTag tag);

struct Scenario {
    ScenarioTag tag = ScenarioTag::F;
    std::uint64_t seed = 0;
};

/// Per-category draw probabilities for prompt random masking.
struct PrmPolicy {
    double p_both = 0.5;
    double p_text_only = 0.25;
    double p_image_only = 0.25;

    /// Throws DegenerateInput unless all probabilities are >= 0 and sum to 1.
    void validate() const;
};

struct CategoryRef {
    CategoryId id = 0;
    Group group = Group::Base;
};

std::vector<CategoryRef> category_refs(const PromptBank& bank);

struct FusedPrompt {
    /// Unit norm unless excluded; empty when excluded.
    Embedding fused;
    bool excluded = false;
};

struct FusedPromptSet {
    std::map<CategoryId, FusedPrompt> entries;

    /// Number of categories that can be predicted.
    std::size_t active_count() const;
};

/// Raised when the surviving final prompts of a category sum to (nearly) zero.
class DegenerateFusion : public NumericalError {
 public:
    DegenerateFusion(const std::string& what, std::vector<CategoryId> categories)
        : NumericalError(what), categories_(std::move(categories)) {}
    const std::vector<CategoryId>& categories() const noexcept { return categories_; }

 private:
    std::vector<CategoryId> categories_;
};

/// Elementwise {0,1} masking: dropped entries become zero and are flagged
/// \c masked. Throws ValidationError when a mask entry names a category
/// absent from both sets, or a set entry has no mask bit.
std::pair<FinalPromptSet, FinalPromptSet> apply_mask(const FinalPromptSet& text, const FinalPromptSet& image,
                                                     const MaskSpec& mask);

struct FuseOutcome {
    FusedPromptSet fused;
    /// Categories whose surviving prompts cancelled; marked excluded in \c fused.
    std::vector<CategoryId> degenerate;
};

/// Adds the surviving final prompts of each category and normalizes. A
/// category with no surviving modality is excluded. Degenerate sums are
/// collected instead of thrown.
FuseOutcome fuse_collect(const FinalPromptSet& masked_text, const FinalPromptSet& masked_image);

/// fuse_collect, throwing DegenerateFusion if any category cancelled.
FusedPromptSet fuse(const FinalPromptSet& masked_text, const FinalPromptSet& masked_image);

/// One independent draw per category; never drops both modalities.
MaskSpec sample_prm_mask(std::span<const CategoryRef> categories, std::mt19937_64& rng, const PrmPolicy& policy);

/// Deterministic mask for a scenario. Half splits are drawn separately within
/// the base and the novel group; with an odd group size the first half
/// (text-only for T/2-I/2 and T/2-I, image-only for T-I/2) gets the extra
/// category.
MaskSpec scenario_mask(const Scenario& scenario, std::span<const CategoryRef> categories);

/// Independent seed for worker or repetition \p stream of a master seed.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace promptfuse
