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
#include "promptfuse/prompt_fusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string>

namespace promptfuse {

namespace {

constexpr double kDegenerateFusionNorm = 1e-9;

MaskBits text_only() { return {true, false}; }
MaskBits image_only() { return {false, true}; }
MaskBits both() { return {true, true}; }

}  // namespace

std::string_view to_string(ScenarioTag tag) {
    switch (tag) {
        case ScenarioTag::T:
            return "T";
        case ScenarioTag::I:
            return "I";
        case ScenarioTag::F:
            return "F";
        case ScenarioTag::THalfIHalf:
            return "T/2-I/2";
        case ScenarioTag::TIHalf:
            return "T-I/2";
        case ScenarioTag::THalfI:
            return "T/2-I";
    }
    return "?";
}

std::optional<ScenarioTag> parse_scenario_tag(std::string_view s) {
    for (ScenarioTag tag : kAllScenarios) {
        if (to_string(tag) == s) {
            return tag;
        }
    }
    return std::nullopt;
}

bool is_random_split(ScenarioTag tag) {
    return tag == ScenarioTag::THalfIHalf || tag == ScenarioTag::TIHalf || tag == ScenarioTag::THalfI;
}

void PrmPolicy::validate() const {
    const std::array<double, 3> p{p_both, p_text_only, p_image_only};
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0) {
            throw DegenerateInput("PRM policy probabilities must be finite and non-negative");
        }
    }
    if (std::abs(p_both + p_text_only + p_image_only - 1.0) > 1e-9) {
        throw DegenerateInput("PRM policy probabilities must sum to 1");
    }
}

std::vector<CategoryRef> category_refs(const PromptBank& bank) {
    std::vector<CategoryRef> out;
    out.reserve(bank.categories.size());
    for (const auto& c : bank.categories) {
        out.push_back({c.id, c.group});
    }
    return out;
}

std::size_t FusedPromptSet::active_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto& kv) { return !kv.second.excluded; }));
}

std::pair<FinalPromptSet, FinalPromptSet> apply_mask(const FinalPromptSet& text, const FinalPromptSet& image,
                                                     const MaskSpec& mask) {
    for (const auto& [id, bits] : mask.bits) {
        if (!text.entries.contains(id) && !image.entries.contains(id)) {
            throw ValidationError("mask names category " + std::to_string(id) + " which has no final prompts");
        }
    }
    auto masked = [&](const FinalPromptSet& in) {
        FinalPromptSet out = in;
        for (auto& [id, entry] : out.entries) {
            const auto it = mask.bits.find(id);
            if (it == mask.bits.end()) {
                throw ValidationError("category " + std::to_string(id) + " has no mask entry");
            }
            if (!it->second.keeps(in.modality)) {
                std::fill(entry.final.begin(), entry.final.end(), 0.0);
                entry.masked = true;
            }
        }
        return out;
    };
    return {masked(text), masked(image)};
}

FuseOutcome fuse_collect(const FinalPromptSet& masked_text, const FinalPromptSet& masked_image) {
    std::set<CategoryId> ids;
    for (const auto& kv : masked_text.entries) {
        ids.insert(kv.first);
    }
    for (const auto& kv : masked_image.entries) {
        ids.insert(kv.first);
    }

    auto surviving = [](const FinalPromptSet& set, CategoryId id) -> const Embedding* {
        const auto it = set.entries.find(id);
        return it != set.entries.end() && !it->second.masked ? &it->second.final : nullptr;
    };

    FuseOutcome out;
    for (CategoryId id : ids) {
        const Embedding* t = surviving(masked_text, id);
        const Embedding* v = surviving(masked_image, id);
        if (t == nullptr && v == nullptr) {
            out.fused.entries.emplace(id, FusedPrompt{{}, true});
            continue;
        }
        Embedding sum = t != nullptr ? *t : *v;
        if (t != nullptr && v != nullptr) {
            axpy(1.0, *v, sum.view());
        }
        if (!(l2_norm(sum) > kDegenerateFusionNorm)) {
            out.degenerate.push_back(id);
            out.fused.entries.emplace(id, FusedPrompt{{}, true});
            continue;
        }
        out.fused.entries.emplace(id, FusedPrompt{l2_normalize(sum), false});
    }
    return out;
}

FusedPromptSet fuse(const FinalPromptSet& masked_text, const FinalPromptSet& masked_image) {
    auto outcome = fuse_collect(masked_text, masked_image);
    if (!outcome.degenerate.empty()) {
        std::string msg = "degenerate fusion (final prompts cancel) for categories:";
        for (CategoryId id : outcome.degenerate) {
            msg += " " + std::to_string(id);
        }
        throw DegenerateFusion(msg, std::move(outcome.degenerate));
    }
    return std::move(outcome.fused);
}

MaskSpec sample_prm_mask(std::span<const CategoryRef> categories, std::mt19937_64& rng, const PrmPolicy& policy) {
    policy.validate();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MaskSpec mask;
    for (const auto& c : categories) {
        const double u = unit(rng);
        MaskBits bits = both();
        if (u >= policy.p_both) {
            // Zero-probability outcomes must never be drawn, so each branch
            // also checks its own probability.
            if (u < policy.p_both + policy.p_text_only && policy.p_text_only > 0.0) {
                bits = text_only();
            } else if (policy.p_image_only > 0.0) {
                bits = image_only();
            } else if (policy.p_text_only > 0.0) {
                bits = text_only();
            }
        }
        mask.bits[c.id] = bits;
    }
    return mask;
}

MaskSpec scenario_mask(const Scenario& scenario, std::span<const CategoryRef> categories) {
    MaskSpec mask;
    switch (scenario.tag) {
        case ScenarioTag::T:
        case ScenarioTag::I:
        case ScenarioTag::F: {
            const MaskBits bits = scenario.tag == ScenarioTag::T   ? text_only()
                                  : scenario.tag == ScenarioTag::I ? image_only()
                                                                   : both();
            for (const auto& c : categories) {
                mask.bits[c.id] = bits;
            }
            return mask;
        }
        case ScenarioTag::THalfIHalf:
        case ScenarioTag::TIHalf:
        case ScenarioTag::THalfI:
            break;
    }

    MaskBits first = text_only();
    MaskBits second = image_only();
    if (scenario.tag == ScenarioTag::TIHalf) {
        first = image_only();
        second = both();
    } else if (scenario.tag == ScenarioTag::THalfI) {
        first = text_only();
        second = both();
    }

    std::uint64_t stream = 0;
    for (Group g : {Group::Base, Group::Novel}) {
        std::vector<CategoryId> ids;
        for (const auto& c : categories) {
            if (c.group == g) {
                ids.push_back(c.id);
            }
        }
        std::mt19937_64 rng(derive_stream_seed(scenario.seed, stream++));
        std::shuffle(ids.begin(), ids.end(), rng);
        const std::size_t first_size = (ids.size() + 1) / 2;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            mask.bits[ids[i]] = i < first_size ? first : second;
        }
    }
    return mask;
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace promptfuse
