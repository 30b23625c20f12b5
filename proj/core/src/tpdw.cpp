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
#include "promptfuse/tpdw.hpp"

#include <string>

#include "promptfuse/errors.hpp"

namespace promptfuse {

namespace {

struct CategoryMean {
    const CategoryEntry* entry;
    Embedding mean;
};

std::vector<CategoryMean> category_means(const PromptBank& bank, Modality modality) {
    std::vector<CategoryMean> out;
    for (const auto& c : bank.categories) {
        if (!c.prompts(modality).empty()) {
            out.push_back({&c, mean_embedding(c, modality)});
        }
    }
    return out;
}

std::vector<ScoredId> score_against(std::span<const double> patch, const std::vector<CategoryMean>& means) {
    std::vector<ScoredId> scores;
    scores.reserve(means.size());
    for (const auto& m : means) {
        scores.push_back({m.entry->id, cosine_similarity(patch, m.mean)});
    }
    return scores;
}

}  // namespace

void TpdwConfig::validate() const {
    if (k == 0) {
        throw DegenerateInput("TPDW candidate count k must be >= 1");
    }
    if (patches == 0) {
        throw DegenerateInput("TPDW patch count must be >= 1");
    }
}

std::vector<ScoredId> rough_scores(std::span<const double> patch, const PromptBank& bank, Modality modality) {
    if (patch.size() != bank.dim) {
        throw DimensionMismatch("patch dimension " + std::to_string(patch.size()) + " != bank dim " +
                                std::to_string(bank.dim));
    }
    return score_against(patch, category_means(bank, modality));
}

std::vector<CategoryId> select_candidates(std::span<const ScoredId> scores, std::size_t k) {
    return arg_top_k(scores, k);
}

CategoryWeighting weight_category(std::span<const double> patch, const std::vector<Embedding>& prompts) {
    if (prompts.empty()) {
        throw DegenerateInput("cannot weight a category with no prompts");
    }
    std::vector<double> sims;
    sims.reserve(prompts.size());
    for (const auto& p : prompts) {
        sims.push_back(cosine_similarity(patch, p));
    }
    CategoryWeighting out{softmax(sims), Embedding::zeros(prompts.front().dim())};
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        axpy(out.weights[i], prompts[i], out.weighted.view());
    }
    return out;
}

FinalPromptSet run_tpdw(const PatchFeatures& patches, const PromptBank& bank, const TpdwConfig& config,
                        Modality modality) {
    config.validate();
    if (patches.patches.size() != config.patches) {
        throw DimensionMismatch("expected " + std::to_string(config.patches) + " patch features, got " +
                                std::to_string(patches.patches.size()));
    }
    for (const auto& f : patches.patches) {
        if (f.dim() != bank.dim) {
            throw DimensionMismatch("patch dimension " + std::to_string(f.dim()) + " != bank dim " +
                                    std::to_string(bank.dim));
        }
    }

    const auto means = category_means(bank, modality);
    std::map<CategoryId, const CategoryMean*> by_id;
    for (const auto& m : means) {
        by_id.emplace(m.entry->id, &m);
    }

    // Sums of weighted prompts, accumulated in ascending patch order.
    std::map<CategoryId, FinalPrompt> acc;
    for (std::size_t p = 0; p < patches.patches.size(); ++p) {
        const auto& patch = patches.patches[p];
        const auto scores = score_against(patch, means);
        for (CategoryId id : select_candidates(scores, config.k)) {
            const auto weighting = weight_category(patch, by_id.at(id)->entry->prompts(modality));
            auto [it, inserted] = acc.try_emplace(id);
            if (inserted) {
                it->second.final = Embedding::zeros(bank.dim);
            }
            axpy(1.0, weighting.weighted, it->second.final.view());
            it->second.weighted_by.push_back(p);
        }
    }

    FinalPromptSet out;
    out.modality = modality;
    for (const auto& m : means) {
        const CategoryId id = m.entry->id;
        if (auto it = acc.find(id); it != acc.end()) {
            FinalPrompt fp = std::move(it->second);
            const auto n = static_cast<double>(fp.weighted_by.size());
            for (double& x : fp.final) {
                x /= n;
            }
            out.entries.emplace(id, std::move(fp));
        } else {
            out.entries.emplace(id, FinalPrompt{m.mean, {}, true, false});
        }
    }
    return out;
}

}  // namespace promptfuse
