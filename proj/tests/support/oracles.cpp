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
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace promptfuse::testing::oracle {

Vec widen(const Embedding& e) { return Vec(e.begin(), e.end()); }

namespace {

long double dotl(const Vec& a, const Vec& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

Vec mean_of(const std::vector<Embedding>& prompts) {
    Vec m(prompts.front().dim(), 0.0L);
    for (const auto& p : prompts) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] += p[i];
        }
    }
    for (auto& x : m) {
        x /= static_cast<long double>(prompts.size());
    }
    return m;
}

}  // namespace

long double cosine(const Vec& a, const Vec& b) { return dotl(a, b) / std::sqrt(dotl(a, a) * dotl(b, b)); }

Vec softmax(const std::vector<long double>& xs) {
    Vec e(xs.size());
    long double z = 0.0L;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        e[i] = std::exp(xs[i]);
        z += e[i];
    }
    for (auto& x : e) {
        x /= z;
    }
    return e;
}

std::vector<CategoryId> sorted_top_k(std::vector<ScoredId> scores, std::size_t k) {
    std::sort(scores.begin(), scores.end(), [](const ScoredId& a, const ScoredId& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.id < b.id;
    });
    std::vector<CategoryId> ids;
    for (std::size_t i = 0; i < std::min(k, scores.size()); ++i) {
        ids.push_back(scores[i].id);
    }
    return ids;
}

std::map<CategoryId, long double> rough_scores(const Embedding& patch, const PromptBank& bank, Modality m) {
    std::map<CategoryId, long double> out;
    const Vec f = widen(patch);
    for (const auto& c : bank.categories) {
        if (!c.prompts(m).empty()) {
            out[c.id] = cosine(f, mean_of(c.prompts(m)));
        }
    }
    return out;
}

Weighting weight_category(const Embedding& patch, const std::vector<Embedding>& prompts) {
    const Vec f = widen(patch);
    std::vector<long double> sims;
    for (const auto& p : prompts) {
        sims.push_back(cosine(f, widen(p)));
    }
    Weighting w{softmax(sims), Vec(patch.dim(), 0.0L)};
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        for (std::size_t d = 0; d < patch.dim(); ++d) {
            w.weighted[d] += w.weights[i] * prompts[i][d];
        }
    }
    return w;
}

std::map<CategoryId, Vec> tpdw(const PatchFeatures& patches, const PromptBank& bank, std::size_t k, Modality m) {
    const std::size_t dim = bank.dim;
    std::map<CategoryId, Vec> sum;
    std::map<CategoryId, std::size_t> hits;
    for (const auto& patch : patches.patches) {
        std::map<CategoryId, Vec> all;
        for (const auto& c : bank.categories) {
            if (!c.prompts(m).empty()) {
                all[c.id] = weight_category(patch, c.prompts(m)).weighted;
            }
        }
        std::vector<ScoredId> scored;
        for (const auto& [id, s] : rough_scores(patch, bank, m)) {
            scored.push_back({id, static_cast<double>(s)});
        }
        for (CategoryId id : sorted_top_k(scored, k)) {
            auto& acc = sum.try_emplace(id, Vec(dim, 0.0L)).first->second;
            for (std::size_t d = 0; d < dim; ++d) {
                acc[d] += all[id][d];
            }
            ++hits[id];
        }
    }
    std::map<CategoryId, Vec> out;
    for (const auto& c : bank.categories) {
        if (c.prompts(m).empty()) {
            continue;
        }
        if (hits.count(c.id) == 0) {
            out[c.id] = mean_of(c.prompts(m));
            continue;
        }
        Vec v = sum[c.id];
        for (auto& x : v) {
            x /= static_cast<long double>(hits[c.id]);
        }
        out[c.id] = v;
    }
    return out;
}

long double contrastive_loss(const std::vector<Proposal>& batch, const FusedPromptSet& fused,
                             const ProjectionHead& head) {
    long double total = 0.0L;
    for (const auto& p : batch) {
        Vec z(head.out_dim, 0.0L);
        for (std::size_t j = 0; j < head.out_dim; ++j) {
            z[j] = head.bias[j];
            for (std::size_t i = 0; i < head.in_dim; ++i) {
                z[j] += static_cast<long double>(p.feature[i]) * head.weight[i * head.out_dim + j];
            }
        }
        std::vector<long double> logits;
        std::size_t target = 0;
        for (const auto& [id, f] : fused.entries) {
            if (f.excluded) {
                continue;
            }
            if (id == *p.label) {
                target = logits.size();
            }
            logits.push_back(cosine(z, widen(f.fused)) / static_cast<long double>(head.temperature));
        }
        total -= std::log(softmax(logits)[target]);
    }
    return total / static_cast<long double>(batch.size());
}

}  // namespace promptfuse::testing::oracle
