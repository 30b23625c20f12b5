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
#include "support/algebraic_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "promptfuse/core_math.hpp"
#include "promptfuse/mm_classifier.hpp"
#include "promptfuse/prompt_bank.hpp"
#include "promptfuse/prompt_fusion.hpp"
#include "promptfuse/tpdw.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace promptfuse::testing {

namespace {

/// A property returns an empty string on success, a description otherwise.
using Property = std::function<std::string(Gen&)>;

std::string describe(const char* what, double got, double want) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want;
    return s.str();
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

std::string softmax_normalization(Gen& g) {
    const auto xs = g.values(g.size(1, 64), g.uniform(0.1, 50.0));
    const auto p = softmax(xs);
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) {
        return describe("softmax sum", sum, 1.0);
    }
    for (double x : p) {
        if (!(x >= 0.0)) {
            return describe("softmax entry", x, 0.0);
        }
    }
    return {};
}

std::string cosine_scale_invariance(Gen& g) {
    const std::size_t dim = g.size(1, 32);
    const auto a = g.gaussian(dim);
    const auto b = g.gaussian(dim);
    const double lambda = std::exp(g.uniform(-10.0, 10.0));
    Embedding scaled = a;
    for (auto& x : scaled) {
        x *= lambda;
    }
    const double want = cosine_similarity(a, b);
    const double got = cosine_similarity(scaled, b);
    return std::abs(got - want) > 1e-9 ? describe("cos(la, b)", got, want) : std::string{};
}

std::string top_k_full_sort(Gen& g) {
    const std::size_t n = g.size(1, 40);
    std::vector<ScoredId> scores;
    for (std::size_t i = 0; i < n; ++i) {
        // Coarse values force ties.
        scores.push_back({static_cast<CategoryId>(i), std::round(g.normal() * 3.0) / 3.0});
    }
    std::shuffle(scores.begin(), scores.end(), g.rng());
    const std::size_t k = g.coin() ? n : g.size(1, n);
    if (arg_top_k(scores, k) != oracle::sorted_top_k(scores, k)) {
        return "top-k differs from full sort (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")";
    }
    return {};
}

std::string normalize_idempotent(Gen& g) {
    const auto v = g.gaussian(g.size(1, 64));
    const auto once = l2_normalize(v);
    const auto twice = l2_normalize(once);
    const double d = max_abs_diff(once, twice);
    return d > 1e-9 ? describe("normalize twice", d, 0.0) : std::string{};
}

std::string mean_of_copies(Gen& g) {
    const auto u = g.unit(g.size(1, 64));
    CategoryEntry entry;
    entry.text_prompts.assign(g.size(1, 50), u);
    const double d = max_abs_diff(mean_embedding(entry, Modality::Text), u);
    return d > 1e-7 ? describe("mean of copies", d, 0.0) : std::string{};
}

struct TpdwCase {
    PromptBank bank;
    PatchFeatures patches;
    TpdwConfig config;
};

TpdwCase tpdw_case(Gen& g) {
    TpdwCase c;
    const std::size_t dim = g.size(2, 12);
    c.bank = g.bank(g.size(1, 8), dim, 1, 5);
    c.config.patches = g.size(1, 4);
    c.config.k = g.size(1, 4);
    c.patches = g.patches(c.config.patches, dim);
    return c;
}

std::string compare_sets(const FinalPromptSet& a, const FinalPromptSet& b, double tol, const char* what) {
    if (a.entries.size() != b.entries.size()) {
        return std::string(what) + ": entry count differs";
    }
    for (const auto& [id, fa] : a.entries) {
        const auto it = b.entries.find(id);
        if (it == b.entries.end() || it->second.weighted_by != fa.weighted_by ||
            it->second.fallback != fa.fallback) {
            return std::string(what) + ": selection differs for category " + std::to_string(id);
        }
        const double d = max_abs_diff(fa.final, it->second.final);
        if (d > tol) {
            return describe(what, d, 0.0);
        }
    }
    return {};
}

std::string tpdw_scale_invariance(Gen& g) {
    auto c = tpdw_case(g);
    const auto m = g.coin() ? Modality::Text : Modality::Image;
    const auto before = run_tpdw(c.patches, c.bank, c.config, m);
    for (auto& p : c.patches.patches) {
        const double lambda = std::exp(g.uniform(-5.0, 5.0));
        for (auto& x : p) {
            x *= lambda;
        }
    }
    return compare_sets(before, run_tpdw(c.patches, c.bank, c.config, m), 1e-9, "patch scaling");
}

std::string tpdw_convexity(Gen& g) {
    const std::size_t dim = g.size(2, 12);
    std::vector<Embedding> prompts;
    for (std::size_t i = g.size(1, 8); i > 0; --i) {
        prompts.push_back(g.unit(dim));
    }
    const auto w = weight_category(g.gaussian(dim), prompts);
    double sum = 0.0;
    for (double x : w.weights) {
        if (x < 0.0) {
            return describe("negative weight", x, 0.0);
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        return describe("weight sum", sum, 1.0);
    }
    auto hull = Embedding::zeros(dim);
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        axpy(w.weights[i], prompts[i], hull.view());
    }
    const double d = max_abs_diff(hull, w.weighted);
    return d > 1e-12 ? describe("weighted vs hull combination", d, 0.0) : std::string{};
}

std::string tpdw_permutation_invariance(Gen& g) {
    auto c = tpdw_case(g);
    const auto m = g.coin() ? Modality::Text : Modality::Image;
    const auto before = run_tpdw(c.patches, c.bank, c.config, m);
    auto& target = c.bank.categories[g.size(0, c.bank.categories.size() - 1)];
    auto& prompts = target.prompts(m);
    std::vector<std::size_t> perm(prompts.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), g.rng());
    const auto original = prompts;
    const auto w_before = weight_category(c.patches.patches.front(), original);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        prompts[i] = original[perm[i]];
    }
    const auto w_after = weight_category(c.patches.patches.front(), prompts);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (std::abs(w_after.weights[i] - w_before.weights[perm[i]]) > 1e-12) {
            return describe("permuted weight", w_after.weights[i], w_before.weights[perm[i]]);
        }
    }
    return compare_sets(before, run_tpdw(c.patches, c.bank, c.config, m), 1e-9, "prompt permutation");
}

std::string tpdw_fallback_exact(Gen& g) {
    auto c = tpdw_case(g);
    const auto m = g.coin() ? Modality::Text : Modality::Image;
    const auto out = run_tpdw(c.patches, c.bank, c.config, m);
    for (const auto& entry : c.bank.categories) {
        const auto& f = out.entries.at(entry.id);
        if (f.fallback != f.weighted_by.empty()) {
            return "fallback flag disagrees with weighted_by for category " + std::to_string(entry.id);
        }
        if (f.fallback && !(f.final == mean_embedding(entry, m))) {
            return "fallback prompt is not the stored mean for category " + std::to_string(entry.id);
        }
    }
    return {};
}

std::string tpdw_brute_force(Gen& g) {
    const auto c = tpdw_case(g);
    const auto m = g.coin() ? Modality::Text : Modality::Image;
    const auto got = run_tpdw(c.patches, c.bank, c.config, m);
    const auto want = oracle::tpdw(c.patches, c.bank, c.config.k, m);
    for (const auto& [id, v] : want) {
        const auto& f = got.entries.at(id).final;
        for (std::size_t d = 0; d < v.size(); ++d) {
            if (std::abs(static_cast<long double>(f[d]) - v[d]) > 1e-9L) {
                return describe("tpdw vs brute force", f[d], static_cast<double>(v[d]));
            }
        }
    }
    return {};
}

std::string tpdw_modality_independence(Gen& g) {
    auto c = tpdw_case(g);
    const auto m = g.coin() ? Modality::Text : Modality::Image;
    const auto other = m == Modality::Text ? Modality::Image : Modality::Text;
    const auto before = run_tpdw(c.patches, c.bank, c.config, m);
    for (auto& entry : c.bank.categories) {
        for (auto& p : entry.prompts(other)) {
            p = g.unit(c.bank.dim);
        }
    }
    return compare_sets(before, run_tpdw(c.patches, c.bank, c.config, m), 0.0, "other modality changed");
}

struct FusionCase {
    FinalPromptSet text;
    FinalPromptSet image;
    std::vector<CategoryRef> refs;
};

FusionCase fusion_case(Gen& g, bool same) {
    FusionCase c;
    c.text.modality = Modality::Text;
    c.image.modality = Modality::Image;
    const std::size_t dim = g.size(2, 16);
    for (std::size_t i = g.size(1, 12); i > 0; --i) {
        const auto id = static_cast<CategoryId>(c.refs.size());
        c.refs.push_back({id, g.coin() ? Group::Base : Group::Novel});
        c.text.entries[id].final = g.gaussian(dim);
        c.image.entries[id].final = same ? c.text.entries[id].final : g.gaussian(dim);
    }
    return c;
}

MaskSpec all_ones(const std::vector<CategoryRef>& refs) {
    MaskSpec mask;
    for (const auto& r : refs) {
        mask.bits[r.id] = {true, true};
    }
    return mask;
}

std::string fusion_identity(Gen& g) {
    const auto c = fusion_case(g, true);
    const auto [t, i] = apply_mask(c.text, c.image, all_ones(c.refs));
    const auto fused = fuse(t, i);
    for (const auto& [id, f] : fused.entries) {
        const double d = max_abs_diff(f.fused, l2_normalize(c.text.entries.at(id).final));
        if (f.excluded || d > 1e-12) {
            return describe("fuse(x, x)", d, 0.0);
        }
    }
    return {};
}

std::string fusion_ignores_masked(Gen& g) {
    const auto c = fusion_case(g, false);
    const auto tag = kAllScenarios[g.size(0, std::size(kAllScenarios) - 1)];
    const auto mask = scenario_mask({tag, g.rng()()}, c.refs);
    auto [t, i] = apply_mask(c.text, c.image, mask);
    const auto before = fuse(t, i);
    for (auto* set : {&t, &i}) {
        for (auto& [id, f] : set->entries) {
            if (f.masked) {
                f.final = g.gaussian(f.final.dim());
            }
        }
    }
    const auto after = fuse(t, i);
    for (const auto& [id, f] : before.entries) {
        if (!(after.entries.at(id).fused == f.fused) || after.entries.at(id).excluded != f.excluded) {
            return "perturbing a masked entry changed category " + std::to_string(id);
        }
    }
    return {};
}

std::string fusion_unit_norm(Gen& g) {
    const auto c = fusion_case(g, false);
    const auto tag = kAllScenarios[g.size(0, std::size(kAllScenarios) - 1)];
    const auto [t, i] = apply_mask(c.text, c.image, scenario_mask({tag, g.rng()()}, c.refs));
    for (const auto& [id, f] : fuse(t, i).entries) {
        if (!f.excluded && std::abs(l2_norm(f.fused) - 1.0) > 1e-6) {
            return describe("fused norm", l2_norm(f.fused), 1.0);
        }
    }
    return {};
}

std::string scenario_mask_shape(Gen& g) {
    std::vector<CategoryRef> refs;
    for (std::size_t i = g.size(1, 30); i > 0; --i) {
        refs.push_back({static_cast<CategoryId>(refs.size()), g.coin() ? Group::Base : Group::Novel});
    }
    const std::uint64_t seed = g.rng()();
    const auto tag = kAllScenarios[g.size(0, std::size(kAllScenarios) - 1)];
    const auto mask = scenario_mask({tag, seed}, refs);
    if (!(mask == scenario_mask({tag, seed}, refs))) {
        return "scenario mask is not a pure function of its inputs";
    }
    for (const auto& [id, bits] : mask.bits) {
        if (!bits.keep_text && !bits.keep_image) {
            return "scenario drops both modalities of category " + std::to_string(id);
        }
        const bool one = bits.keep_text != bits.keep_image;
        if (tag == ScenarioTag::THalfIHalf && !one) {
            return "T/2-I/2 keeps both modalities of category " + std::to_string(id);
        }
        if (tag == ScenarioTag::F && one) {
            return "F keeps a single modality of category " + std::to_string(id);
        }
    }
    return {};
}

std::string classify_exclusion_and_scale(Gen& g) {
    const std::size_t dim = g.size(2, 12);
    FusedPromptSet fused;
    for (std::size_t c = g.size(2, 10); c > 0; --c) {
        fused.entries[static_cast<CategoryId>(fused.entries.size())] = {g.unit(dim), false};
    }
    const auto proposals = g.proposals(g.size(1, 6), dim, fused.entries.size());
    const auto full = classify(proposals, fused);

    auto reduced = fused;
    const auto dropped = static_cast<CategoryId>(g.size(0, fused.entries.size() - 1));
    reduced.entries[dropped] = {Embedding{}, true};
    const auto part = classify(proposals, reduced);

    auto scaled = proposals;
    const double lambda = std::exp(g.uniform(-5.0, 5.0));
    for (auto& p : scaled) {
        for (auto& x : p.feature) {
            x *= lambda;
        }
    }
    const auto rescaled = classify(scaled, fused);
    for (std::size_t j = 0; j < proposals.size(); ++j) {
        if (rescaled[j].predicted != full[j].predicted) {
            return "scaling a proposal changed its prediction";
        }
        if (part[j].predicted == dropped) {
            return "excluded category predicted";
        }
        for (const auto& s : part[j].scores) {
            const auto it = std::find_if(full[j].scores.begin(), full[j].scores.end(),
                                         [&](const ScoredId& x) { return x.id == s.id; });
            if (it == full[j].scores.end() || it->score != s.score) {
                return "excluding a category changed the score of category " + std::to_string(s.id);
            }
        }
    }
    return {};
}

}  // namespace

std::vector<PropertyOutcome> run_algebraic_suite(std::uint64_t seed, std::size_t cases) {
    const std::vector<std::pair<const char*, Property>> properties = {
        {"softmax normalization", softmax_normalization},
        {"cosine scale invariance", cosine_scale_invariance},
        {"top-k matches full sort", top_k_full_sort},
        {"l2_normalize idempotent", normalize_idempotent},
        {"mean of identical prompts", mean_of_copies},
        {"tpdw patch scale invariance", tpdw_scale_invariance},
        {"tpdw convexity", tpdw_convexity},
        {"tpdw prompt permutation invariance", tpdw_permutation_invariance},
        {"tpdw fallback exactness", tpdw_fallback_exact},
        {"tpdw brute-force agreement", tpdw_brute_force},
        {"tpdw modality independence", tpdw_modality_independence},
        {"fusion identity with all-ones mask", fusion_identity},
        {"fusion ignores masked values", fusion_ignores_masked},
        {"fused prompts unit norm", fusion_unit_norm},
        {"scenario mask shape", scenario_mask_shape},
        {"classify exclusion and scale invariance", classify_exclusion_and_scale},
    };
    std::vector<PropertyOutcome> out;
    std::uint64_t stream = 0;
    for (const auto& [name, property] : properties) {
        Gen gen(derive_stream_seed(seed, stream++));
        PropertyOutcome outcome{name, cases, 0, {}};
        for (std::size_t i = 0; i < cases; ++i) {
            std::string failure;
            try {
                failure = property(gen);
            } catch (const std::exception& e) {
                failure = std::string("threw: ") + e.what();
            }
            if (!failure.empty() && outcome.failures++ == 0) {
                outcome.first_failure = "case " + std::to_string(i) + ": " + failure;
            }
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

}  // namespace promptfuse::testing
