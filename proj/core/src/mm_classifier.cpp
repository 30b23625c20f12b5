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
#include "promptfuse/mm_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "promptfuse/errors.hpp"

namespace promptfuse {

namespace {

struct ActivePrompt {
    CategoryId id;
    const Embedding* fused;
    double norm;
};

std::vector<ActivePrompt> active_prompts(const FusedPromptSet& fused) {
    std::vector<ActivePrompt> out;
    for (const auto& [id, entry] : fused.entries) {
        if (!entry.excluded) {
            out.push_back({id, &entry.fused, l2_norm(entry.fused)});
        }
    }
    if (out.empty()) {
        throw DegenerateInput("every category is excluded; nothing to classify against");
    }
    return out;
}

// Per-proposal loss and gradient with respect to the projected feature z.
double proposal_loss(std::span<const double> z, CategoryId label, const std::vector<ActivePrompt>& prompts,
                     double temperature, std::vector<double>& grad_z) {
    const double nz = l2_norm(z);
    if (!(nz > kNormEpsilon)) {
        throw NumericalError("projected feature has zero norm");
    }
    const std::size_t n = prompts.size();
    std::vector<double> sims(n);
    std::vector<double> logits(n);
    std::size_t pos = n;
    for (std::size_t c = 0; c < n; ++c) {
        sims[c] = dot(z, *prompts[c].fused) / (nz * prompts[c].norm);
        logits[c] = sims[c] / temperature;
        if (prompts[c].id == label) {
            pos = c;
        }
    }
    if (pos == n) {
        throw ValidationError("label " + std::to_string(label) + " refers to an excluded or unknown category");
    }
    const auto probs = softmax(logits);
    const double peak = *std::max_element(logits.begin(), logits.end());
    double log_norm = 0.0;
    for (double l : logits) {
        log_norm += std::exp(l - peak);
    }
    const double loss = peak + std::log(log_norm) - logits[pos];

    // d s_c / d z = f_c / (|z||f_c|) - s_c z / |z|^2
    std::fill(grad_z.begin(), grad_z.end(), 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const double g = (probs[c] - (c == pos ? 1.0 : 0.0)) / temperature;
        axpy(g / (nz * prompts[c].norm), *prompts[c].fused, grad_z);
        axpy(-g * sims[c] / (nz * nz), z, grad_z);
    }
    return loss;
}

void require_base_labels(std::span<const LabeledImage> train, const PromptBank& bank) {
    if (train.empty()) {
        throw ValidationError("training set is empty");
    }
    std::size_t labeled = 0;
    for (const auto& image : train) {
        for (const auto& p : image.proposals) {
            if (!p.label) {
                throw ValidationError("training proposals must be labeled");
            }
            const auto* entry = bank.find(*p.label);
            if (entry == nullptr) {
                throw ValidationError("training label " + std::to_string(*p.label) + " is not in the bank");
            }
            if (entry->group != Group::Base) {
                throw ValidationError("training label " + std::to_string(*p.label) + " is a novel category");
            }
            ++labeled;
        }
    }
    if (labeled == 0) {
        throw ValidationError("training set has no proposals");
    }
}

}  // namespace

ProjectionHead ProjectionHead::initialize(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed,
                                          double temperature) {
    if (in_dim == 0 || out_dim == 0) {
        throw DegenerateInput("projection head dimensions must be positive");
    }
    ProjectionHead head;
    head.in_dim = in_dim;
    head.out_dim = out_dim;
    head.temperature = temperature;
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-bound, bound);
    head.weight.resize(in_dim * out_dim);
    for (double& w : head.weight) {
        w = dist(rng);
    }
    head.bias.resize(out_dim);
    for (double& b : head.bias) {
        b = dist(rng);
    }
    head.validate();
    return head;
}

Embedding ProjectionHead::project(std::span<const double> feature) const {
    if (feature.size() != in_dim) {
        throw DimensionMismatch("feature dimension " + std::to_string(feature.size()) + " != head input " +
                                std::to_string(in_dim));
    }
    Embedding out(std::vector<double>(bias.begin(), bias.end()));
    for (std::size_t i = 0; i < in_dim; ++i) {
        axpy(feature[i], std::span<const double>(weight).subspan(i * out_dim, out_dim), out.view());
    }
    return out;
}

void ProjectionHead::validate() const {
    if (weight.size() != in_dim * out_dim || bias.size() != out_dim || in_dim == 0 || out_dim == 0) {
        throw ValidationError("projection head parameter sizes do not match its dimensions");
    }
    if (!all_finite(weight) || !all_finite(bias)) {
        throw ValidationError("projection head has non-finite parameters");
    }
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw ValidationError("temperature must be positive");
    }
}

std::vector<ClassificationResult> classify(std::span<const Proposal> proposals, const FusedPromptSet& fused,
                                           const ProjectionHead* head) {
    const auto prompts = active_prompts(fused);
    const double temperature = head != nullptr ? head->temperature : kDefaultTemperature;
    std::vector<ClassificationResult> results;
    results.reserve(proposals.size());
    for (const auto& proposal : proposals) {
        const Embedding z = head != nullptr ? head->project(proposal.feature) : proposal.feature;
        ClassificationResult r;
        r.scores.reserve(prompts.size());
        std::vector<double> logits;
        logits.reserve(prompts.size());
        for (const auto& p : prompts) {
            if (p.fused->dim() != z.dim()) {
                throw DimensionMismatch("proposal dimension " + std::to_string(z.dim()) + " != prompt dimension " +
                                        std::to_string(p.fused->dim()));
            }
            const double s = cosine_similarity(z, *p.fused);
            r.scores.push_back({p.id, s});
            logits.push_back(s / temperature);
        }
        r.predicted = arg_top_k(r.scores, 1).front();
        const auto probs = softmax(logits);
        for (std::size_t c = 0; c < prompts.size(); ++c) {
            if (prompts[c].id == r.predicted) {
                r.confidence = probs[c];
            }
        }
        results.push_back(std::move(r));
    }
    return results;
}

LossGradient contrastive_loss(std::span<const Proposal> batch, const FusedPromptSet& fused,
                              const ProjectionHead& head) {
    if (batch.empty()) {
        throw DegenerateInput("contrastive loss of an empty batch");
    }
    const auto prompts = active_prompts(fused);
    for (const auto& p : prompts) {
        if (p.fused->dim() != head.out_dim) {
            throw DimensionMismatch("fused prompt dimension " + std::to_string(p.fused->dim()) +
                                    " != head output " + std::to_string(head.out_dim));
        }
    }
    LossGradient out;
    out.grad_weight.assign(head.weight.size(), 0.0);
    out.grad_bias.assign(head.bias.size(), 0.0);
    std::vector<double> grad_z(head.out_dim);
    for (const auto& proposal : batch) {
        if (!proposal.label) {
            throw ValidationError("contrastive loss needs labeled proposals");
        }
        const Embedding z = head.project(proposal.feature);
        out.loss += proposal_loss(z, *proposal.label, prompts, head.temperature, grad_z);
        for (std::size_t i = 0; i < head.in_dim; ++i) {
            axpy(proposal.feature[i], grad_z, std::span<double>(out.grad_weight).subspan(i * head.out_dim, head.out_dim));
        }
        axpy(1.0, grad_z, out.grad_bias);
    }
    const auto n = static_cast<double>(batch.size());
    out.loss /= n;
    for (double& g : out.grad_weight) {
        g /= n;
    }
    for (double& g : out.grad_bias) {
        g /= n;
    }
    return out;
}

void sgd_step(ProjectionHead& head, const LossGradient& grad, double learning_rate) {
    if (grad.grad_weight.size() != head.weight.size() || grad.grad_bias.size() != head.bias.size()) {
        throw DimensionMismatch("gradient does not match head parameters");
    }
    axpy(-learning_rate, grad.grad_weight, head.weight);
    axpy(-learning_rate, grad.grad_bias, head.bias);
}

TrainResult train_head(std::span<const LabeledImage> train, const PromptBank& bank, const TpdwConfig& tpdw,
                       const PrmPolicy& policy, const TrainConfig& config) {
    require_base_labels(train, bank);
    policy.validate();
    tpdw.validate();
    if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
        throw ValidationError("learning rate must be finite and non-negative");
    }

    const PromptBank base = select_group(bank, Group::Base);
    const auto refs = category_refs(base);
    std::size_t in_dim = 0;
    for (const auto& image : train) {
        if (!image.proposals.empty()) {
            in_dim = image.proposals.front().feature.dim();
            break;
        }
    }

    struct ImageFinals {
        FinalPromptSet text;
        FinalPromptSet image;
    };
    std::vector<ImageFinals> finals;
    finals.reserve(train.size());
    for (const auto& image : train) {
        finals.push_back({run_tpdw(image.patches, base, tpdw, Modality::Text),
                          run_tpdw(image.patches, base, tpdw, Modality::Image)});
    }

    auto fused_for = [&](std::size_t i, const MaskSpec& mask) {
        const auto [text, img] = apply_mask(finals[i].text, finals[i].image, mask);
        return fuse(text, img);
    };

    // Masks used to measure the training loss, identical before and after.
    std::vector<FusedPromptSet> eval_fused;
    {
        std::mt19937_64 eval_rng(derive_stream_seed(config.seed, 3));
        for (std::size_t i = 0; i < train.size(); ++i) {
            eval_fused.push_back(fused_for(i, sample_prm_mask(refs, eval_rng, policy)));
        }
    }
    auto training_loss = [&](const ProjectionHead& head) {
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (train[i].proposals.empty()) {
                continue;
            }
            total += contrastive_loss(train[i].proposals, eval_fused[i], head).loss *
                     static_cast<double>(train[i].proposals.size());
            count += train[i].proposals.size();
        }
        return total / static_cast<double>(count);
    };

    TrainResult result;
    result.head = ProjectionHead::initialize(in_dim, bank.dim, derive_stream_seed(config.seed, 0), config.temperature);
    result.initial_loss = training_loss(result.head);

    std::mt19937_64 mask_rng(derive_stream_seed(config.seed, 1));
    std::mt19937_64 order_rng(derive_stream_seed(config.seed, 2));
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), order_rng);
        for (std::size_t i : order) {
            if (train[i].proposals.empty()) {
                continue;
            }
            const auto diverged = [&](const std::string& why) {
                std::ostringstream msg;
                msg << "training diverged: " << why << " at epoch " << epoch << ", step " << result.steps
                    << " (image " << i << ", learning rate " << config.learning_rate << ")";
                return NumericalError(msg.str());
            };
            const auto fused = fused_for(i, sample_prm_mask(refs, mask_rng, policy));
            LossGradient grad;
            try {
                grad = contrastive_loss(train[i].proposals, fused, result.head);
            } catch (const DegenerateInput& e) {
                throw diverged(e.what());
            } catch (const NumericalError& e) {
                throw diverged(e.what());
            }
            if (!std::isfinite(grad.loss) || !all_finite(grad.grad_weight) || !all_finite(grad.grad_bias)) {
                throw diverged("non-finite loss");
            }
            sgd_step(result.head, grad, config.learning_rate);
            ++result.steps;
        }
    }

    result.final_loss = config.epochs == 0 ? result.initial_loss : training_loss(result.head);
    if (!std::isfinite(result.final_loss) || !all_finite(result.head.weight) || !all_finite(result.head.bias)) {
        throw NumericalError("training diverged: non-finite parameters after " + std::to_string(result.steps) +
                             " steps");
    }
    return result;
}

}  // namespace promptfuse
