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
#include <span>
#include <vector>

#include "promptfuse/core_math.hpp"
#include "promptfuse/prompt_bank.hpp"
#include "promptfuse/prompt_fusion.hpp"
#include "promptfuse/tpdw.hpp"

namespace promptfuse {

inline constexpr double kDefaultTemperature = 0.07;

/// A region proposal reduced to its RoI feature.
struct Proposal {
    Embedding feature;
    std::optional<CategoryId> label;
};

/// Affine map from RoI feature space into prompt space:
///   out[j] = bias[j] + sum_i feature[i] * weight[i * out_dim + j]
struct ProjectionHead {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weight;
    std::vector<double> bias;
    double temperature = kDefaultTemperature;

    /// Weights and bias uniform in [-1/sqrt(in_dim), 1/sqrt(in_dim)].
    static ProjectionHead initialize(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed,
                                     double temperature = kDefaultTemperature);

    Embedding project(std::span<const double> feature) const;
    std::size_t parameter_count() const { return weight.size() + bias.size(); }
    /// Throws ValidationError on inconsistent sizes, non-finite parameters or
    /// a non-positive temperature.
    void validate() const;

    bool operator==(const ProjectionHead&) const = default;
};

struct ClassificationResult {
    /// Cosine similarity per non-excluded category, ascending id.
    std::vector<ScoredId> scores;
    CategoryId predicted = 0;
    /// softmax(scores / temperature) at the predicted category.
    double confidence = 0.0;
};

/// Scores every proposal against the non-excluded fused prompts. Without a
/// head the feature is used directly and the default temperature sets the
/// confidence.
std::vector<ClassificationResult> classify(std::span<const Proposal> proposals, const FusedPromptSet& fused,
                                           const ProjectionHead* head = nullptr);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> grad_weight;
    std::vector<double> grad_bias;
};

/// Mean cross-entropy over cosine logits s_c / temperature, where
/// s_c = cos(head(feature), fused_c), with analytic parameter gradients.
LossGradient contrastive_loss(std::span<const Proposal> batch, const FusedPromptSet& fused,
                              const ProjectionHead& head);

/// Plain SGD: params -= learning_rate * grad.
void sgd_step(ProjectionHead& head, const LossGradient& grad, double learning_rate);

/// One image: its patch features and the (labeled) proposals in it.
struct LabeledImage {
    PatchFeatures patches;
    std::vector<Proposal> proposals;
};

struct TrainConfig {
    std::size_t epochs = 30;
    double learning_rate = 0.1;
    std::uint64_t seed = 1;
    double temperature = kDefaultTemperature;
};

struct TrainResult {
    ProjectionHead head;
    /// Mean training loss before and after optimization, evaluated with a
    /// fixed set of masks drawn from the training policy.
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::size_t steps = 0;
};

/// Trains the projection head on base-category images. Every step runs the
/// prompt weighting on the image's patches, draws a fresh random mask,
/// fuses, and takes one SGD step on the image's proposals. Deterministic for
/// a fixed seed. Throws ValidationError for empty or non-base training data
/// and NumericalError if the loss becomes non-finite.
TrainResult train_head(std::span<const LabeledImage> train, const PromptBank& bank, const TpdwConfig& tpdw,
                       const PrmPolicy& policy, const TrainConfig& config);

struct HeadCheckpoint {
    ProjectionHead head;
    std::uint64_t seed = 0;
    std::size_t steps = 0;
};

/// manifest.json + params.f32 (weight rows then bias, binary32 LE).
void save_head(const HeadCheckpoint& checkpoint, const std::filesystem::path& dir);
HeadCheckpoint load_head(const std::filesystem::path& dir);

}  // namespace promptfuse
