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
#include "support/gradient_check.hpp"

#include <algorithm>
#include <cmath>

#include "promptfuse/mm_classifier.hpp"
#include "support/generators.hpp"

namespace promptfuse::testing {

namespace {

double relative_error(double analytic, double numeric) {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    return std::abs(analytic - numeric) / scale;
}

FusedPromptSet random_fused(Gen& gen, std::size_t categories, std::size_t dim) {
    FusedPromptSet fused;
    for (std::size_t c = 0; c < categories; ++c) {
        fused.entries[static_cast<CategoryId>(c)] = {gen.unit(dim), false};
    }
    return fused;
}

}  // namespace

GradientCheckResult gradient_check(std::uint64_t seed, std::size_t trials, std::size_t batch_size, double step) {
    Gen gen(seed);
    GradientCheckResult result;
    result.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t in_dim = gen.size(2, 8);
        const std::size_t out_dim = gen.size(2, 8);
        const std::size_t categories = gen.size(2, 6);
        const auto fused = random_fused(gen, categories, out_dim);
        const auto batch = gen.proposals(batch_size, in_dim, categories);
        ProjectionHead head = ProjectionHead::initialize(in_dim, out_dim, gen.rng()());
        const auto grad = contrastive_loss(batch, fused, head);

        auto check = [&](double& param, double analytic) {
            const double saved = param;
            param = saved + step;
            const double up = contrastive_loss(batch, fused, head).loss;
            param = saved - step;
            const double down = contrastive_loss(batch, fused, head).loss;
            param = saved;
            const double numeric = (up - down) / (2.0 * step);
            result.max_relative_error = std::max(result.max_relative_error, relative_error(analytic, numeric));
            result.max_absolute_error = std::max(result.max_absolute_error, std::abs(analytic - numeric));
            ++result.parameters_checked;
        };
        for (std::size_t i = 0; i < head.weight.size(); ++i) {
            check(head.weight[i], grad.grad_weight[i]);
        }
        for (std::size_t j = 0; j < head.bias.size(); ++j) {
            check(head.bias[j], grad.grad_bias[j]);
        }
    }
    return result;
}

}  // namespace promptfuse::testing
