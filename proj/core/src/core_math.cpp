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
#include "promptfuse/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "promptfuse/errors.hpp"

namespace promptfuse {

namespace {

void require_same_dim(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
    }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_dim(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double l2_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x * x;
    }
    return std::sqrt(acc);
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    require_same_dim(a, b);
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na <= kNormEpsilon || nb <= kNormEpsilon) {
        throw DegenerateInput("cosine similarity of a zero-norm vector");
    }
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

Embedding l2_normalize(std::span<const double> v) {
    const double n = l2_norm(v);
    if (!(n > kNormEpsilon)) {
        throw DegenerateInput("cannot normalize a near-zero vector (norm " + std::to_string(n) + ")");
    }
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) {
        x /= n;
    }
    return Embedding(std::move(out));
}

std::vector<double> softmax(std::span<const double> xs) {
    if (xs.empty()) {
        throw DegenerateInput("softmax of an empty sequence");
    }
    if (!all_finite(xs)) {
        throw DegenerateInput("softmax input contains a non-finite value");
    }
    const double peak = *std::max_element(xs.begin(), xs.end());
    std::vector<double> out(xs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out[i] = std::exp(xs[i] - peak);
        total += out[i];
    }
    for (double& w : out) {
        w /= total;
    }
    return out;
}

std::vector<CategoryId> arg_top_k(std::span<const ScoredId> scores, std::size_t k) {
    if (k == 0) {
        throw DegenerateInput("top-k requires k >= 1");
    }
    std::vector<ScoredId> sorted(scores.begin(), scores.end());
    const std::size_t take = std::min(k, sorted.size());
    auto before = [](const ScoredId& a, const ScoredId& b) {
        return a.score != b.score ? a.score > b.score : a.id < b.id;
    };
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take), sorted.end(),
                      before);
    std::vector<CategoryId> ids(take);
    for (std::size_t i = 0; i < take; ++i) {
        ids[i] = sorted[i].id;
    }
    return ids;
}

void axpy(double alpha, std::span<const double> v, std::span<double> out) {
    if (v.size() != out.size()) {
        throw DimensionMismatch("axpy dimension mismatch");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] += alpha * v[i];
    }
}

}  // namespace promptfuse
