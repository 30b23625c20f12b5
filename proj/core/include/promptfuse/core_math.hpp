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
#include <initializer_list>
#include <span>
#include <vector>

namespace promptfuse {

using CategoryId = std::uint32_t;

/// Dense embedding vector. Arithmetic is always carried out in double
/// precision; on-disk blobs hold 32-bit floats.
class Embedding {
 public:
    Embedding() = default;
    explicit Embedding(std::vector<double> values) : values_(std::move(values)) {}
    Embedding(std::initializer_list<double> values) : values_(values) {}

    static Embedding zeros(std::size_t dim) { return Embedding(std::vector<double>(dim, 0.0)); }

    std::size_t dim() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    std::span<const double> view() const noexcept { return values_; }
    std::span<double> view() noexcept { return values_; }
    operator std::span<const double>() const noexcept { return values_; }  // NOLINT

    const std::vector<double>& values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }
    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }

    bool operator==(const Embedding&) const = default;

 private:
    std::vector<double> values_;
};

struct ScoredId {
    CategoryId id = 0;
    double score = 0.0;
};

/// Norm below which a vector is treated as having no direction.
inline constexpr double kNormEpsilon = 1e-12;

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);
bool all_finite(std::span<const double> v);

/// a.b / (|a||b|), clamped to [-1, 1]. Throws DimensionMismatch or
/// DegenerateInput for mismatched sizes or a zero-norm argument.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Throws DegenerateInput when |v| <= kNormEpsilon.
Embedding l2_normalize(std::span<const double> v);

/// Max-subtracted softmax. Throws DegenerateInput on empty input and
/// on any non-finite entry.
std::vector<double> softmax(std::span<const double> xs);

/// Ids of the min(k, n) highest scores, descending; equal scores are
/// ordered by ascending id.
std::vector<CategoryId> arg_top_k(std::span<const ScoredId> scores, std::size_t k);

/// out += alpha * v
void axpy(double alpha, std::span<const double> v, std::span<double> out);

}  // namespace promptfuse
