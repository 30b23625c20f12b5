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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promptfuse/core_math.hpp"

namespace promptfuse {

enum class Modality { Text, Image };
enum class Group { Base, Novel };

inline constexpr Modality kModalities[] = {Modality::Text, Modality::Image};

std::string_view to_string(Modality m);
std::string_view to_string(Group g);
/// Accepts "base" / "novel"; nullopt otherwise.
std::optional<Group> parse_group(std::string_view s);

/// Tolerance on |norm - 1| for stored prompts.
inline constexpr double kStoredUnitNormTolerance = 1e-3;

struct CategoryEntry {
    CategoryId id = 0;
    std::string name;
    Group group = Group::Base;
    std::vector<Embedding> text_prompts;
    std::vector<Embedding> image_prompts;

    const std::vector<Embedding>& prompts(Modality m) const {
        return m == Modality::Text ? text_prompts : image_prompts;
    }
    std::vector<Embedding>& prompts(Modality m) { return m == Modality::Text ? text_prompts : image_prompts; }
};

/// Multi-modal prompt bank: N_c text and M_c image prompt embeddings per
/// category, all of dimension \c dim. Immutable once loaded.
struct PromptBank {
    std::size_t dim = 0;
    std::vector<CategoryEntry> categories;
    std::string provenance;

    /// Entry with the given id, or nullptr.
    const CategoryEntry* find(CategoryId id) const;
};

struct Violation {
    std::optional<CategoryId> category;
    std::string field;
    std::string message;

    std::string describe() const;
};

/// Every invariant violation in \p bank. Empty means the bank can be saved
/// and loaded back.
std::vector<Violation> validate_bank(const PromptBank& bank);

/// Parses manifest.json and the two blobs without checking domain
/// invariants. Structural problems (missing files, bad JSON, row counts
/// that disagree with blob sizes) raise IoError / FormatError.
PromptBank read_bank(const std::filesystem::path& dir);

/// read_bank followed by validate_bank; violations raise ValidationError.
PromptBank load_bank(const std::filesystem::path& dir);

/// Writes manifest.json, text.f32 and image.f32 into \p dir, creating it.
/// Rows are ordered by ascending category id.
void save_bank(const PromptBank& bank, const std::filesystem::path& dir);

/// Normalizes raw embeddings for ingestion. Throws DegenerateInput on a
/// near-zero vector.
std::vector<Embedding> normalize_prompts(const std::vector<Embedding>& raw);

/// Arithmetic mean of the entry's prompts in one modality, not
/// re-normalized. Throws DegenerateInput when the list is empty or the
/// prompts cancel (mean norm < 1e-9).
Embedding mean_embedding(const CategoryEntry& entry, Modality modality);

/// Categories of one group, ids preserved. The result is a working view for
/// training and is not a persistable bank when ids become sparse.
PromptBank select_group(const PromptBank& bank, Group group);

}  // namespace promptfuse
