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
#include "promptfuse/prompt_bank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "promptfuse/blob_io.hpp"
#include "promptfuse/errors.hpp"

namespace promptfuse {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;
constexpr double kDegenerateMeanNorm = 1e-9;

struct CategoryHeader {
    CategoryId id = 0;
    std::string name;
    Group group = Group::Base;
    std::size_t text_count = 0;
    std::size_t image_count = 0;
};

std::vector<const CategoryEntry*> sorted_by_id(const PromptBank& bank) {
    std::vector<const CategoryEntry*> out;
    out.reserve(bank.categories.size());
    for (const auto& c : bank.categories) {
        out.push_back(&c);
    }
    std::stable_sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
    return out;
}

void check_embedding(const Embedding& e, std::size_t dim, CategoryId id, Modality m, std::size_t index,
                     std::vector<Violation>& out) {
    const std::string field = std::string(to_string(m)) + "_prompts[" + std::to_string(index) + "]";
    if (e.dim() != dim) {
        out.push_back({id, field, "dimension " + std::to_string(e.dim()) + " != bank dim " + std::to_string(dim)});
        return;
    }
    if (!all_finite(e)) {
        out.push_back({id, field, "non-finite value"});
        return;
    }
    const double n = l2_norm(e);
    if (std::abs(n - 1.0) > kStoredUnitNormTolerance) {
        out.push_back({id, field, "norm " + std::to_string(n) + " is not unit within 1e-3"});
    }
}

std::size_t json_count(const ordered_json& obj, const char* key, CategoryId id) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer() || it->get<long long>() < 0) {
        throw FormatError("manifest category " + std::to_string(id) + ": '" + key +
                          "' must be a non-negative integer");
    }
    return it->get<std::size_t>();
}

}  // namespace

std::string_view to_string(Modality m) { return m == Modality::Text ? "text" : "image"; }

std::string_view to_string(Group g) { return g == Group::Base ? "base" : "novel"; }

std::optional<Group> parse_group(std::string_view s) {
    if (s == "base") {
        return Group::Base;
    }
    if (s == "novel") {
        return Group::Novel;
    }
    return std::nullopt;
}

const CategoryEntry* PromptBank::find(CategoryId id) const {
    for (const auto& c : categories) {
        if (c.id == id) {
            return &c;
        }
    }
    return nullptr;
}

std::string Violation::describe() const {
    std::string s = category ? "category " + std::to_string(*category) : std::string("bank");
    if (!field.empty()) {
        s += " " + field;
    }
    return s + ": " + message;
}

std::vector<Violation> validate_bank(const PromptBank& bank) {
    std::vector<Violation> out;
    if (bank.dim == 0) {
        out.push_back({std::nullopt, "dim", "dimension must be positive"});
    }
    std::map<CategoryId, int> seen;
    const auto count = bank.categories.size();
    for (const auto& c : bank.categories) {
        if (++seen[c.id] == 2) {
            out.push_back({c.id, "id", "duplicate category id"});
        }
        if (c.id >= count) {
            out.push_back({c.id, "id", "ids must be dense from 0 (" + std::to_string(count) + " categories)"});
        }
        if (c.text_prompts.empty() && c.image_prompts.empty()) {
            out.push_back({c.id, "prompts", "category has no text or image prompts"});
        }
        for (Modality m : kModalities) {
            const auto& prompts = c.prompts(m);
            for (std::size_t i = 0; i < prompts.size(); ++i) {
                check_embedding(prompts[i], bank.dim, c.id, m, i, out);
            }
        }
    }
    return out;
}

PromptBank read_bank(const fs::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    ordered_json manifest;
    try {
        manifest = ordered_json::parse(io::read_text_file(manifest_path));
    } catch (const ordered_json::parse_error& e) {
        throw FormatError("manifest.json: " + std::string(e.what()));
    }
    if (!manifest.is_object()) {
        throw FormatError("manifest.json: top level must be an object");
    }
    if (manifest.value("format_version", -1) != kFormatVersion) {
        throw FormatError("manifest.json: unsupported format_version");
    }
    if (!manifest.contains("dim") || !manifest["dim"].is_number_integer() || manifest["dim"].get<long long>() < 0) {
        throw FormatError("manifest.json: 'dim' must be a non-negative integer");
    }
    if (!manifest.contains("categories") || !manifest["categories"].is_array()) {
        throw FormatError("manifest.json: 'categories' must be an array");
    }

    PromptBank bank;
    bank.dim = manifest["dim"].get<std::size_t>();
    bank.provenance = manifest.value("provenance", std::string{});

    std::vector<CategoryHeader> headers;
    for (const auto& item : manifest["categories"]) {
        if (!item.is_object() || !item.contains("id") || !item["id"].is_number_integer() ||
            item["id"].get<long long>() < 0) {
            throw FormatError("manifest.json: every category needs a non-negative integer 'id'");
        }
        CategoryHeader h;
        h.id = item["id"].get<CategoryId>();
        h.name = item.value("name", std::string{});
        const auto group = parse_group(item.value("group", std::string{}));
        if (!group) {
            throw FormatError("manifest category " + std::to_string(h.id) + ": group must be \"base\" or \"novel\"");
        }
        h.group = *group;
        h.text_count = json_count(item, "text_count", h.id);
        h.image_count = json_count(item, "image_count", h.id);
        headers.push_back(std::move(h));
    }
    std::stable_sort(headers.begin(), headers.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    const std::size_t text_rows = std::accumulate(headers.begin(), headers.end(), std::size_t{0},
                                                  [](std::size_t s, const auto& h) { return s + h.text_count; });
    const std::size_t image_rows = std::accumulate(headers.begin(), headers.end(), std::size_t{0},
                                                   [](std::size_t s, const auto& h) { return s + h.image_count; });
    const auto text = io::read_f32_blob(dir / "text.f32", text_rows * bank.dim);
    const auto image = io::read_f32_blob(dir / "image.f32", image_rows * bank.dim);

    std::size_t text_row = 0;
    std::size_t image_row = 0;
    auto take_rows = [&](const std::vector<double>& blob, std::size_t& row, std::size_t n) {
        std::vector<Embedding> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i, ++row) {
            const auto first = blob.begin() + static_cast<std::ptrdiff_t>(row * bank.dim);
            out.emplace_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(bank.dim)));
        }
        return out;
    };
    for (auto& h : headers) {
        CategoryEntry entry;
        entry.id = h.id;
        entry.name = std::move(h.name);
        entry.group = h.group;
        entry.text_prompts = take_rows(text, text_row, h.text_count);
        entry.image_prompts = take_rows(image, image_row, h.image_count);
        bank.categories.push_back(std::move(entry));
    }
    return bank;
}

PromptBank load_bank(const fs::path& dir) {
    auto bank = read_bank(dir);
    const auto violations = validate_bank(bank);
    if (!violations.empty()) {
        std::string msg = "invalid bank " + dir.string() + ":";
        for (const auto& v : violations) {
            msg += "\n  " + v.describe();
        }
        throw ValidationError(msg);
    }
    return bank;
}

void save_bank(const PromptBank& bank, const fs::path& dir) {
    ordered_json categories = ordered_json::array();
    std::vector<double> text;
    std::vector<double> image;
    for (const auto* c : sorted_by_id(bank)) {
        categories.push_back({{"id", c->id},
                              {"name", c->name},
                              {"group", std::string(to_string(c->group))},
                              {"text_count", c->text_prompts.size()},
                              {"image_count", c->image_prompts.size()}});
        for (Modality m : kModalities) {
            auto& blob = m == Modality::Text ? text : image;
            for (const auto& e : c->prompts(m)) {
                if (e.dim() != bank.dim) {
                    throw DimensionMismatch("category " + std::to_string(c->id) + ": embedding dimension " +
                                            std::to_string(e.dim()) + " != bank dim " + std::to_string(bank.dim));
                }
                blob.insert(blob.end(), e.begin(), e.end());
            }
        }
    }
    ordered_json manifest = {{"format_version", kFormatVersion},
                             {"dim", bank.dim},
                             {"categories", std::move(categories)},
                             {"provenance", bank.provenance}};

    io::ensure_directory(dir);
    io::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    io::write_f32_blob(dir / "text.f32", text);
    io::write_f32_blob(dir / "image.f32", image);
}

std::vector<Embedding> normalize_prompts(const std::vector<Embedding>& raw) {
    std::vector<Embedding> out;
    out.reserve(raw.size());
    for (const auto& e : raw) {
        out.push_back(l2_normalize(e));
    }
    return out;
}

Embedding mean_embedding(const CategoryEntry& entry, Modality modality) {
    const auto& prompts = entry.prompts(modality);
    if (prompts.empty()) {
        throw DegenerateInput("category " + std::to_string(entry.id) + " has no " +
                              std::string(to_string(modality)) + " prompts");
    }
    auto mean = Embedding::zeros(prompts.front().dim());
    for (const auto& p : prompts) {
        axpy(1.0, p, mean.view());
    }
    const auto n = static_cast<double>(prompts.size());
    for (double& x : mean) {
        x /= n;
    }
    if (l2_norm(mean) < kDegenerateMeanNorm) {
        throw DegenerateInput("category " + std::to_string(entry.id) + ": " + std::string(to_string(modality)) +
                              " prompts cancel to a zero mean");
    }
    return mean;
}

PromptBank select_group(const PromptBank& bank, Group group) {
    PromptBank out;
    out.dim = bank.dim;
    out.provenance = bank.provenance;
    for (const auto& c : bank.categories) {
        if (c.group == group) {
            out.categories.push_back(c);
        }
    }
    return out;
}

}  // namespace promptfuse
