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
#include "cli/files.hpp"

#include <nlohmann/json.hpp>

#include "promptfuse/blob_io.hpp"
#include "promptfuse/errors.hpp"

namespace promptfuse::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json read_manifest(const fs::path& path, const char* kind) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(io::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("format_version", -1) != 1 || doc.value("kind", std::string{}) != kind) {
        throw FormatError(path.string() + ": expected a format_version 1 '" + std::string(kind) + "' manifest");
    }
    return doc;
}

std::vector<double> flatten(const std::vector<const Embedding*>& rows, std::size_t dim) {
    std::vector<double> out;
    out.reserve(rows.size() * dim);
    for (const auto* e : rows) {
        if (e->dim() != dim) {
            throw DimensionMismatch("row dimension " + std::to_string(e->dim()) + " != " + std::to_string(dim));
        }
        out.insert(out.end(), e->begin(), e->end());
    }
    return out;
}

Embedding row(const std::vector<double>& blob, std::size_t r, std::size_t dim) {
    const auto first = blob.begin() + static_cast<std::ptrdiff_t>(r * dim);
    return Embedding(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(dim)));
}

ordered_json final_json(const FinalPromptSet& set, CategoryId id) {
    const auto it = set.entries.find(id);
    if (it == set.entries.end()) {
        return nullptr;
    }
    return {{"weighted_by", it->second.weighted_by}, {"fallback", it->second.fallback}, {"masked", it->second.masked}};
}

}  // namespace

void save_patches(const PatchFile& file, const fs::path& dir) {
    const std::size_t per_image = file.images.empty() ? 0 : file.images.front().patches.size();
    std::vector<const Embedding*> rows;
    for (const auto& image : file.images) {
        if (image.patches.size() != per_image) {
            throw DimensionMismatch("every image needs the same number of patches");
        }
        for (const auto& p : image.patches) {
            rows.push_back(&p);
        }
    }
    ordered_json manifest = {{"format_version", 1},
                             {"kind", "patch_features"},
                             {"dim", file.dim},
                             {"images", file.images.size()},
                             {"patches_per_image", per_image}};
    io::ensure_directory(dir);
    io::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    io::write_f32_blob(dir / "features.f32", flatten(rows, file.dim));
}

PatchFile load_patches(const fs::path& dir) {
    const auto doc = read_manifest(dir / "manifest.json", "patch_features");
    try {
        PatchFile file;
        file.dim = doc.at("dim").get<std::size_t>();
        const auto images = doc.at("images").get<std::size_t>();
        const auto per_image = doc.at("patches_per_image").get<std::size_t>();
        const auto blob = io::read_f32_blob(dir / "features.f32", images * per_image * file.dim);
        for (std::size_t i = 0; i < images; ++i) {
            PatchFeatures pf;
            for (std::size_t p = 0; p < per_image; ++p) {
                pf.patches.push_back(row(blob, i * per_image + p, file.dim));
            }
            file.images.push_back(std::move(pf));
        }
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError((dir / "manifest.json").string() + ": " + e.what());
    }
}

void save_proposals(const ProposalFile& file, const fs::path& dir) {
    std::vector<const Embedding*> rows;
    ordered_json labels = ordered_json::array();
    for (const auto& p : file.proposals) {
        rows.push_back(&p.feature);
        labels.push_back(p.label ? ordered_json(*p.label) : ordered_json(nullptr));
    }
    if (!file.image_index.empty() && file.image_index.size() != file.proposals.size()) {
        throw DimensionMismatch("image_index must have one entry per proposal");
    }
    ordered_json manifest = {{"format_version", 1},
                             {"kind", "proposals"},
                             {"dim", file.dim},
                             {"count", file.proposals.size()},
                             {"labels", std::move(labels)}};
    if (!file.image_index.empty()) {
        manifest["image_index"] = file.image_index;
    }
    io::ensure_directory(dir);
    io::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    io::write_f32_blob(dir / "features.f32", flatten(rows, file.dim));
}

ProposalFile load_proposals(const fs::path& dir) {
    const auto doc = read_manifest(dir / "manifest.json", "proposals");
    try {
        ProposalFile file;
        file.dim = doc.at("dim").get<std::size_t>();
        const auto count = doc.at("count").get<std::size_t>();
        const auto& labels = doc.at("labels");
        if (!labels.is_array() || labels.size() != count) {
            throw FormatError("proposals manifest: 'labels' must have 'count' entries");
        }
        if (doc.contains("image_index")) {
            file.image_index = doc["image_index"].get<std::vector<std::size_t>>();
            if (file.image_index.size() != count) {
                throw FormatError("proposals manifest: 'image_index' must have 'count' entries");
            }
        }
        const auto blob = io::read_f32_blob(dir / "features.f32", count * file.dim);
        for (std::size_t i = 0; i < count; ++i) {
            Proposal p{row(blob, i, file.dim), std::nullopt};
            if (!labels[i].is_null()) {
                p.label = labels[i].get<CategoryId>();
            }
            file.proposals.push_back(std::move(p));
        }
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError((dir / "manifest.json").string() + ": " + e.what());
    }
}

void save_fused(const FusedPromptSet& fused, std::size_t dim, const FuseRecord& record, const fs::path& dir) {
    std::vector<const Embedding*> rows;
    ordered_json categories = ordered_json::array();
    for (const auto& [id, entry] : fused.entries) {
        if (!entry.excluded) {
            rows.push_back(&entry.fused);
        }
        const auto bits = record.mask.bits.find(id);
        categories.push_back({{"id", id},
                              {"excluded", entry.excluded},
                              {"keep_text", bits != record.mask.bits.end() && bits->second.keep_text},
                              {"keep_image", bits != record.mask.bits.end() && bits->second.keep_image},
                              {"text", final_json(record.text, id)},
                              {"image", final_json(record.image_finals, id)}});
    }
    ordered_json sidecar = {{"format_version", 1},
                            {"kind", "fused_prompts"},
                            {"dim", dim},
                            {"scenario", record.scenario},
                            {"seed", record.seed},
                            {"k", record.tpdw.k},
                            {"patches", record.tpdw.patches},
                            {"image", record.image},
                            {"categories", std::move(categories)}};
    io::ensure_directory(dir);
    io::write_f32_blob(dir / "fused.f32", flatten(rows, dim));
    io::write_text_file(dir / "fused.json", sidecar.dump(2) + "\n");
}

FusedPromptSet load_fused(const fs::path& dir) {
    const auto doc = read_manifest(dir / "fused.json", "fused_prompts");
    try {
        const auto dim = doc.at("dim").get<std::size_t>();
        const auto& categories = doc.at("categories");
        std::size_t active = 0;
        for (const auto& c : categories) {
            active += c.at("excluded").get<bool>() ? 0 : 1;
        }
        const auto blob = io::read_f32_blob(dir / "fused.f32", active * dim);
        FusedPromptSet fused;
        std::size_t r = 0;
        for (const auto& c : categories) {
            const auto id = c.at("id").get<CategoryId>();
            if (c.at("excluded").get<bool>()) {
                fused.entries.emplace(id, FusedPrompt{{}, true});
            } else {
                fused.entries.emplace(id, FusedPrompt{row(blob, r++, dim), false});
            }
        }
        return fused;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError((dir / "fused.json").string() + ": " + e.what());
    }
}

std::vector<LabeledImage> group_by_image(const PatchFile& patches, const ProposalFile& proposals) {
    std::vector<LabeledImage> images(patches.images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        images[i].patches = patches.images[i];
    }
    if (images.empty()) {
        throw FormatError("patch file holds no images");
    }
    for (std::size_t j = 0; j < proposals.proposals.size(); ++j) {
        const std::size_t img = proposals.image_index.empty() ? 0 : proposals.image_index[j];
        if (img >= images.size()) {
            throw FormatError("proposal " + std::to_string(j) + " refers to image " + std::to_string(img) +
                              " but the patch file holds " + std::to_string(images.size()));
        }
        images[img].proposals.push_back(proposals.proposals[j]);
    }
    return images;
}

}  // namespace promptfuse::cli
