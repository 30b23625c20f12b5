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
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "promptfuse/errors.hpp"
#include "promptfuse/synthetic_bench.hpp"

namespace promptfuse {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json world_json(const WorldConfig& c) {
    return {{"num_categories", c.num_categories},
            {"novel_fraction", c.novel_fraction},
            {"dim", c.dim},
            {"prompts_per_modality", c.prompts_per_modality},
            {"text_gap", c.text_gap},
            {"image_gap", c.image_gap},
            {"prompt_noise", c.prompt_noise},
            {"proposal_noise", c.proposal_noise},
            {"proposals_per_category", c.proposals_per_category},
            {"patches_per_image", c.patches_per_image},
            {"proposals_per_image", c.proposals_per_image},
            {"patch_noise", c.patch_noise},
            {"seed", c.seed}};
}

ordered_json counts_json(const GroupCounts& g) { return {{"correct", g.correct}, {"total", g.total}}; }

std::string fixed(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

}  // namespace

std::string metrics_to_json(const MetricsReport& report) {
    ordered_json scenarios = ordered_json::array();
    for (const auto& s : report.scenarios) {
        ordered_json confusion = ordered_json::array();
        for (const auto& [key, n] : s.confusion) {
            confusion.push_back({key.first, key.second, n});
        }
        scenarios.push_back({
            {"tag", std::string(to_string(s.tag))},
            {"repetitions", s.split_seeds.size()},
            {"split_seeds", s.split_seeds},
            {"accuracy", {{"overall", s.overall_accuracy()}, {"base", s.base_accuracy()}, {"novel", s.novel_accuracy()}}},
            {"spread",
             {{"overall", ScenarioMetrics::spread(s.overall_runs)},
              {"base", ScenarioMetrics::spread(s.base_runs)},
              {"novel", ScenarioMetrics::spread(s.novel_runs)}}},
            {"runs", {{"overall", s.overall_runs}, {"base", s.base_runs}, {"novel", s.novel_runs}}},
            {"counts", {{"base", counts_json(s.base)}, {"novel", counts_json(s.novel)}}},
            {"confusion", std::move(confusion)},
        });
    }
    ordered_json doc = {{"format_version", 1},
                        {"world", world_json(report.world)},
                        {"tpdw", {{"k", report.tpdw.k}, {"patches", report.tpdw.patches}}},
                        {"head", report.head},
                        {"split_seed", report.split_seed},
                        {"repetitions", report.repetitions},
                        {"scenarios", std::move(scenarios)}};
    return doc.dump(2) + "\n";
}

std::string metrics_to_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << "scenario,group,accuracy,spread,correct,total,repetitions\n";
    for (const auto& s : report.scenarios) {
        const GroupCounts overall{s.base.correct + s.novel.correct, s.base.total + s.novel.total};
        auto row = [&](const char* group, const GroupCounts& g, const std::vector<double>& runs) {
            out << to_string(s.tag) << ',' << group << ',' << fixed(g.accuracy()) << ','
                << fixed(ScenarioMetrics::spread(runs)) << ',' << g.correct << ',' << g.total << ','
                << s.split_seeds.size() << '\n';
        };
        row("overall", overall, s.overall_runs);
        row("base", s.base, s.base_runs);
        row("novel", s.novel, s.novel_runs);
    }
    return out.str();
}

std::string world_config_to_json(const WorldConfig& config) { return world_json(config).dump(2) + "\n"; }

WorldConfig world_config_from_json(const std::string& text) {
    WorldConfig c;
    try {
        const auto doc = ordered_json::parse(text);
        if (!doc.is_object()) {
            throw FormatError("world config must be a JSON object");
        }
        for (const auto& [key, value] : doc.items()) {
            if (key == "num_categories") c.num_categories = value.get<std::size_t>();
            else if (key == "novel_fraction") c.novel_fraction = value.get<double>();
            else if (key == "dim") c.dim = value.get<std::size_t>();
            else if (key == "prompts_per_modality") c.prompts_per_modality = value.get<std::size_t>();
            else if (key == "text_gap") c.text_gap = value.get<double>();
            else if (key == "image_gap") c.image_gap = value.get<double>();
            else if (key == "prompt_noise") c.prompt_noise = value.get<double>();
            else if (key == "proposal_noise") c.proposal_noise = value.get<double>();
            else if (key == "proposals_per_category") c.proposals_per_category = value.get<std::size_t>();
            else if (key == "patches_per_image") c.patches_per_image = value.get<std::size_t>();
            else if (key == "proposals_per_image") c.proposals_per_image = value.get<std::size_t>();
            else if (key == "patch_noise") c.patch_noise = value.get<double>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else throw FormatError("world config: unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("world config: " + std::string(e.what()));
    }
    return c;
}

}  // namespace promptfuse
