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
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "promptfuse/core_math.hpp"
#include "promptfuse/mm_classifier.hpp"
#include "promptfuse/prompt_fusion.hpp"
#include "promptfuse/synthetic_bench.hpp"
#include "promptfuse/tpdw.hpp"

using namespace promptfuse;

namespace {

SyntheticWorld make_world(std::size_t categories, std::size_t dim) {
    WorldConfig c;
    c.num_categories = categories;
    c.dim = dim;
    c.proposals_per_category = 4;
    return generate_world(c);
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (auto& x : v) {
        x = g(rng);
    }
    return v;
}

}  // namespace

static void BM_Softmax(benchmark::State& state) {
    const auto xs = random_values(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(softmax(xs));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Softmax)->Arg(5)->Arg(64)->Arg(1024);

static void BM_ArgTopK(benchmark::State& state) {
    const auto values = random_values(static_cast<std::size_t>(state.range(0)), 2);
    std::vector<ScoredId> scores;
    for (std::size_t i = 0; i < values.size(); ++i) {
        scores.push_back({static_cast<CategoryId>(i), values[i]});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(arg_top_k(scores, kDefaultTopK));
    }
}
BENCHMARK(BM_ArgTopK)->Arg(50)->Arg(1000)->Arg(10000);

static void BM_RunTpdw(benchmark::State& state) {
    const auto world = make_world(static_cast<std::size_t>(state.range(0)), 64);
    const TpdwConfig config;
    const auto& image = world.test.front().patches;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_tpdw(image, world.bank, config, Modality::Text));
    }
}
BENCHMARK(BM_RunTpdw)->Arg(50)->Arg(200);

static void BM_FuseAndClassify(benchmark::State& state) {
    const auto world = make_world(static_cast<std::size_t>(state.range(0)), 64);
    const TpdwConfig config;
    const auto& image = world.test.front();
    const auto text = run_tpdw(image.patches, world.bank, config, Modality::Text);
    const auto img = run_tpdw(image.patches, world.bank, config, Modality::Image);
    const auto mask = scenario_mask({ScenarioTag::F, 1}, category_refs(world.bank));
    for (auto _ : state) {
        const auto [t, i] = apply_mask(text, img, mask);
        const auto fused = fuse(t, i);
        benchmark::DoNotOptimize(classify(image.proposals, fused));
    }
}
BENCHMARK(BM_FuseAndClassify)->Arg(50)->Arg(200);

static void BM_ContrastiveLoss(benchmark::State& state) {
    const auto world = make_world(50, 64);
    const TpdwConfig config;
    const auto& image = world.train.front();
    const auto [t, i] = apply_mask(run_tpdw(image.patches, world.bank, config, Modality::Text),
                                   run_tpdw(image.patches, world.bank, config, Modality::Image),
                                   scenario_mask({ScenarioTag::F, 1}, category_refs(world.bank)));
    const auto fused = fuse(t, i);
    const auto head = ProjectionHead::initialize(64, 64, 1, kDefaultTemperature);
    for (auto _ : state) {
        benchmark::DoNotOptimize(contrastive_loss(image.proposals, fused, head));
    }
}
BENCHMARK(BM_ContrastiveLoss);

BENCHMARK_MAIN();
