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
#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/files.hpp"
#include "promptfuse/blob_io.hpp"
#include "promptfuse/errors.hpp"
#include "promptfuse/mm_classifier.hpp"
#include "promptfuse/prompt_bank.hpp"
#include "promptfuse/prompt_fusion.hpp"
#include "promptfuse/synthetic_bench.hpp"
#include "promptfuse/tpdw.hpp"

namespace promptfuse::cli {

namespace fs = std::filesystem;

namespace {

/// Bad flag values discovered after parsing.
class UsageError : public Error {
 public:
    using Error::Error;
};

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw UsageError(std::string(what) + ": '" + s + "' is not an unsigned integer");
    }
    return v;
}

struct SeedOption {
    std::string value;
    CLI::Option* option = nullptr;

    void add(CLI::App& app) {
        option = app.add_option("--seed", value, "RNG seed (default: $PROMPTFUSE_SEED, else 1)");
    }
    std::uint64_t resolve() const {
        if (option != nullptr && option->count() > 0) {
            return parse_u64(value, "--seed");
        }
        if (const char* env = std::getenv("PROMPTFUSE_SEED"); env != nullptr && *env != '\0') {
            return parse_u64(env, "PROMPTFUSE_SEED");
        }
        return kDefaultSeed;
    }
};

ScenarioTag parse_tag(const std::string& s) {
    const auto tag = parse_scenario_tag(s);
    if (!tag) {
        throw UsageError("unknown scenario '" + s + "' (expected T, I, F, T/2-I/2, T-I/2 or T/2-I)");
    }
    return *tag;
}

std::vector<ScenarioTag> parse_tags(const std::string& list) {
    std::vector<ScenarioTag> tags;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        tags.push_back(parse_tag(item));
    }
    if (tags.empty()) {
        throw UsageError("no scenarios given");
    }
    return tags;
}

PrmPolicy parse_policy(const std::string& s) {
    std::vector<double> p;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            p.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw UsageError("--policy: '" + s + "' is not three comma-separated probabilities");
        }
    }
    if (p.size() != 3) {
        throw UsageError("--policy expects p_both,p_text_only,p_image_only");
    }
    PrmPolicy policy{p[0], p[1], p[2]};
    try {
        policy.validate();
    } catch (const DegenerateInput& e) {
        throw UsageError(std::string("--policy: ") + e.what());
    }
    return policy;
}

struct TpdwOptions {
    std::size_t k = kDefaultTopK;
    std::size_t patches = kDefaultPatchCount;
    CLI::Option* patches_option = nullptr;

    void add(CLI::App& app) {
        app.add_option("--k", k, "candidate categories per patch")->capture_default_str();
        patches_option =
            app.add_option("--patch-count", patches, "patch features per image")->capture_default_str();
    }
    TpdwConfig config() const {
        TpdwConfig c{k, patches};
        if (k == 0 || patches == 0) {
            throw UsageError("--k and --patch-count must be >= 1");
        }
        return c;
    }
};

/// World flags; values given on the command line override --config.
struct WorldOptions {
    std::string config_path;
    WorldConfig values;
    std::vector<std::pair<CLI::Option*, std::function<void(WorldConfig&)>>> overrides;

    template <typename T>
    void bind(CLI::App& app, const char* flag, T WorldConfig::*field, const char* help) {
        auto* opt = app.add_option(flag, values.*field, help)->capture_default_str();
        overrides.emplace_back(opt, [this, field](WorldConfig& c) { c.*field = values.*field; });
    }

    void add(CLI::App& app) {
        app.add_option("--config", config_path, "world config JSON (flags override it)");
        bind(app, "--categories", &WorldConfig::num_categories, "number of categories");
        bind(app, "--novel-fraction", &WorldConfig::novel_fraction, "fraction of novel categories");
        bind(app, "--dim", &WorldConfig::dim, "embedding dimension");
        bind(app, "--prompts", &WorldConfig::prompts_per_modality, "prompts per category and modality");
        bind(app, "--text-gap", &WorldConfig::text_gap, "text prompt gap offset");
        bind(app, "--image-gap", &WorldConfig::image_gap, "image prompt gap offset");
        bind(app, "--prompt-noise", &WorldConfig::prompt_noise, "intra-category prompt noise");
        bind(app, "--proposal-noise", &WorldConfig::proposal_noise, "proposal feature noise");
        bind(app, "--proposals-per-category", &WorldConfig::proposals_per_category, "proposals per category");
        bind(app, "--patches-per-image", &WorldConfig::patches_per_image, "patch features per image");
        bind(app, "--proposals-per-image", &WorldConfig::proposals_per_image, "proposals per image");
        bind(app, "--patch-noise", &WorldConfig::patch_noise, "patch feature noise");
    }

    WorldConfig resolve(std::uint64_t seed) const {
        WorldConfig c = config_path.empty() ? WorldConfig{} : world_config_from_json(io::read_text_file(config_path));
        for (const auto& [opt, apply] : overrides) {
            if (opt->count() > 0) {
                apply(c);
            }
        }
        c.seed = seed;
        return c;
    }
};

void require_dims(std::size_t got, std::size_t want, const std::string& what) {
    if (got != want) {
        throw DimensionMismatch(what + " dimension " + std::to_string(got) + " != bank dimension " +
                                std::to_string(want));
    }
}

// ---- bank -----------------------------------------------------------------

int bank_validate(const fs::path& path, std::ostream& out) {
    const auto bank = read_bank(path);
    const auto violations = validate_bank(bank);
    if (violations.empty()) {
        out << "valid: " << bank.categories.size() << " categories, dim " << bank.dim << "\n";
        return kExitOk;
    }
    out << violations.size() << " violation(s):\n";
    for (const auto& v : violations) {
        out << "  " << v.describe() << "\n";
    }
    return kExitValidation;
}

int bank_inspect(const fs::path& path, std::ostream& out) {
    const auto bank = read_bank(path);
    std::size_t text = 0;
    std::size_t image = 0;
    std::size_t base = 0;
    for (const auto& c : bank.categories) {
        text += c.text_prompts.size();
        image += c.image_prompts.size();
        base += c.group == Group::Base ? 1 : 0;
    }
    out << "dim: " << bank.dim << "\n"
        << "provenance: " << bank.provenance << "\n"
        << "categories: " << bank.categories.size() << " (base " << base << ", novel "
        << bank.categories.size() - base << ")\n"
        << "prompts: text " << text << ", image " << image << "\n"
        << "id\tgroup\ttext\timage\tname\n";
    for (const auto& c : bank.categories) {
        out << c.id << '\t' << to_string(c.group) << '\t' << c.text_prompts.size() << '\t' << c.image_prompts.size()
            << '\t' << c.name << "\n";
    }
    return kExitOk;
}

// ---- fuse -----------------------------------------------------------------

struct FuseArgs {
    std::string bank;
    std::string patches;
    std::size_t image = 0;
    std::string scenario = "F";
    TpdwOptions tpdw;
    SeedOption seed;
    std::string out;
};

int cmd_fuse(const FuseArgs& a, std::ostream& out, std::ostream& err) {
    const auto bank = load_bank(a.bank);
    const auto patches = load_patches(a.patches);
    require_dims(patches.dim, bank.dim, "patch feature");
    if (a.image >= patches.images.size()) {
        throw UsageError("--image " + std::to_string(a.image) + " out of range (" +
                         std::to_string(patches.images.size()) + " images)");
    }
    const auto tpdw = a.tpdw.config();
    const auto tag = parse_tag(a.scenario);
    const auto seed = a.seed.resolve();
    const auto mask = scenario_mask({tag, seed}, category_refs(bank));

    const auto& image = patches.images[a.image];
    FuseRecord record{std::string(to_string(tag)), seed, tpdw, a.image, mask,
                      run_tpdw(image, bank, tpdw, Modality::Text), run_tpdw(image, bank, tpdw, Modality::Image)};
    auto [text, img] = apply_mask(record.text, record.image_finals, mask);
    const auto outcome = fuse_collect(text, img);
    record.text = std::move(text);
    record.image_finals = std::move(img);
    save_fused(outcome.fused, bank.dim, record, a.out);

    out << "fused " << outcome.fused.active_count() << " of " << outcome.fused.entries.size()
        << " categories (scenario " << record.scenario << ", seed " << seed << ") -> " << a.out << "\n";
    for (CategoryId id : outcome.degenerate) {
        err << "degenerate fusion: category " << id << " (final prompts cancel)\n";
    }
    return outcome.degenerate.empty() ? kExitOk : kExitNumerical;
}

// ---- classify -------------------------------------------------------------

struct ClassifyArgs {
    std::string bank;
    std::string fused;
    std::string scenario;
    std::string patches;
    std::size_t image = 0;
    std::string proposals;
    std::string head;
    std::string out;
    TpdwOptions tpdw;
    SeedOption seed;
};

void write_predictions(std::ostream& csv, const std::vector<ClassificationResult>& results,
                       const std::vector<std::size_t>& indices) {
    csv << "index,predicted,confidence";
    for (int r = 1; r <= 5; ++r) {
        csv << ",top" << r << "_id,top" << r << "_score";
    }
    csv << "\n";
    for (std::size_t j = 0; j < results.size(); ++j) {
        const auto& r = results[j];
        std::vector<ScoredId> order = r.scores;
        std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
            return x.score != y.score ? x.score > y.score : x.id < y.id;
        });
        csv << indices[j] << ',' << r.predicted << ',' << format_number(r.confidence);
        for (std::size_t t = 0; t < 5; ++t) {
            if (t < order.size()) {
                csv << ',' << order[t].id << ',' << format_number(order[t].score);
            } else {
                csv << ",,";
            }
        }
        csv << "\n";
    }
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
    const auto bank = load_bank(a.bank);
    const auto proposals = load_proposals(a.proposals);
    std::optional<HeadCheckpoint> head;
    if (!a.head.empty()) {
        head = load_head(a.head);
        require_dims(head->head.out_dim, bank.dim, "head output");
        if (head->head.in_dim != proposals.dim) {
            throw DimensionMismatch("proposal dimension " + std::to_string(proposals.dim) + " != head input " +
                                    std::to_string(head->head.in_dim));
        }
    } else {
        require_dims(proposals.dim, bank.dim, "proposal");
    }
    const ProjectionHead* head_ptr = head ? &head->head : nullptr;

    std::vector<ClassificationResult> results(proposals.proposals.size());
    std::vector<std::size_t> indices(proposals.proposals.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        indices[j] = j;
    }
    if (!a.fused.empty()) {
        const auto fused = load_fused(a.fused);
        results = classify(proposals.proposals, fused, head_ptr);
    } else {
        if (a.patches.empty()) {
            throw UsageError("classify needs --fused, or --patches with an optional --scenario");
        }
        const auto patches = load_patches(a.patches);
        require_dims(patches.dim, bank.dim, "patch feature");
        const auto tpdw = a.tpdw.config();
        const auto tag = parse_tag(a.scenario.empty() ? "F" : a.scenario);
        const auto mask = scenario_mask({tag, a.seed.resolve()}, category_refs(bank));
        std::vector<std::vector<std::size_t>> members(patches.images.size());
        for (std::size_t j = 0; j < proposals.proposals.size(); ++j) {
            const std::size_t img = proposals.image_index.empty() ? a.image : proposals.image_index[j];
            if (img >= patches.images.size()) {
                throw FormatError("proposal " + std::to_string(j) + " refers to missing image " + std::to_string(img));
            }
            members[img].push_back(j);
        }
        for (std::size_t i = 0; i < patches.images.size(); ++i) {
            if (members[i].empty()) {
                continue;
            }
            const auto [text, img] = apply_mask(run_tpdw(patches.images[i], bank, tpdw, Modality::Text),
                                                run_tpdw(patches.images[i], bank, tpdw, Modality::Image), mask);
            const auto fused = fuse(text, img);
            std::vector<Proposal> batch;
            for (std::size_t j : members[i]) {
                batch.push_back(proposals.proposals[j]);
            }
            const auto part = classify(batch, fused, head_ptr);
            for (std::size_t t = 0; t < members[i].size(); ++t) {
                results[members[i][t]] = part[t];
            }
        }
    }

    if (a.out.empty() || a.out == "-") {
        write_predictions(out, results, indices);
    } else {
        std::ostringstream csv;
        write_predictions(csv, results, indices);
        io::write_text_file(a.out, csv.str());
    }
    return kExitOk;
}

// ---- synth / train / bench ------------------------------------------------

struct SynthArgs {
    WorldOptions world;
    SeedOption seed;
    std::string out;
};

void export_images(const std::vector<LabeledImage>& images, std::size_t dim, const fs::path& patches_dir,
                   const fs::path& proposals_dir) {
    PatchFile patches{dim, {}};
    ProposalFile proposals{dim, {}, {}};
    for (std::size_t i = 0; i < images.size(); ++i) {
        patches.images.push_back(images[i].patches);
        for (const auto& p : images[i].proposals) {
            proposals.proposals.push_back(p);
            proposals.image_index.push_back(i);
        }
    }
    save_patches(patches, patches_dir);
    save_proposals(proposals, proposals_dir);
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    const auto config = a.world.resolve(a.seed.resolve());
    const auto world = generate_world(config);
    const fs::path dir = a.out;
    save_bank(world.bank, dir / "bank");
    export_images(world.train, config.dim, dir / "train_patches", dir / "train_proposals");
    export_images(world.test, config.dim, dir / "test_patches", dir / "test_proposals");
    io::write_text_file(dir / "world.json", world_config_to_json(config));
    out << "synthetic world (seed " << config.seed << "): " << world.bank.categories.size() << " categories, "
        << world.train.size() << " train images, " << world.test.size() << " test images -> " << dir.string()
        << "\n";
    return kExitOk;
}

struct TrainArgs {
    std::string bank;
    std::string patches;
    std::string proposals;
    std::string out;
    std::string policy = "0.5,0.25,0.25";
    std::size_t epochs = TrainConfig{}.epochs;
    double learning_rate = TrainConfig{}.learning_rate;
    double temperature = kDefaultTemperature;
    TpdwOptions tpdw;
    SeedOption seed;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
    const auto bank = load_bank(a.bank);
    const auto patches = load_patches(a.patches);
    const auto proposals = load_proposals(a.proposals);
    require_dims(patches.dim, bank.dim, "patch feature");
    const auto images = group_by_image(patches, proposals);
    const TrainConfig config{a.epochs, a.learning_rate, a.seed.resolve(), a.temperature};
    const auto result = train_head(images, bank, a.tpdw.config(), parse_policy(a.policy), config);
    save_head({result.head, config.seed, result.steps}, a.out);
    out << "trained " << result.steps << " steps: loss " << format_number(result.initial_loss) << " -> "
        << format_number(result.final_loss) << " -> " << a.out << "\n";
    return kExitOk;
}

struct BenchArgs {
    WorldOptions world;
    SeedOption seed;
    std::string scenarios = "T,I,F,T/2-I/2,T-I/2,T/2-I";
    std::size_t repetitions = 5;
    std::string out;
    bool no_train = false;
    std::string policy = "0.5,0.25,0.25";
    std::size_t epochs = TrainConfig{}.epochs;
    double learning_rate = TrainConfig{}.learning_rate;
    TpdwOptions tpdw;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    const auto seed = a.seed.resolve();
    const auto config = a.world.resolve(seed);
    auto tpdw = a.tpdw.config();
    if (a.tpdw.patches_option->count() == 0) {
        tpdw.patches = config.patches_per_image;
    } else if (tpdw.patches != config.patches_per_image) {
        throw UsageError("--patch-count must equal the world's patches per image");
    }
    const auto tags = parse_tags(a.scenarios);
    if (a.repetitions == 0) {
        throw UsageError("--repetitions must be >= 1");
    }
    const auto world = generate_world(config);

    std::optional<TrainResult> trained;
    BenchmarkOptions options{a.repetitions, seed, "identity"};
    if (!a.no_train) {
        const TrainConfig tc{a.epochs, a.learning_rate, seed, kDefaultTemperature};
        trained = train_head(world.train, world.bank, tpdw, parse_policy(a.policy), tc);
        options.head_label = "trained: policy " + a.policy + ", epochs " + std::to_string(a.epochs) + ", lr " +
                             format_number(a.learning_rate) + ", seed " + std::to_string(seed);
    }
    const auto report = run_benchmark(world, tags, tpdw, trained ? &trained->head : nullptr, options);

    const fs::path dir = a.out;
    io::ensure_directory(dir);
    io::write_text_file(dir / "report.json", metrics_to_json(report));
    io::write_text_file(dir / "report.csv", metrics_to_csv(report));

    out << std::left << std::setw(10) << "scenario" << std::setw(10) << "overall" << std::setw(10) << "base"
        << std::setw(10) << "novel" << "spread\n"
        << std::fixed << std::setprecision(4);
    for (const auto& s : report.scenarios) {
        out << std::setw(10) << to_string(s.tag) << std::setw(10) << s.overall_accuracy() << std::setw(10)
            << s.base_accuracy() << std::setw(10) << s.novel_accuracy() << ScenarioMetrics::spread(s.overall_runs)
            << "\n";
    }
    out.unsetf(std::ios::floatfield);
    out.precision(6);
    out << "report -> " << (dir / "report.json").string() << ", " << (dir / "report.csv").string() << "\n";
    return kExitOk;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e) != nullptr) {
        return kExitValidation;
    }
    if (dynamic_cast<const NumericalError*>(&e) != nullptr || dynamic_cast<const DegenerateInput*>(&e) != nullptr) {
        return kExitNumerical;
    }
    return kExitInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"promptfuse: multi-modal prompt fusion for open-set classification", "promptfuse"};
    app.require_subcommand(1);

    auto* bank = app.add_subcommand("bank", "validate or inspect a prompt bank");
    bank->require_subcommand(1);
    std::string bank_path;
    auto* validate = bank->add_subcommand("validate", "check every bank invariant");
    validate->add_option("path", bank_path, "bank directory")->required();
    auto* inspect = bank->add_subcommand("inspect", "print dimension and prompt counts");
    inspect->add_option("path", bank_path, "bank directory")->required();

    FuseArgs fuse_args;
    auto* fuse_cmd = app.add_subcommand("fuse", "weight, mask and fuse prompts for one image");
    fuse_cmd->add_option("--bank", fuse_args.bank, "bank directory")->required();
    fuse_cmd->add_option("--patches", fuse_args.patches, "patch-features directory")->required();
    fuse_cmd->add_option("--image", fuse_args.image, "image index in the patch file")->capture_default_str();
    fuse_cmd->add_option("--scenario", fuse_args.scenario, "T, I, F, T/2-I/2, T-I/2 or T/2-I")->capture_default_str();
    fuse_cmd->add_option("--out", fuse_args.out, "output directory")->required();
    fuse_args.tpdw.add(*fuse_cmd);
    fuse_args.seed.add(*fuse_cmd);

    ClassifyArgs cls;
    auto* classify_cmd = app.add_subcommand("classify", "classify proposals against fused prompts");
    classify_cmd->add_option("--bank", cls.bank, "bank directory")->required();
    classify_cmd->add_option("--proposals", cls.proposals, "proposals directory")->required();
    auto* fused_opt = classify_cmd->add_option("--fused", cls.fused, "fused prompt directory from 'fuse'");
    classify_cmd->add_option("--scenario", cls.scenario, "scenario when fusing on the fly")->excludes(fused_opt);
    classify_cmd->add_option("--patches", cls.patches, "patch-features directory")->excludes(fused_opt);
    classify_cmd->add_option("--image", cls.image, "patch image for proposals without an image index");
    classify_cmd->add_option("--head", cls.head, "head checkpoint directory");
    classify_cmd->add_option("--out", cls.out, "predictions CSV (default stdout)");
    cls.tpdw.add(*classify_cmd);
    cls.seed.add(*classify_cmd);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic world's bank, patches and proposals");
    synth_cmd->add_option("--out", synth.out, "output directory")->required();
    synth.world.add(*synth_cmd);
    synth.seed.add(*synth_cmd);

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "train the projection head");
    train_cmd->add_option("--bank", train.bank, "bank directory")->required();
    train_cmd->add_option("--patches", train.patches, "training patch-features directory")->required();
    train_cmd->add_option("--proposals", train.proposals, "training proposals directory")->required();
    train_cmd->add_option("--out", train.out, "head checkpoint directory")->required();
    train_cmd->add_option("--policy", train.policy, "masking policy p_both,p_text_only,p_image_only")
        ->capture_default_str();
    train_cmd->add_option("--epochs", train.epochs, "training epochs")->capture_default_str();
    train_cmd->add_option("--lr", train.learning_rate, "SGD learning rate")->capture_default_str();
    train_cmd->add_option("--temperature", train.temperature, "logit temperature")->capture_default_str();
    train.tpdw.add(*train_cmd);
    train.seed.add(*train_cmd);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "run the synthetic scenario benchmark");
    bench_cmd->add_option("--out", bench.out, "report directory")->required();
    bench_cmd->add_option("--scenarios", bench.scenarios, "comma-separated scenario tags")->capture_default_str();
    bench_cmd->add_option("--repetitions", bench.repetitions, "split seeds per half-split scenario")
        ->capture_default_str();
    bench_cmd->add_flag("--no-train", bench.no_train, "evaluate with the identity head");
    bench_cmd->add_option("--policy", bench.policy, "training mask policy")->capture_default_str();
    bench_cmd->add_option("--epochs", bench.epochs, "training epochs")->capture_default_str();
    bench_cmd->add_option("--lr", bench.learning_rate, "SGD learning rate")->capture_default_str();
    bench.world.add(*bench_cmd);
    bench.tpdw.add(*bench_cmd);
    bench.seed.add(*bench_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (validate->parsed()) {
            return bank_validate(bank_path, out);
        }
        if (inspect->parsed()) {
            return bank_inspect(bank_path, out);
        }
        if (fuse_cmd->parsed()) {
            return cmd_fuse(fuse_args, out, err);
        }
        if (classify_cmd->parsed()) {
            return cmd_classify(cls, out);
        }
        if (synth_cmd->parsed()) {
            return cmd_synth(synth, out);
        }
        if (train_cmd->parsed()) {
            return cmd_train(train, out);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(bench, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitInput;
}

}  // namespace promptfuse::cli
