// forage-lab: evolve foraging controllers, run input-ablation sweeps and
// minimal-set searches, replay single trials.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "forage/ablation.hpp"
#include "forage/config.hpp"
#include "forage/evolution.hpp"
#include "forage/manifest.hpp"
#include "forage/svg.hpp"
#include "forage/textio.hpp"
#include "forage/trial.hpp"

namespace fs = std::filesystem;
using namespace forage;

namespace {

// bad arguments discovered after CLI11 parsing (exit code 1, not 2)
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig read_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    try {
        return load_config(path);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
}

std::string resolve_out_dir(const std::string& flag_value, const RunConfig& config,
                            const std::string& command) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("FORAGE_OUT_DIR"); env && *env) return env;
    if (!config.io.out_dir.empty()) return config.io.out_dir;
    return "results/" + command;
}

void write_output(const fs::path& dir, const std::string& rel,
                  const std::string& content) {
    fs::path target = dir / rel;
    fs::create_directories(target.parent_path());
    write_file(target.string(), content);
}

std::string curve_csv(const EfficiencyCurve& curve) {
    std::ostringstream out;
    out << "tick,delivered\n";
    for (auto [tick, delivered] : curve.samples)
        out << tick << ',' << delivered << '\n';
    return out.str();
}

std::vector<std::pair<double, double>> mean_curve(
    const std::vector<EfficiencyCurve>& curves) {
    std::vector<std::pair<double, double>> points;
    if (curves.empty()) return points;
    const std::size_t n = curves.front().samples.size();
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const EfficiencyCurve& c : curves)
            sum += static_cast<double>(c.samples[i].second);
        points.emplace_back(static_cast<double>(curves.front().samples[i].first),
                            sum / static_cast<double>(curves.size()));
    }
    return points;
}

AblationParams ablation_params(const RunConfig& config) {
    AblationParams params;
    params.seeds = config.ablation.seeds;
    params.alpha = config.ablation.alpha;
    params.min_rel_drop = config.ablation.min_rel_drop;
    params.replacement = config.ablation.replacement;
    return params;
}

TrialContext trial_context(const RunConfig& config) {
    TrialContext ctx;
    ctx.arena = config.arena;
    ctx.controller = config.controller;
    ctx.distribution = config.evolution.distribution;
    ctx.sample_stride = config.ablation.sample_stride;
    return ctx;
}

Genome load_genome_checked(const std::string& path) {
    try {
        return load_genome(path);
    } catch (const nlohmann::json::parse_error& e) {
        // propagate the byte offset for malformed files
        throw std::runtime_error("genome '" + path + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("genome '" + path + "': " + e.what());
    }
}

// -- evolve ----------------------------------------------------------------

struct EvolveArgs {
    std::string config_path, distribution, out;
    std::uint64_t seed = 1;
};

int cmd_evolve(const EvolveArgs& args) {
    RunConfig config = read_config(args.config_path);
    if (!args.distribution.empty()) {
        try {
            config.evolution.distribution = distribution_from_string(args.distribution);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    const fs::path out_dir = resolve_out_dir(args.out, config, "evolve");
    fs::create_directories(out_dir);

    const std::string config_text = config_to_json(config);
    ExperimentManifest manifest;
    manifest.command = "evolve";
    manifest.config_hash = hash_hex(config_text);
    manifest.master_seed = args.seed;
    manifest.outputs = {"champion.json", "config.json", "generations.csv"};
    write_output(out_dir, "manifest.json", manifest_to_json(manifest));

    TrialContext ctx = trial_context(config);
    EvolveResult result = evolve(config.evolution, ctx, args.seed);

    write_output(out_dir, "champion.json", genome_to_json(result.champion));
    write_output(out_dir, "config.json", config_text);
    write_output(out_dir, "generations.csv", generation_log_csv(result.log));

    std::cout << "evolve: distribution=" << to_string(config.evolution.distribution)
              << " seed=" << args.seed << " champion_fitness="
              << fmt_double(result.champion.fitness.value_or(0.0))
              << " initial_best=" << fmt_double(result.initial_best) << "\n"
              << "wrote " << (out_dir / "champion.json").string() << "\n";
    return 0;
}

// -- ablate ----------------------------------------------------------------

struct AblateArgs {
    std::string genome_path, config_path, out;
    int seeds = 0; // 0: keep the config's seed list
};

int cmd_ablate(const AblateArgs& args) {
    RunConfig config = read_config(args.config_path);
    if (args.seeds > 0) {
        config.ablation.seeds.clear();
        for (int k = 1; k <= args.seeds; ++k)
            config.ablation.seeds.push_back(static_cast<std::uint64_t>(k));
    }
    const std::string genome_text = read_file(args.genome_path);
    const Genome genome = load_genome_checked(args.genome_path);
    const fs::path out_dir = resolve_out_dir(args.out, config, "ablate");
    fs::create_directories(out_dir);

    AblationParams params = ablation_params(config);
    TrialContext ctx = trial_context(config);
    TrialFn run = make_trial_runner(genome, ctx); // validates the 15/3 interface

    const std::string config_text = config_to_json(config);
    ExperimentManifest manifest;
    manifest.command = "ablate";
    manifest.config_hash = hash_hex(config_text);
    manifest.input_genome_hash = hash_hex(genome_text);
    manifest.outputs = {"summary.csv"};
    for (std::uint64_t seed : params.seeds)
        manifest.outputs.push_back("curves/baseline_seed" + std::to_string(seed) + ".csv");
    for (ChannelGroup g : kAllGroups)
        for (std::uint64_t seed : params.seeds)
            manifest.outputs.push_back("curves/" + group_name(g) + "_seed" +
                                       std::to_string(seed) + ".csv");
    if (config.io.plots)
        for (ChannelGroup g : kAllGroups)
            manifest.outputs.push_back("plots/" + group_name(g) + ".svg");
    write_output(out_dir, "manifest.json", manifest_to_json(manifest));

    SweepResult sweep = ablation_sweep(run, params);

    std::ostringstream summary;
    summary << "group,seed,final_count\n";
    for (const EfficiencyCurve& c : sweep.baseline)
        summary << "baseline," << c.trial_seed << ',' << c.final_count << '\n';
    for (ChannelGroup g : kAllGroups)
        for (const EfficiencyCurve& c : sweep.per_group.at(g))
            summary << group_name(g) << ',' << c.trial_seed << ',' << c.final_count
                    << '\n';
    write_output(out_dir, "summary.csv", summary.str());

    for (std::size_t i = 0; i < sweep.baseline.size(); ++i)
        write_output(out_dir,
                     "curves/baseline_seed" +
                         std::to_string(sweep.baseline[i].trial_seed) + ".csv",
                     curve_csv(sweep.baseline[i]));
    for (ChannelGroup g : kAllGroups)
        for (const EfficiencyCurve& c : sweep.per_group.at(g))
            write_output(out_dir,
                         "curves/" + group_name(g) + "_seed" +
                             std::to_string(c.trial_seed) + ".csv",
                         curve_csv(c));

    if (config.io.plots) {
        for (ChannelGroup g : kAllGroups) {
            std::vector<ChartSeries> series;
            series.push_back({"baseline", mean_curve(sweep.baseline)});
            series.push_back({group_name(g) + " disabled",
                              mean_curve(sweep.per_group.at(g))});
            write_output(out_dir, "plots/" + group_name(g) + ".svg",
                         line_chart_svg("ablation: " + group_name(g), "tick",
                                        "resources delivered", series));
        }
    }

    std::cout << "ablate: " << params.seeds.size() << " seeds, "
              << (params.seeds.size() * (kGroupCount + 1)) << " trials\nwrote "
              << (out_dir / "summary.csv").string() << "\n";
    return 0;
}

// -- minimal ----------------------------------------------------------------

struct MinimalArgs {
    std::string genome_path, config_path, out, set;
    bool search = false;
    bool mock = false;
};

int cmd_minimal(const MinimalArgs& args) {
    if (args.set.empty() == !args.search)
        throw UsageError("minimal: exactly one of --set or --search is required");
    if (!args.mock && args.genome_path.empty())
        throw UsageError("minimal: --genome is required (or use --mock)");
    RunConfig config = read_config(args.config_path);

    std::set<ChannelGroup> candidate;
    if (!args.set.empty()) {
        std::stringstream ss(args.set);
        std::string name;
        while (std::getline(ss, name, ',')) {
            if (name.empty()) continue;
            try {
                candidate.insert(group_from_name(name));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
        if (candidate.empty()) throw UsageError("minimal: --set named no groups");
    }

    const fs::path out_dir = resolve_out_dir(args.out, config, "minimal");
    fs::create_directories(out_dir);

    std::string genome_text;
    TrialFn run;
    if (args.mock) {
        run = make_mock_runner();
    } else {
        genome_text = read_file(args.genome_path);
        run = make_trial_runner(load_genome_checked(args.genome_path),
                                trial_context(config));
    }

    const std::string config_text = config_to_json(config);
    ExperimentManifest manifest;
    manifest.command = "minimal";
    manifest.config_hash = hash_hex(config_text);
    manifest.input_genome_hash = args.mock ? "mock" : hash_hex(genome_text);
    manifest.outputs = {"report.json"};
    if (config.io.plots) manifest.outputs.push_back("plots/minimal_set.svg");
    write_output(out_dir, "manifest.json", manifest_to_json(manifest));

    AblationParams params = ablation_params(config);
    MinimalSetReport report = args.search
                                  ? greedy_minimal_search(run, params)
                                  : minimal_set_check(run, candidate, params);
    write_output(out_dir, "report.json", report_to_json(report));

    if (config.io.plots) {
        // rebuild the per-variant mean curves for the combined figure
        auto curves_for = [&](const std::set<ChannelGroup>& enabled) {
            AblationMask mask;
            for (ChannelGroup g : kAllGroups)
                if (!enabled.count(g))
                    mask.disable(g, params.replacement[static_cast<std::size_t>(g)]);
            std::vector<EfficiencyCurve> curves;
            curves.reserve(params.seeds.size());
            for (std::uint64_t seed : params.seeds) curves.push_back(run(mask, seed));
            return curves;
        };
        std::vector<ChartSeries> series;
        series.push_back({"candidate set", mean_curve(curves_for(report.candidate_set))});
        for (const auto& [g, outcome] : report.remove_one) {
            std::set<ChannelGroup> enabled = report.candidate_set;
            enabled.erase(g);
            series.push_back({"minus " + group_name(g), mean_curve(curves_for(enabled))});
        }
        for (const auto& [g, outcome] : report.add_one) {
            std::set<ChannelGroup> enabled = report.candidate_set;
            enabled.insert(g);
            series.push_back({"plus " + group_name(g), mean_curve(curves_for(enabled))});
        }
        write_output(out_dir, "plots/minimal_set.svg",
                     line_chart_svg("minimal input set", "tick",
                                    "resources delivered", series));
    }

    std::cout << "minimal: candidate={";
    bool first = true;
    for (ChannelGroup g : report.candidate_set) {
        if (!first) std::cout << ',';
        std::cout << group_name(g);
        first = false;
    }
    std::cout << "} verdict=" << to_string(report.verdict) << "\nwrote "
              << (out_dir / "report.json").string() << "\n";
    return 0;
}

// -- replay ----------------------------------------------------------------

struct ReplayArgs {
    std::string genome_path, config_path, out, mask, trace;
    std::uint64_t seed = 1;
};

int cmd_replay(const ReplayArgs& args) {
    RunConfig config = read_config(args.config_path);
    AblationMask mask;
    if (!args.mask.empty()) {
        try {
            mask = parse_mask(args.mask);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    const std::string genome_text = read_file(args.genome_path);
    const Genome genome = load_genome_checked(args.genome_path);

    fs::path out_dir;
    std::string trace_name;
    if (!args.trace.empty()) {
        fs::path trace_path = args.trace;
        out_dir = trace_path.parent_path().empty() ? fs::path(".")
                                                   : trace_path.parent_path();
        trace_name = trace_path.filename().string();
    } else {
        out_dir = resolve_out_dir(args.out, config, "replay");
        trace_name = "trace.csv";
    }
    fs::create_directories(out_dir);

    const std::string config_text = config_to_json(config);
    ExperimentManifest manifest;
    manifest.command = "replay";
    manifest.config_hash = hash_hex(config_text);
    manifest.master_seed = args.seed;
    manifest.input_genome_hash = hash_hex(genome_text);
    manifest.outputs = {trace_name, "world.json", "layout.csv"};
    write_output(out_dir, "manifest.json", manifest_to_json(manifest));

    TrialContext ctx = trial_context(config);
    ReplayResult result = replay_trial(genome, mask, args.seed, ctx);

    std::ostringstream trace;
    trace << "tick,x,y,theta,holding,delivered,laid_pheromone\n";
    for (const TraceRow& r : result.rows)
        trace << r.tick << ',' << fmt_double(r.x) << ',' << fmt_double(r.y) << ','
              << fmt_double(r.theta) << ',' << (r.holding ? 1 : 0) << ','
              << r.delivered << ',' << (r.laid_pheromone ? 1 : 0) << '\n';
    write_output(out_dir, trace_name, trace.str());
    write_output(out_dir, "world.json", world_to_json(result.final_world));

    WorldState initial = make_trial_world(args.seed, ctx);
    write_output(out_dir, "layout.csv", layout_to_csv(initial.resources));

    std::cout << "replay: seed=" << args.seed << " mask=" << format_mask(mask)
              << " delivered=" << result.final_world.delivered << "\nwrote "
              << (out_dir / trace_name).string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"forage-lab: central-place foraging laboratory: NEAT-evolved "
                 "controllers, input-ablation studies, minimal-set searches"};
    app.require_subcommand(1);

    EvolveArgs evolve_args;
    CLI::App* evolve_cmd =
        app.add_subcommand("evolve", "evolve a champion controller");
    evolve_cmd->add_option("--config", evolve_args.config_path, "run config JSON");
    evolve_cmd->add_option("--distribution", evolve_args.distribution,
                           "clustered|semiclustered|uniform");
    evolve_cmd->add_option("--seed", evolve_args.seed, "master seed");
    evolve_cmd->add_option("--out", evolve_args.out, "output directory");

    AblateArgs ablate_args;
    CLI::App* ablate_cmd =
        app.add_subcommand("ablate", "per-group input ablation sweep");
    ablate_cmd->add_option("--genome", ablate_args.genome_path, "champion genome file")
        ->required();
    ablate_cmd->add_option("--config", ablate_args.config_path, "run config JSON");
    ablate_cmd->add_option("--seeds", ablate_args.seeds, "use seeds 1..N");
    ablate_cmd->add_option("--out", ablate_args.out, "output directory");

    MinimalArgs minimal_args;
    CLI::App* minimal_cmd =
        app.add_subcommand("minimal", "check or search a sufficient minimal input set");
    minimal_cmd->add_option("--genome", minimal_args.genome_path, "champion genome file");
    minimal_cmd->add_option("--config", minimal_args.config_path, "run config JSON");
    minimal_cmd->add_option("--set", minimal_args.set,
                            "comma-separated group names to check");
    minimal_cmd->add_flag("--search", minimal_args.search,
                          "backward-elimination search for a minimal set");
    minimal_cmd->add_flag("--mock", minimal_args.mock,
                          "use the synthetic mock controller (testing)");
    minimal_cmd->add_option("--out", minimal_args.out, "output directory");

    ReplayArgs replay_args;
    CLI::App* replay_cmd = app.add_subcommand("replay", "trace a single trial");
    replay_cmd->add_option("--genome", replay_args.genome_path, "champion genome file")
        ->required();
    replay_cmd->add_option("--config", replay_args.config_path, "run config JSON");
    replay_cmd->add_option("--seed", replay_args.seed, "trial seed");
    replay_cmd->add_option("--mask", replay_args.mask,
                           "ablation mask, e.g. pheromone:off:1.0,compass:off");
    replay_cmd->add_option("--trace", replay_args.trace, "trace CSV path");
    replay_cmd->add_option("--out", replay_args.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (evolve_cmd->parsed()) return cmd_evolve(evolve_args);
        if (ablate_cmd->parsed()) return cmd_ablate(ablate_args);
        if (minimal_cmd->parsed()) return cmd_minimal(minimal_args);
        if (replay_cmd->parsed()) return cmd_replay(replay_args);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
