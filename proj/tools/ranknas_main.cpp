#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ranknas/config.hpp"
#include "ranknas/errors.hpp"
#include "ranknas/report.hpp"

namespace {

using namespace ranknas;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    int jobs = 1;
    bool dry_run = false;
};

/// Loads and fully validates the config; applies the RANKNAS_CACHE override.
RunConfig load_config(const CommonArgs& args, SearchSpace& space) {
    RunConfig cfg = parse_config(args.config_path);
    space = resolve_space(cfg);
    if (const char* env = std::getenv("RANKNAS_CACHE"); env && *env) cfg.cache_path = env;
    cfg.pipe.jobs = args.jobs;

    if (cfg.pipe.tau >= space.n_edges())
        throw ConfigError(0, "pipeline.tau must be below the edge count " +
                                 std::to_string(space.n_edges()));
    if (cfg.pipe.sched.t_w >= cfg.pipe.T * cfg.pipe.epochs_per_iter)
        throw ConfigError(0, "pipeline.warmup_epochs must be below T * epochs_per_iter");
    if (cfg.pipe.probe_k < 2) throw ConfigError(0, "pipeline.probe_k must be >= 2");
    if (cfg.pipe.seeds.empty()) throw ConfigError(0, "pipeline.seeds must be non-empty");
    return cfg;
}

struct Experiment {
    RunConfig cfg;
    SearchSpace space;
    Dataset ds;
    SplitSet splits;
};

Experiment prepare(const CommonArgs& args) {
    Experiment ex;
    ex.cfg = load_config(args, ex.space);
    ex.ds = generate_dataset(ex.cfg.data_seed, ex.cfg.n_samples, ex.cfg.n_features,
                             ex.cfg.n_classes, ex.cfg.noise);
    ex.splits = split_dataset(ex.ds, ex.cfg.fractions, ex.cfg.split_seed);
    return ex;
}

int cmd_run(const CommonArgs& args) {
    SearchSpace space;
    RunConfig cfg = load_config(args, space);
    if (args.dry_run) {
        std::cout << "config ok: space " << space.name << ", "
                  << space.num_architectures() << " architectures, " << cfg.pipe.seeds.size()
                  << " seeds\n";
        return kExitOk;
    }
    Experiment ex = prepare(args);
    BenchmarkCache cache(ex.cfg.cache_path);
    ABReport ab = run_baseline_vs_regularized(ex.cfg.pipe, ex.space, ex.ds, ex.splits, cache);
    write_run_outputs(args.out_dir, ex.cfg, ab);
    std::cout << "skdt baseline " << ab.mean_skdt_baseline << " regularized "
              << ab.mean_skdt_regularized << " (delta "
              << ab.mean_skdt_regularized - ab.mean_skdt_baseline << ")\n";
    std::cout << "outputs written to " << args.out_dir << "\n";
    return kExitOk;
}

int cmd_ablate(const CommonArgs& args, const std::string& knob) {
    Experiment ex = prepare(args);
    BenchmarkCache cache(ex.cfg.cache_path);

    struct Setting {
        std::string value;
        PipelineConfig pipe;
    };
    std::vector<Setting> settings;
    const PipelineConfig& base = ex.cfg.pipe;
    auto fmt_double = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };
    if (knob == "lambda") {
        for (double v : ex.cfg.grids.lambda) {
            PipelineConfig p = base;
            p.sched.lambda_max = v;
            settings.push_back({fmt_double(v), p});
        }
    } else if (knob == "pairs") {
        for (int v : ex.cfg.grids.pairs) {
            PipelineConfig p = base;
            p.m = v;
            settings.push_back({std::to_string(v), p});
        }
    } else if (knob == "iters") {
        for (int v : ex.cfg.grids.iters) {
            PipelineConfig p = base;
            p.T = v;
            settings.push_back({std::to_string(v), p});
        }
    } else if (knob == "tau") {
        for (int v : ex.cfg.grids.tau) {
            PipelineConfig p = base;
            p.tau = v;
            settings.push_back({std::to_string(v), p});
        }
    } else if (knob == "schedule") {
        for (ScheduleMode v : ex.cfg.grids.schedule) {
            PipelineConfig p = base;
            p.sched.mode = v;
            settings.push_back({schedule_mode_name(v), p});
        }
    } else {
        throw ConfigError(0, "unknown ablation knob '" + knob +
                                 "' (expected lambda|pairs|iters|tau|schedule)");
    }
    if (settings.empty()) throw ConfigError(0, "ablation grid for '" + knob + "' is empty");

    std::vector<AblationRow> rows;
    for (const Setting& s : settings) {
        for (uint64_t seed : base.seeds) {
            PipelineReport rep =
                run_pipeline(s.pipe, ex.space, ex.ds, ex.splits, cache, seed);
            AblationRow row;
            row.knob = knob;
            row.value = s.value;
            row.seed = seed;
            row.skdt = rep.iterations.back().skdt;
            row.final_arch = rep.final_arch.to_string();
            row.final_acc = rep.final_result.valid_acc;
            rows.push_back(row);
            std::cout << knob << "=" << s.value << " seed=" << seed
                      << " skdt=" << row.skdt << " final=" << row.final_arch << "\n";
        }
    }
    write_ablation_csv(args.out_dir, knob, rows);
    std::cout << rows.size() << " rows written to "
              << (std::filesystem::path(args.out_dir) / ("ablate_" + knob + ".csv")).string()
              << "\n";
    return kExitOk;
}

int cmd_bench_fill(const CommonArgs& args) {
    Experiment ex = prepare(args);
    BenchmarkCache cache(ex.cfg.cache_path);
    const auto archs = enumerate_space(ex.space);
    const size_t before = cache.size();
    train_standalone_batch(ex.space, archs, ex.ds, ex.splits, ex.cfg.pipe.hparams, cache,
                           args.jobs);
    std::cout << "space " << ex.space.name << ": " << archs.size() << " architectures, "
              << (cache.size() - before) << " newly trained, cache at " << ex.cfg.cache_path
              << "\n";
    return kExitOk;
}

int cmd_report(const CommonArgs& args) {
    summarize_outputs(args.out_dir, std::cout);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ranknas — landmark-regularized super-net training at desk scale"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string knob;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", args.config_path, "experiment config file")
                ->required();
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--jobs", args.jobs, "stand-alone training parallelism")
            ->check(CLI::PositiveNumber);
        return cmd;
    };

    auto* run = add_common(app.add_subcommand("run", "baseline-vs-regularized A/B experiment"),
                           true);
    run->add_flag("--dry-run", args.dry_run, "validate the config and exit");
    auto* ablate = add_common(
        app.add_subcommand("ablate", "sweep one knob over its configured grid"), true);
    ablate->add_option("--knob", knob, "lambda|pairs|iters|tau|schedule")->required();
    add_common(app.add_subcommand("bench-fill",
                                  "stand-alone-train every architecture in the space"),
               true);
    add_common(app.add_subcommand("report", "aggregate CSVs in --out into a summary"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (app.got_subcommand("run")) return cmd_run(args);
        if (app.got_subcommand("ablate")) return cmd_ablate(args, knob);
        if (app.got_subcommand("bench-fill")) return cmd_bench_fill(args);
        if (app.got_subcommand("report")) return cmd_report(args);
    } catch (const ranknas::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
