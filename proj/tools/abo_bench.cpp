// abo-bench: run seeded benchmark matrices and summarize their traces.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "abo/bench.hpp"
#include "abo/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigError = 2;

int cmd_run(const std::string& config_path, const std::string& out_dir, int parallel) {
    abo::ExperimentConfig config;
    abo::RunOptions options;
    try {
        config = abo::load_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        options.parallel = parallel;
        options.seed_offset = abo::seed_offset_from_env();
    } catch (const abo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    abo::ExperimentResult result;
    try {
        result = abo::run_experiment(config, options);
    } catch (const abo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRunFailure;
    }

    for (const auto& f : result.summary_files) std::cout << "wrote " << f.string() << '\n';
    std::cout << result.trace_files.size() << " trace file(s) in " << config.output_dir.string() << '\n';
    for (const auto& f : result.failures) {
        std::cerr << "run failed: " << f.algorithm << " seed " << f.seed << ": " << f.message << '\n';
    }
    return result.failures.empty() ? kExitOk : kExitRunFailure;
}

int cmd_list_presets() {
    std::cout << "example_rkhs   1-d bump plus linear trend, SE theta=0.1, norm 2 (fixed)\n"
              << "gp_sample      1-d GP sample on a grid, SE theta=0.1, rescaled to norm 4 (seeded)\n"
              << "synthetic_4d   4-d RKHS expansion, SE theta=(0.2, 0.3, 2, 2), norm 2, 30 centers (seeded)\n";
    return kExitOk;
}

int cmd_summarize(const std::string& dir) {
    try {
        const auto groups = abo::summarize_directory(dir);
        if (groups.empty()) {
            std::cerr << "no trace files in " << dir << '\n';
            return kExitRunFailure;
        }
        for (const auto& [alg, rows] : groups) {
            const auto path = std::filesystem::path(dir) / ("summary_" + alg + ".csv");
            abo::write_summary(rows, path);
            if (rows.empty()) continue;
            const auto& last = rows.back();
            std::printf("%-24s n=%-3d iter=%-4d simple=%.4g (sd %.3g)  cumulative=%.4g (sd %.3g)\n",
                        alg.c_str(), last.n, last.iter, last.simple_mean, last.simple_std,
                        last.cumulative_mean, last.cumulative_std);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRunFailure;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive GP-UCB benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int parallel = 1;
    auto* run = app.add_subcommand("run", "Run every (algorithm, seed) pair of a config");
    run->add_option("--config", config_path, "INI experiment config")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

    auto* presets = app.add_subcommand("list-presets", "List the built-in problems");

    std::string summarize_dir;
    auto* summarize = app.add_subcommand("summarize", "Recompute summaries from trace files");
    summarize->add_option("dir", summarize_dir, "Directory holding <alg>_seed<n>.csv traces")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (*run) return cmd_run(config_path, out_dir, parallel);
    if (*presets) return cmd_list_presets();
    if (*summarize) return cmd_summarize(summarize_dir);
    return kExitConfigError;
}
