#ifndef ABO_BENCH_HPP
#define ABO_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "abo/algorithms.hpp"
#include "abo/objectives.hpp"

namespace abo {

enum class Problem { ExampleRkhs, GpSample, Synthetic4d };

std::string_view to_string(Problem p);
std::string_view to_string(Variant v);
std::string_view to_string(RegretEstimator e);
std::string_view to_string(MapMode m);
std::string_view to_string(BetaMode m);

/**
 * One benchmark matrix: every algorithm runs on every seed. Seeds select the
 * objective instance (for generated problems), the initial design and the
 * observation noise, so algorithms sharing a seed see identical inputs.
 */
struct ExperimentConfig {
    Problem problem = Problem::ExampleRkhs;
    std::vector<AlgorithmConfig> algorithms;
    std::vector<std::uint64_t> seeds;
    int iterations = 100;
    std::filesystem::path output_dir = "results";
    /// Negative means 2^d.
    int init_points = -1;
    /// Non-positive means the problem default (4 for gp_sample, 2 otherwise).
    double objective_norm = 0.0;
    /// Empty means the problem default.
    Eigen::VectorXd objective_theta;
    int objective_centers = 30;
    int grid_size = 20;
    double observation_noise = 0.1;

    void validate() const;
};

/// Objective instance for (problem, seed) exactly as run_experiment builds it.
ObjectiveSpec make_problem(const ExperimentConfig& config, std::uint64_t seed);

/**
 * Flat INI document:
 *
 *     # experiment-level keys (optionally under [experiment])
 *     problem = example_rkhs
 *     seeds = 0-9            # or 1, 5, 7
 *     iterations = 100
 *
 *     [algorithm.agp_ucb]
 *     variant = agp_ucb
 *     estimator = regret_bound
 *
 * Unknown keys and out-of-range values throw ConfigError naming the key.
 * A document without algorithm sections gets one default A-GP-UCB entry.
 */
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Inverse of parse_config; every field is written explicitly.
std::string serialize_config(const ExperimentConfig& config);

std::vector<std::string> trace_header(int dim);

/// Write the trace as CSV (17 significant digits). Throws std::runtime_error
/// naming the path when it cannot be written.
void emit_trace(const RunTrace& trace, const std::filesystem::path& path);
void write_trace_csv(const RunTrace& trace, std::ostream& out);
/// Parse a CSV written by emit_trace (only the CSV columns are restored).
RunTrace read_trace(const std::filesystem::path& path);

struct SummaryRow {
    int iter = 0;
    int n = 0;
    double simple_mean = 0.0;
    double simple_std = 0.0;
    double cumulative_mean = 0.0;
    double cumulative_std = 0.0;
};

/// Per-iteration mean and sample standard deviation (n - 1) across traces, BO iterations only.
std::vector<SummaryRow> summarize_traces(const std::vector<RunTrace>& traces);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);
/// Atomic write of a summary file (temp file, then rename).
void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
std::vector<SummaryRow> read_summary(const std::filesystem::path& path);

struct RunOptions {
    int parallel = 1;
    std::int64_t seed_offset = 0;
};

struct RunFailure {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::string message;
};

struct ExperimentResult {
    std::vector<std::filesystem::path> trace_files;
    std::vector<std::filesystem::path> summary_files;
    std::vector<RunFailure> failures;
};

std::filesystem::path trace_path(const std::filesystem::path& dir, const std::string& algorithm,
                                 std::uint64_t seed);

/// Run the matrix and write one trace per (algorithm, seed) plus one summary
/// per algorithm. Individual run failures are collected, not thrown.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Group trace files in `dir` by algorithm and summarize each group.
std::vector<std::pair<std::string, std::vector<SummaryRow>>> summarize_directory(
    const std::filesystem::path& dir);

/// ABO_SEED_OFFSET, or 0 when unset. Throws ConfigError when not an integer.
std::int64_t seed_offset_from_env();

} // namespace abo

#endif // ABO_BENCH_HPP
