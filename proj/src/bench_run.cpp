#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <thread>

#include "abo/bench.hpp"
#include "abo/errors.hpp"
#include "abo/objectives.hpp"

namespace abo {

namespace {

std::uint64_t shifted(std::uint64_t seed, std::int64_t offset) {
    return seed + static_cast<std::uint64_t>(offset);
}

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

AlgorithmConfig resolve(const AlgorithmConfig& base, const ExperimentConfig& config, int dim,
                        std::uint64_t seed) {
    AlgorithmConfig a = base;
    if (a.algorithm1_defaults) a.use_algorithm1_defaults(dim);
    a.iterations = config.iterations;
    a.init_points = config.init_points;
    a.seed = seed;
    return a;
}

} // namespace

ObjectiveSpec make_problem(const ExperimentConfig& config, std::uint64_t seed) {
    switch (config.problem) {
    case Problem::ExampleRkhs:
        return example_rkhs_preset();
    case Problem::GpSample: {
        const double norm = config.objective_norm > 0.0 ? config.objective_norm : 4.0;
        const Eigen::VectorXd theta =
            config.objective_theta.size() > 0 ? config.objective_theta : Eigen::VectorXd::Constant(1, 0.1);
        ObjectiveSpec spec =
            make_gp_sample_function(KernelSpec::squared_exponential(theta), config.grid_size, norm, seed);
        spec.name = "gp_sample";
        return spec;
    }
    case Problem::Synthetic4d: {
        const double norm = config.objective_norm > 0.0 ? config.objective_norm : 2.0;
        Eigen::VectorXd theta(4);
        theta << 0.2, 0.3, 2.0, 2.0;
        if (config.objective_theta.size() > 0) theta = config.objective_theta;
        ObjectiveSpec spec =
            make_rkhs_function(KernelSpec::squared_exponential(theta), config.objective_centers, norm, seed);
        spec.name = "synthetic_4d";
        return spec;
    }
    }
    throw ConfigError("unknown problem");
}

std::filesystem::path trace_path(const std::filesystem::path& dir, const std::string& algorithm,
                                 std::uint64_t seed) {
    return dir / (algorithm + "_seed" + std::to_string(seed) + ".csv");
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    std::filesystem::create_directories(config.output_dir);

    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s : config.seeds) seeds.push_back(shifted(s, options.seed_offset));

    ExperimentResult result;
    std::vector<std::optional<ObjectiveSpec>> problems(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        try {
            problems[i] = make_problem(config, seeds[i]);
            write_text_atomically(config.output_dir / ("objective_seed" + std::to_string(seeds[i]) + ".json"),
                                  objective_to_json(*problems[i]) + "\n");
        } catch (const std::exception& e) {
            for (const auto& a : config.algorithms) result.failures.push_back({a.name, seeds[i], e.what()});
        }
    }

    struct Job {
        std::size_t alg;
        std::size_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            if (problems[s]) jobs.push_back({a, s});
        }
    }

    std::vector<std::optional<RunTrace>> traces(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            const Job& job = jobs[j];
            const ObjectiveSpec& spec = *problems[job.seed];
            try {
                const AlgorithmConfig alg =
                    resolve(config.algorithms[job.alg], config, spec.dim(), seeds[job.seed]);
                RunTrace trace = run_algorithm(to_objective(spec, config.observation_noise), alg);
                emit_trace(trace, trace_path(config.output_dir, alg.name, seeds[job.seed]));
                if (trace.aborted) errors[j] = trace.error.empty() ? "run aborted" : trace.error;
                traces[j] = std::move(trace);
            } catch (const std::exception& e) {
                errors[j] = e.what();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(options.parallel, static_cast<int>(jobs.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        std::vector<RunTrace> group;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].alg != a) continue;
            const std::string& name = config.algorithms[a].name;
            if (traces[j]) {
                result.trace_files.push_back(trace_path(config.output_dir, name, seeds[jobs[j].seed]));
                group.push_back(*traces[j]);
            }
            if (!errors[j].empty()) result.failures.push_back({name, seeds[jobs[j].seed], errors[j]});
        }
        if (group.empty()) continue;
        const auto path = config.output_dir / ("summary_" + config.algorithms[a].name + ".csv");
        write_summary(summarize_traces(group), path);
        result.summary_files.push_back(path);
    }
    return result;
}

std::vector<std::pair<std::string, std::vector<SummaryRow>>> summarize_directory(
    const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    static const std::regex pattern(R"(^(.+)_seed([0-9]+)\.csv$)");
    std::map<std::string, std::vector<std::pair<std::uint64_t, std::filesystem::path>>> groups;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        std::smatch m;
        if (std::regex_match(name, m, pattern)) {
            groups[m[1].str()].emplace_back(std::stoull(m[2].str()), entry.path());
        }
    }
    std::vector<std::pair<std::string, std::vector<SummaryRow>>> out;
    for (auto& [alg, files] : groups) {
        std::sort(files.begin(), files.end());
        std::vector<RunTrace> traces;
        for (const auto& f : files) traces.push_back(read_trace(f.second));
        out.emplace_back(alg, summarize_traces(traces));
    }
    return out;
}

std::int64_t seed_offset_from_env() {
    const char* raw = std::getenv("ABO_SEED_OFFSET");
    if (raw == nullptr || *raw == '\0') return 0;
    const std::string_view s(raw);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("ABO_SEED_OFFSET must be an integer (got '" + std::string(s) + "')");
    }
    return v;
}

} // namespace abo
