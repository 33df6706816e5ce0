#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "abo/bench.hpp"
#include "abo/errors.hpp"

namespace abo {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vector(const Eigen::VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(v(i));
    }
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
    throw ConfigError("key '" + key + "': " + why + " (got '" + value + "')");
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(v)) {
        bad_value(key, value, "expected a finite number");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        bad_value(key, value, "expected an integer");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value, "expected true or false");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

Eigen::VectorXd parse_vector(const std::string& key, const std::string& value) {
    const auto items = split_list(value);
    Eigen::VectorXd v(static_cast<Eigen::Index>(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_double(key, items[i]);
    return v;
}

std::vector<std::uint64_t> parse_seeds(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> seeds;
    for (const std::string& item : split_list(value)) {
        const auto dash = item.find('-', 1);
        if (dash != std::string::npos) {
            const long long a = parse_int(key, trim(item.substr(0, dash)));
            const long long b = parse_int(key, trim(item.substr(dash + 1)));
            if (a < 0 || b < a) bad_value(key, value, "seed ranges must be non-negative and ascending");
            for (long long s = a; s <= b; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
        } else {
            const long long s = parse_int(key, item);
            if (s < 0) bad_value(key, value, "seeds must be non-negative");
            seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (seeds.empty()) bad_value(key, value, "seed list must be non-empty");
    return seeds;
}

template <typename Enum>
Enum parse_enum(const std::string& key, const std::string& value,
                std::initializer_list<std::pair<std::string_view, Enum>> options) {
    for (const auto& [name, e] : options) {
        if (value == name) return e;
    }
    std::string allowed;
    for (const auto& [name, e] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    bad_value(key, value, "expected one of " + allowed);
}

void set_algorithm_key(AlgorithmConfig& a, const std::string& key, const std::string& value) {
    const std::string qualified = "algorithm." + a.name + "." + key;
    if (key == "variant") {
        a.variant = parse_enum<Variant>(qualified, value,
                                        {{"agp_ucb", Variant::AGPUCB},
                                         {"fixed_gp_ucb", Variant::FixedGPUCB},
                                         {"wang_shrink", Variant::WangShrink}});
    } else if (key == "estimator") {
        a.estimator = parse_enum<RegretEstimator>(
            qualified, value, {{"regret_bound", RegretEstimator::RegretBound}, {"one_step", RegretEstimator::OneStep}});
    } else if (key == "map_mode") {
        a.map_mode = parse_enum<MapMode>(qualified, value,
                                         {{"off", MapMode::Off},
                                          {"combine_max", MapMode::CombineMax},
                                          {"combine_scale", MapMode::CombineScale}});
    } else if (key == "beta_mode") {
        a.beta_mode = parse_enum<BetaMode>(
            qualified, value, {{"theoretical", BetaMode::Theoretical}, {"empirical", BetaMode::EmpiricalConstant}});
    } else if (key == "beta_constant") {
        a.beta_constant = parse_double(qualified, value);
    } else if (key == "kernel") {
        if (value == "se") {
            a.kernel_family = KernelFamily::SquaredExponential;
        } else if (value == "matern32" || value == "matern52") {
            a.kernel_family = KernelFamily::Matern;
            a.matern_nu = value == "matern32" ? 1.5 : 2.5;
        } else {
            bad_value(qualified, value, "expected one of se, matern32, matern52");
        }
    } else if (key == "theta0") {
        a.theta0 = parse_vector(qualified, value);
    } else if (key == "b0") {
        a.b0 = parse_double(qualified, value);
    } else if (key == "delta") {
        a.delta = parse_double(qualified, value);
    } else if (key == "noise_sigma") {
        a.noise_sigma = parse_double(qualified, value);
    } else if (key == "lambda") {
        a.lambda = parse_double(qualified, value);
    } else if (key == "reference_exponent") {
        a.reference_exponent = parse_double(qualified, value);
    } else if (key == "kappa") {
        a.kappa = parse_double(qualified, value);
    } else if (key == "cap_coefficient") {
        a.cap_coefficient = parse_double(qualified, value);
    } else if (key == "cap_exponent") {
        a.cap_exponent = parse_double(qualified, value);
    } else if (key == "prior_shape") {
        a.prior.shape = parse_double(qualified, value);
    } else if (key == "prior_rate") {
        a.prior.rate = parse_double(qualified, value);
    } else if (key == "algorithm1_defaults") {
        a.algorithm1_defaults = parse_bool(qualified, value);
    } else {
        throw ConfigError("unknown key '" + qualified + "'");
    }
}

void set_experiment_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
    if (key == "problem") {
        c.problem = parse_enum<Problem>(key, value,
                                        {{"example_rkhs", Problem::ExampleRkhs},
                                         {"gp_sample", Problem::GpSample},
                                         {"synthetic_4d", Problem::Synthetic4d}});
    } else if (key == "seeds") {
        c.seeds = parse_seeds(key, value);
    } else if (key == "iterations") {
        c.iterations = static_cast<int>(parse_int(key, value));
    } else if (key == "output_dir") {
        c.output_dir = value;
    } else if (key == "init_points") {
        c.init_points = static_cast<int>(parse_int(key, value));
    } else if (key == "objective_norm") {
        c.objective_norm = parse_double(key, value);
    } else if (key == "objective_theta") {
        c.objective_theta = parse_vector(key, value);
    } else if (key == "objective_centers") {
        c.objective_centers = static_cast<int>(parse_int(key, value));
    } else if (key == "grid_size") {
        c.grid_size = static_cast<int>(parse_int(key, value));
    } else if (key == "observation_noise") {
        c.observation_noise = parse_double(key, value);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

} // namespace

std::string_view to_string(Problem p) {
    switch (p) {
    case Problem::ExampleRkhs: return "example_rkhs";
    case Problem::GpSample: return "gp_sample";
    case Problem::Synthetic4d: return "synthetic_4d";
    }
    return "?";
}

std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::AGPUCB: return "agp_ucb";
    case Variant::FixedGPUCB: return "fixed_gp_ucb";
    case Variant::WangShrink: return "wang_shrink";
    }
    return "?";
}

std::string_view to_string(RegretEstimator e) {
    return e == RegretEstimator::RegretBound ? "regret_bound" : "one_step";
}

std::string_view to_string(MapMode m) {
    switch (m) {
    case MapMode::Off: return "off";
    case MapMode::CombineMax: return "combine_max";
    case MapMode::CombineScale: return "combine_scale";
    }
    return "?";
}

std::string_view to_string(BetaMode m) {
    return m == BetaMode::Theoretical ? "theoretical" : "empirical";
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ConfigError("key 'seeds': seed list must be non-empty");
    if (iterations < 1) throw ConfigError("key 'iterations': must be >= 1");
    if (algorithms.empty()) throw ConfigError("at least one [algorithm.NAME] section is required");
    if (objective_centers < 1) throw ConfigError("key 'objective_centers': must be >= 1");
    if (grid_size < 2) throw ConfigError("key 'grid_size': must be >= 2");
    if (!(observation_noise >= 0.0)) throw ConfigError("key 'observation_noise': must be >= 0");
    if (objective_theta.size() > 0 && !(objective_theta.array() > 0.0).all()) {
        throw ConfigError("key 'objective_theta': lengthscales must be positive");
    }
    std::map<std::string, int> names;
    for (const AlgorithmConfig& a : algorithms) {
        if (++names[a.name] > 1) throw ConfigError("duplicate section [algorithm." + a.name + "]");
        AlgorithmConfig check = a;
        check.iterations = iterations;
        try {
            check.validate();
        } catch (const InvalidSpec& e) {
            throw ConfigError(e.what());
        }
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    AlgorithmConfig* current = nullptr;
    bool in_experiment = true;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            const std::string section = trim(line.substr(1, line.size() - 2));
            if (section == "experiment") {
                in_experiment = true;
                current = nullptr;
            } else if (section.rfind("algorithm.", 0) == 0 && section.size() > 10) {
                AlgorithmConfig a;
                a.name = section.substr(10);
                config.algorithms.push_back(std::move(a));
                current = &config.algorithms.back();
                in_experiment = false;
            } else {
                throw ConfigError("unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (in_experiment) {
            set_experiment_key(config, key, value);
        } else {
            set_algorithm_key(*current, key, value);
        }
    }
    if (config.seeds.empty()) {
        for (std::uint64_t s = 0; s < 10; ++s) config.seeds.push_back(s);
    }
    if (config.algorithms.empty()) config.algorithms.emplace_back();
    for (AlgorithmConfig& a : config.algorithms) {
        a.iterations = config.iterations;
        a.init_points = config.init_points;
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "problem = " << to_string(c.problem) << "\n";
    out << "seeds = ";
    for (std::size_t i = 0; i < c.seeds.size(); ++i) out << (i ? ", " : "") << c.seeds[i];
    out << "\n";
    out << "iterations = " << c.iterations << "\n";
    out << "output_dir = " << c.output_dir.string() << "\n";
    out << "init_points = " << c.init_points << "\n";
    out << "objective_norm = " << fmt_double(c.objective_norm) << "\n";
    if (c.objective_theta.size() > 0) out << "objective_theta = " << fmt_vector(c.objective_theta) << "\n";
    out << "objective_centers = " << c.objective_centers << "\n";
    out << "grid_size = " << c.grid_size << "\n";
    out << "observation_noise = " << fmt_double(c.observation_noise) << "\n";
    for (const AlgorithmConfig& a : c.algorithms) {
        out << "\n[algorithm." << a.name << "]\n";
        out << "variant = " << to_string(a.variant) << "\n";
        out << "estimator = " << to_string(a.estimator) << "\n";
        out << "map_mode = " << to_string(a.map_mode) << "\n";
        out << "beta_mode = " << to_string(a.beta_mode) << "\n";
        out << "beta_constant = " << fmt_double(a.beta_constant) << "\n";
        if (a.kernel_family == KernelFamily::SquaredExponential) {
            out << "kernel = se\n";
        } else {
            out << "kernel = " << (a.matern_nu < 2.0 ? "matern32" : "matern52") << "\n";
        }
        out << "algorithm1_defaults = " << (a.algorithm1_defaults ? "true" : "false") << "\n";
        if (a.theta0.size() > 0) {
            out << "theta0 = " << fmt_vector(a.theta0) << "\n";
        }
        out << "b0 = " << fmt_double(a.b0) << "\n";
        out << "delta = " << fmt_double(a.delta) << "\n";
        out << "noise_sigma = " << fmt_double(a.noise_sigma) << "\n";
        out << "lambda = " << fmt_double(a.lambda) << "\n";
        out << "reference_exponent = " << fmt_double(a.reference_exponent) << "\n";
        out << "kappa = " << fmt_double(a.kappa) << "\n";
        out << "cap_coefficient = " << fmt_double(a.cap_coefficient) << "\n";
        out << "cap_exponent = " << fmt_double(a.cap_exponent) << "\n";
        out << "prior_shape = " << fmt_double(a.prior.shape) << "\n";
        out << "prior_rate = " << fmt_double(a.prior.rate) << "\n";
    }
    return out.str();
}

} // namespace abo
