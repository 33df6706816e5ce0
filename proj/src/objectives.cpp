#include "abo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <json.hpp>

#include "abo/errors.hpp"
#include "abo/gp.hpp"
#include "abo/rng.hpp"

namespace abo {

double evaluate_objective(const ObjectiveSpec& spec, const Eigen::VectorXd& x) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < spec.centers.rows(); ++i) {
        sum += spec.weights(i) * spec.kernel.evaluate(x, spec.centers.row(i).transpose());
    }
    return sum;
}

Eigen::VectorXd evaluate_objective(const ObjectiveSpec& spec, const PointMatrix& points) {
    if (points.rows() == 0) return Eigen::VectorXd(0);
    return cross_covariance(spec.kernel, points, spec.centers) * spec.weights;
}

namespace {

// Coordinate ascent on sign * f within the unit cube.
std::pair<Eigen::VectorXd, double> refine(const ObjectiveSpec& spec, Eigen::VectorXd x, double value,
                                          double sign, double step, int iterations) {
    for (int it = 0; it < iterations; ++it) {
        bool improved = false;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            for (double dir : {1.0, -1.0}) {
                Eigen::VectorXd probe = x;
                probe(j) = std::clamp(probe(j) + dir * step, 0.0, 1.0);
                if (probe(j) == x(j)) continue;
                const double v = sign * evaluate_objective(spec, probe);
                if (v > value) {
                    value = v;
                    x = probe;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {x, value};
}

std::pair<Eigen::VectorXd, double> extremum(const ObjectiveSpec& spec, const PointMatrix& scan,
                                            double step, double sign, int starts) {
    const Eigen::VectorXd values = sign * evaluate_objective(spec, scan);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(scan.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(starts), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
    Eigen::VectorXd best_x;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < k; ++s) {
        auto [x, v] = refine(spec, scan.row(order[s]).transpose(), values(order[s]), sign, step, 60);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    return {best_x, sign * best};
}

double rescale_to_norm(ObjectiveSpec& spec, double target_norm) {
    const double norm = rkhs_norm_of_expansion(spec.kernel, spec.centers, spec.weights);
    if (norm < 1e-12) return norm;
    spec.weights *= target_norm / norm;
    spec.true_norm = rkhs_norm_of_expansion(spec.kernel, spec.centers, spec.weights);
    return norm;
}

void check_target(double target_norm) {
    if (!(target_norm > 0.0) || !std::isfinite(target_norm)) {
        throw ContractViolation("target_norm must be positive and finite");
    }
}

} // namespace

void locate_extrema(ObjectiveSpec& spec) {
    const int d = spec.dim();
    PointMatrix scan;
    double step = 0.0;
    int starts = 0;
    if (d == 1) {
        const Eigen::Index n = 10000;
        scan.resize(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) scan(i, 0) = static_cast<double>(i) / static_cast<double>(n - 1);
        step = 1.0 / static_cast<double>(n - 1);
        starts = 3;
    } else {
        const Eigen::Index n = 256 * d;
        SobolSequence sobol(d);
        scan.resize(n, d);
        for (Eigen::Index i = 0; i < n; ++i) scan.row(i) = sobol.next().transpose();
        step = 0.5 * std::pow(static_cast<double>(n), -1.0 / d);
        starts = 10;
    }
    auto [x_max, f_max] = extremum(spec, scan, step, 1.0, starts);
    auto [x_min, f_min] = extremum(spec, scan, step, -1.0, starts);
    spec.x_star = x_max;
    spec.f_max = f_max;
    spec.f_min = f_min;
}

ObjectiveSpec make_rkhs_function(const KernelSpec& kernel, int m, double target_norm, std::uint64_t seed) {
    if (m < 1) throw ContractViolation("make_rkhs_function: m must be >= 1");
    check_target(target_norm);
    for (int attempt = 0; attempt < 10; ++attempt) {
        CounterRng rng(seed + static_cast<std::uint64_t>(attempt), 0, "rkhs-function");
        ObjectiveSpec spec{"rkhs", kernel, PointMatrix(m, kernel.dim()), Eigen::VectorXd(m), 0.0, 0.0, Eigen::VectorXd(), 0.0};
        for (int i = 0; i < m; ++i) spec.centers.row(i) = rng.uniform_vector(kernel.dim()).transpose();
        spec.weights = rng.normal_vector(m);
        if (rescale_to_norm(spec, target_norm) < 1e-12) continue;
        locate_extrema(spec);
        return spec;
    }
    throw NumericalError("make_rkhs_function: degenerate Gram matrix after 10 attempts");
}

ObjectiveSpec make_gp_sample_function(const KernelSpec& kernel, int grid_size, double target_norm,
                                      std::uint64_t seed) {
    if (grid_size < 2) throw ContractViolation("make_gp_sample_function: grid_size must be >= 2");
    check_target(target_norm);
    const int d = kernel.dim();
    Eigen::Index n = 1;
    for (int j = 0; j < d; ++j) n *= grid_size;
    PointMatrix grid(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index rest = i;
        for (int j = 0; j < d; ++j) {
            grid(i, j) = static_cast<double>(rest % grid_size) / static_cast<double>(grid_size - 1);
            rest /= grid_size;
        }
    }
    const Eigen::MatrixXd L = robust_cholesky(gram_matrix(kernel, grid));
    CounterRng rng(seed, 0, "gp-sample");
    const Eigen::VectorXd values = L * rng.normal_vector(n);
    Eigen::VectorXd weights = L.triangularView<Eigen::Lower>().solve(values);
    L.triangularView<Eigen::Lower>().transpose().solveInPlace(weights);

    ObjectiveSpec spec{"gp_sample", kernel, std::move(grid), std::move(weights), 0.0, 0.0, Eigen::VectorXd(), 0.0};
    if (rescale_to_norm(spec, target_norm) < 1e-12) {
        throw NumericalError("make_gp_sample_function: sampled function has zero norm");
    }
    locate_extrema(spec);
    return spec;
}

ObjectiveSpec example_rkhs_preset() {
    // Linear trend from 17 representers at -0.3, -0.2, ..., 1.3 plus one bump.
    const int ramp = 17;
    ObjectiveSpec spec{"example_rkhs", KernelSpec::squared_exponential(1, 0.1), PointMatrix(ramp + 1, 1),
                       Eigen::VectorXd(ramp + 1), 0.0, 0.0, Eigen::VectorXd(), 0.0};
    for (int i = 0; i < ramp; ++i) {
        const double c = -0.3 + 0.1 * i;
        spec.centers(i, 0) = c;
        spec.weights(i) = 0.4 * c;
    }
    spec.centers(ramp, 0) = 0.2;
    spec.weights(ramp) = 1.5;
    rescale_to_norm(spec, 2.0);
    locate_extrema(spec);
    return spec;
}

namespace {

nlohmann::json vector_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

} // namespace

std::string objective_to_json(const ObjectiveSpec& spec) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["kernel"] = {{"family", spec.kernel.family() == KernelFamily::Matern ? "matern" : "squared_exponential"},
                   {"nu", spec.kernel.nu()},
                   {"lengthscales", vector_json(spec.kernel.lengthscales())}};
    nlohmann::json centers = nlohmann::json::array();
    for (Eigen::Index i = 0; i < spec.centers.rows(); ++i) centers.push_back(vector_json(spec.centers.row(i).transpose()));
    j["centers"] = std::move(centers);
    j["weights"] = vector_json(spec.weights);
    j["true_norm"] = spec.true_norm;
    j["f_max"] = spec.f_max;
    j["x_star"] = vector_json(spec.x_star);
    j["f_min"] = spec.f_min;
    return j.dump(2);
}

ObjectiveSpec objective_from_json(std::string_view text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        const auto& k = j.at("kernel");
        const Eigen::VectorXd theta = json_vector(k.at("lengthscales"));
        const std::string family = k.at("family").get<std::string>();
        if (family != "matern" && family != "squared_exponential") throw InvalidSpec("unknown kernel family " + family);
        KernelSpec kernel = family == "matern" ? KernelSpec::matern(k.at("nu").get<double>(), theta)
                                               : KernelSpec::squared_exponential(theta);
        const auto& rows = j.at("centers");
        PointMatrix centers(static_cast<Eigen::Index>(rows.size()), kernel.dim());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Eigen::VectorXd c = json_vector(rows[i]);
            if (c.size() != kernel.dim()) throw InvalidSpec("center dimension does not match the kernel");
            centers.row(static_cast<Eigen::Index>(i)) = c.transpose();
        }
        ObjectiveSpec spec{j.at("name").get<std::string>(), std::move(kernel), std::move(centers),
                           json_vector(j.at("weights")), j.at("true_norm").get<double>(),
                           j.at("f_max").get<double>(), json_vector(j.at("x_star")), j.at("f_min").get<double>()};
        if (spec.weights.size() != spec.centers.rows()) throw InvalidSpec("weight count does not match centers");
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("malformed objective JSON: ") + e.what());
    }
}

Objective to_objective(const ObjectiveSpec& spec, double observation_noise) {
    auto shared = std::make_shared<const ObjectiveSpec>(spec);
    Objective out;
    out.value = [shared](const Eigen::VectorXd& x) { return evaluate_objective(*shared, x); };
    out.domain = Domain::unit_cube(spec.dim());
    out.observation_noise = observation_noise;
    out.f_max = spec.f_max;
    return out;
}

RegretCurves regret_curves(const std::vector<double>& init_values,
                           const std::vector<double>& iteration_values, double f_max) {
    double best = -std::numeric_limits<double>::infinity();
    for (double v : init_values) best = std::max(best, v);
    RegretCurves out;
    out.simple.reserve(iteration_values.size());
    out.cumulative.reserve(iteration_values.size());
    double cumulative = 0.0;
    for (double v : iteration_values) {
        best = std::max(best, v);
        cumulative += f_max - v;
        out.simple.push_back(f_max - best);
        out.cumulative.push_back(cumulative);
    }
    return out;
}

RegretCurves regret_metrics(const RunTrace& trace, const ObjectiveSpec& spec) {
    std::vector<double> init;
    std::vector<double> iters;
    for (const TraceRecord& r : trace.records) {
        (r.iter < 0 ? init : iters).push_back(evaluate_objective(spec, r.x));
    }
    return regret_curves(init, iters, spec.f_max);
}

} // namespace abo
