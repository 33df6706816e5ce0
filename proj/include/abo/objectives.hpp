#ifndef ABO_OBJECTIVES_HPP
#define ABO_OBJECTIVES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "abo/algorithms.hpp"
#include "abo/kernels.hpp"

namespace abo {

/**
 * f(x) = sum_i w_i k(x, c_i) on the unit cube, with its RKHS norm and a
 * numerically located optimum. f_min is tracked as well so regret thresholds
 * can be expressed relative to the function's range.
 */
struct ObjectiveSpec {
    std::string name;
    KernelSpec kernel;
    PointMatrix centers;
    Eigen::VectorXd weights;
    double true_norm = 0.0;
    double f_max = 0.0;
    Eigen::VectorXd x_star;
    double f_min = 0.0;

    [[nodiscard]] int dim() const noexcept { return kernel.dim(); }
    [[nodiscard]] double range() const noexcept { return f_max - f_min; }
};

double evaluate_objective(const ObjectiveSpec& spec, const Eigen::VectorXd& x);

/// Evaluate at every row of `points`.
Eigen::VectorXd evaluate_objective(const ObjectiveSpec& spec, const PointMatrix& points);

/**
 * m centers uniform in the unit cube, standard-normal weights, rescaled to
 * `target_norm`. Degenerate draws (norm < 1e-12) are retried with seed + 1,
 * up to 10 attempts.
 */
ObjectiveSpec make_rkhs_function(const KernelSpec& kernel, int m, double target_norm, std::uint64_t seed);

/**
 * GP sample on a regular grid (grid_size points per dimension, endpoints
 * included) interpolated with the same kernel and rescaled to `target_norm`.
 */
ObjectiveSpec make_gp_sample_function(const KernelSpec& kernel, int grid_size, double target_norm,
                                      std::uint64_t seed);

/// Locate max/min: 10^4-point grid in 1-d, 256 d Sobol points otherwise,
/// each followed by coordinate refinement. Fills f_max, x_star and f_min.
void locate_extrema(ObjectiveSpec& spec);

/// 1-d bump plus linear trend, theta = 0.1, norm 2. The global maximum is a
/// narrow bump near x = 0.2; x = 1 is a smooth local maximum.
ObjectiveSpec example_rkhs_preset();

/// JSON document with every ObjectiveSpec field; doubles round-trip exactly.
std::string objective_to_json(const ObjectiveSpec& spec);
/// Inverse of objective_to_json. Throws InvalidSpec on a malformed document.
ObjectiveSpec objective_from_json(std::string_view text);

/// Unit-cube objective view of a spec.
Objective to_objective(const ObjectiveSpec& spec, double observation_noise);

struct RegretCurves {
    std::vector<double> simple;
    std::vector<double> cumulative;
};

/**
 * Per BO iteration: simple regret f_max - max_{j <= t} f(x_j) (init points
 * count towards the running best) and cumulative regret over BO iterations
 * only. Uses noiseless values of `spec` at the traced inputs.
 */
RegretCurves regret_metrics(const RunTrace& trace, const ObjectiveSpec& spec);

/// Same bookkeeping from raw noiseless values.
RegretCurves regret_curves(const std::vector<double>& init_values,
                           const std::vector<double>& iteration_values, double f_max);

} // namespace abo

#endif // ABO_OBJECTIVES_HPP
