#ifndef ABO_HYPERPARAM_HPP
#define ABO_HYPERPARAM_HPP

#include <cstdint>

#include <Eigen/Core>

#include "abo/gp.hpp"

namespace abo {

/// Independent Gamma(shape, rate) prior on every lengthscale.
struct LengthscalePrior {
    double shape = 2.0;
    double rate = 10.0;

    void validate() const;
    /// sum_i (shape - 1) ln theta_i - rate theta_i (unnormalized).
    [[nodiscard]] double log_density(const Eigen::VectorXd& theta) const;
    [[nodiscard]] double mode() const { return shape > 1.0 ? (shape - 1.0) / rate : 0.0; }
};

struct MapOptions {
    double lower = 1e-3;
    double upper = 1e2;
    int starts = 5;
    int sweeps = 3;
    /// Golden-section stopping width in log-lengthscale.
    double tolerance = 1e-5;
    std::uint64_t seed = 0;
};

struct MapResult {
    Eigen::VectorXd theta_map;
    double log_posterior = 0.0;
    /// Every start failed to factorize; theta_map is the init.
    bool failed = false;
};

/// -1/2 y^T (K + s^2 I)^-1 y - 1/2 ln det(K + s^2 I) - t/2 ln 2 pi. Requires t >= 1.
double log_marginal_likelihood(const GaussianProcess& gp);

/// Log marginal likelihood under lengthscales `theta` plus the prior term.
double map_objective(const GaussianProcess& gp, const LengthscalePrior& prior,
                     const Eigen::VectorXd& theta);

/**
 * Maximize map_objective over the box with multi-start coordinate search in
 * log-lengthscale space (golden section per coordinate). The first start is
 * `init` (clamped into the box); the remaining starts are log-uniform draws
 * from the stream (seed, 0, "map-start"). A coordinate move is accepted only
 * if it improves the objective.
 */
MapResult map_estimate(const GaussianProcess& gp, const LengthscalePrior& prior,
                       const Eigen::VectorXd& init, const MapOptions& options = {});

/// min(theta_map, theta0 / g), elementwise.
Eigen::VectorXd combine_max(const Eigen::VectorXd& theta_map, const Eigen::VectorXd& theta0, double g);

/// theta_map / max(g, 1).
Eigen::VectorXd combine_scale(const Eigen::VectorXd& theta_map, double g);

/// Clip each component of theta to [theta0 / factor, theta0 * factor].
Eigen::VectorXd truncate_to_bounded_change(const Eigen::VectorXd& theta,
                                           const Eigen::VectorXd& theta0, double factor = 10.0);

} // namespace abo

#endif // ABO_HYPERPARAM_HPP
