#include "abo/hyperparam.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "abo/errors.hpp"
#include "abo/rng.hpp"

namespace abo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_objective(const GaussianProcess& gp, const LengthscalePrior& prior,
                      const Eigen::VectorXd& theta) {
    try {
        return map_objective(gp, prior, theta);
    } catch (const SingularModel&) {
        return kNegInf;
    }
}

// Maximize f on [lo, hi] by golden-section search; returns the argmax found.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

} // namespace

void LengthscalePrior::validate() const {
    if (!(shape > 0.0) || !(rate > 0.0)) throw InvalidSpec("gamma prior needs shape > 0 and rate > 0");
}

double LengthscalePrior::log_density(const Eigen::VectorXd& theta) const {
    return ((shape - 1.0) * theta.array().log() - rate * theta.array()).sum();
}

double log_marginal_likelihood(const GaussianProcess& gp) {
    if (gp.size() < 1) throw ContractViolation("log_marginal_likelihood needs at least one observation");
    const double t = static_cast<double>(gp.size());
    return -0.5 * gp.observations().dot(gp.alpha()) - 0.5 * gp.log_det() -
           0.5 * t * std::log(2.0 * std::numbers::pi);
}

double map_objective(const GaussianProcess& gp, const LengthscalePrior& prior,
                     const Eigen::VectorXd& theta) {
    const GaussianProcess refit = gp.with_kernel(gp.kernel().with_lengthscales(theta));
    return log_marginal_likelihood(refit) + prior.log_density(theta);
}

MapResult map_estimate(const GaussianProcess& gp, const LengthscalePrior& prior,
                       const Eigen::VectorXd& init, const MapOptions& options) {
    prior.validate();
    if (gp.size() < 1) throw ContractViolation("map_estimate needs at least one observation");
    if (init.size() != gp.dim()) throw ContractViolation("map_estimate: init has the wrong dimension");
    if (!(options.lower > 0.0 && options.upper > options.lower)) {
        throw InvalidSpec("map_estimate: invalid lengthscale box");
    }
    const Eigen::Index d = init.size();
    const double log_lo = std::log(options.lower);
    const double log_hi = std::log(options.upper);
    const double local_half_width = std::log(10.0);

    CounterRng rng(options.seed, 0, "map-start");

    MapResult best;
    best.theta_map = init;
    best.log_posterior = kNegInf;

    for (int start = 0; start < std::max(options.starts, 1); ++start) {
        Eigen::VectorXd u(d);
        if (start == 0) {
            u = init.array().max(options.lower).min(options.upper).log().matrix();
        } else {
            for (Eigen::Index i = 0; i < d; ++i) u(i) = rng.uniform(log_lo, log_hi);
        }
        double current = safe_objective(gp, prior, u.array().exp().matrix());
        for (int sweep = 0; sweep < options.sweeps; ++sweep) {
            for (Eigen::Index i = 0; i < d; ++i) {
                const double lo = sweep == 0 ? log_lo : std::max(log_lo, u(i) - local_half_width);
                const double hi = sweep == 0 ? log_hi : std::min(log_hi, u(i) + local_half_width);
                Eigen::VectorXd probe = u;
                auto along = [&](double v) {
                    probe(i) = v;
                    return safe_objective(gp, prior, probe.array().exp().matrix());
                };
                const auto [arg, value] = golden_max(along, lo, hi, options.tolerance);
                if (value > current) {
                    u(i) = arg;
                    current = value;
                }
            }
        }
        if (current > best.log_posterior) {
            best.log_posterior = current;
            best.theta_map = u.array().exp().matrix();
        }
    }

    if (best.log_posterior == kNegInf) {
        best.theta_map = init;
        best.failed = true;
    }
    return best;
}

Eigen::VectorXd combine_max(const Eigen::VectorXd& theta_map, const Eigen::VectorXd& theta0, double g) {
    if (theta_map.size() != theta0.size()) throw ContractViolation("combine_max: dimension mismatch");
    if (!(g >= 1.0)) throw ContractViolation("combine_max: g must be >= 1");
    return theta_map.cwiseMin(theta0 / g);
}

Eigen::VectorXd combine_scale(const Eigen::VectorXd& theta_map, double g) {
    return theta_map / std::max(g, 1.0);
}

Eigen::VectorXd truncate_to_bounded_change(const Eigen::VectorXd& theta,
                                           const Eigen::VectorXd& theta0, double factor) {
    if (theta.size() != theta0.size()) throw ContractViolation("truncate: dimension mismatch");
    return theta.cwiseMax(theta0 / factor).cwiseMin(theta0 * factor);
}

} // namespace abo
