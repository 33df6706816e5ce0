#ifndef ABO_ADAPTATION_HPP
#define ABO_ADAPTATION_HPP

#include <functional>
#include <span>

#include <Eigen/Core>

#include "abo/gp.hpp"

namespace abo {

enum class RegretEstimator { RegretBound, OneStep };

/**
 * Hyperparameter-expansion schedule for one optimization run.
 *
 * The master scale h >= 1 splits as h = (1 + eps_g)(1 + eps_b) with
 * eps_b = lambda * eps_g, g^d = 1 + eps_g and b = 1 + eps_b. Lengthscales
 * are theta_0 / g and the norm bound is b g^d B_0.
 */
struct ScalingState {
    double lambda = 0.1;
    double h_prev = 1.0;
    double reference_exponent = 0.9;
    int dim = 1;
    Eigen::VectorXd theta0 = Eigen::VectorXd::Ones(1);
    double b0 = 2.0;
    RegretEstimator estimator = RegretEstimator::RegretBound;
    /// d for SE, 2 nu + d for Matern.
    double gamma_exponent = 1.0;
    double noise_sigma = 0.1;
    /// h_cap(t) = 1 + cap_coefficient * t^cap_exponent.
    double cap_coefficient = 1.0;
    double cap_exponent = 0.45;

    /// Throws InvalidSpec on inconsistent fields.
    void validate() const;
};

struct ScaleSplit {
    double g = 1.0;
    double b = 1.0;
    double eps_g = 0.0;
    double eps_b = 0.0;
};

/// Unique split of h into (g, b) for tradeoff lambda. Throws ContractViolation if h < 1.
ScaleSplit decompose(double h, double lambda, int dim);

struct ScaledHyperparameters {
    Eigen::VectorXd theta;
    double norm_bound = 0.0;
    ScaleSplit split;
};

/// theta_0 / g and b g^d B_0.
ScaledHyperparameters scaled_hyperparameters(const ScalingState& s, double h);

/// p(t) = t^alpha.
double reference_regret(const ScalingState& s, int t);

/// Hard sublinear envelope on h.
double h_cap(const ScalingState& s, int t);

/// C_1 = 8 / ln(1 + sigma^-2).
double regret_constant(double noise_sigma);

/// beta^1/2 as a function of (norm bound, mutual information).
using BetaSqrtFn = std::function<double(double norm_bound, double mutual_info)>;

/**
 * Regret-bound estimate sqrt(C_1 t beta(b, g) s I) where the information
 * measured under the previous lengthscales is rescaled by
 * s = (g(h) / g(h_prev))^gamma_exponent, both in the product and inside beta.
 */
double regret_bound_estimate(const ScalingState& s, double h, int t, double mi_prev_theta,
                             const BetaSqrtFn& beta_sqrt_fn);

struct StepTerm {
    double beta_sqrt = 0.0;
    double sigma_at_next = 0.0;
};

/// 2 sum_j beta_j^1/2 sigma_j(x_{j+1}) over the frozen history plus the candidate term.
double one_step_estimate(std::span<const StepTerm> history, StepTerm candidate);

enum class HSolveStatus { AboveReference, Matched, Capped, BracketFailure };

struct HSolution {
    double h = 1.0;
    HSolveStatus status = HSolveStatus::AboveReference;
    int evaluations = 0;
};

/**
 * Solve estimator(h) = p(t) for h in [h_prev, h_cap(t)].
 *
 * Returns h_prev when the estimate already reaches p(t), h_cap(t) when even
 * the cap stays below it, and otherwise the bisection root (relative
 * tolerance 1e-6) after geometric doubling from h_prev. A decrease of the
 * estimate while doubling, or a non-finite value, is reported as
 * BracketFailure with h = h_prev.
 */
HSolution solve_h(const ScalingState& s, int t, const std::function<double(double)>& estimator);

struct WangScale {
    double factor = 1.0;
    bool capped = false;
};

/**
 * Smallest lengthscale-shrink factor c on the grid 1.05^k (k >= 0, c <= 1e3)
 * such that the posterior standard deviation at the UCB maximizer of the
 * shrunk model is at least kappa. `x_next` receives the shrunk model and
 * returns the point UCB would select.
 */
WangScale wang_baseline_scale(const GaussianProcess& gp, double kappa,
                              const std::function<Eigen::VectorXd(const GaussianProcess&)>& x_next,
                              double ratio = 1.05, double cap = 1e3);

} // namespace abo

#endif // ABO_ADAPTATION_HPP
