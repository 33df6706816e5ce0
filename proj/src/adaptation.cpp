#include "abo/adaptation.hpp"

#include <cmath>
#include <sstream>

#include "abo/errors.hpp"

namespace abo {

void ScalingState::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidSpec("lambda must be >= 0");
    if (!(h_prev >= 1.0)) throw InvalidSpec("h_prev must be >= 1");
    if (!(reference_exponent > 0.0 && reference_exponent < 1.0)) {
        throw InvalidSpec("reference_exponent must lie in (0, 1)");
    }
    if (dim < 1 || theta0.size() != dim) throw InvalidSpec("theta0 must have dim entries");
    if (!(theta0.array() > 0.0).all()) throw InvalidSpec("theta0 must be positive");
    if (!(b0 > 0.0)) throw InvalidSpec("b0 must be positive");
    if (!(noise_sigma > 0.0)) throw InvalidSpec("noise_sigma must be positive");
    if (!(cap_coefficient >= 0.0) || !(cap_exponent >= 0.0 && cap_exponent < 1.0)) {
        throw InvalidSpec("h cap must be a sublinear envelope");
    }
}

ScaleSplit decompose(double h, double lambda, int dim) {
    if (!(h >= 1.0)) {
        std::ostringstream msg;
        msg << "decompose: h must be >= 1, got " << h;
        throw ContractViolation(msg.str());
    }
    if (!(lambda >= 0.0)) throw ContractViolation("decompose: lambda must be >= 0");
    if (dim < 1) throw ContractViolation("decompose: dim must be >= 1");
    // Positive root of lambda e^2 + (1 + lambda) e + (1 - h) = 0, written
    // without cancellation so lambda = 0 falls out as e = h - 1.
    const double a = 1.0 + lambda;
    const double eps_g = 2.0 * (h - 1.0) / (a + std::sqrt(a * a + 4.0 * lambda * (h - 1.0)));
    ScaleSplit out;
    out.eps_g = eps_g;
    out.eps_b = lambda * eps_g;
    out.g = std::pow(1.0 + eps_g, 1.0 / dim);
    out.b = 1.0 + out.eps_b;
    return out;
}

ScaledHyperparameters scaled_hyperparameters(const ScalingState& s, double h) {
    ScaledHyperparameters out;
    out.split = decompose(h, s.lambda, s.dim);
    out.theta = s.theta0 / out.split.g;
    out.norm_bound = out.split.b * (1.0 + out.split.eps_g) * s.b0;
    return out;
}

double reference_regret(const ScalingState& s, int t) {
    if (t < 1) throw ContractViolation("reference_regret: t must be >= 1");
    return std::pow(static_cast<double>(t), s.reference_exponent);
}

double h_cap(const ScalingState& s, int t) {
    return 1.0 + s.cap_coefficient * std::pow(static_cast<double>(std::max(t, 0)), s.cap_exponent);
}

double regret_constant(double noise_sigma) {
    return 8.0 / std::log(1.0 + 1.0 / (noise_sigma * noise_sigma));
}

double regret_bound_estimate(const ScalingState& s, double h, int t, double mi_prev_theta,
                             const BetaSqrtFn& beta_sqrt_fn) {
    const ScaleSplit prev = decompose(s.h_prev, s.lambda, s.dim);
    const ScaleSplit cur = decompose(h, s.lambda, s.dim);
    const double info = std::pow(cur.g / prev.g, s.gamma_exponent) * std::max(mi_prev_theta, 0.0);
    const double norm_bound = cur.b * (1.0 + cur.eps_g) * s.b0;
    const double bs = beta_sqrt_fn(norm_bound, info);
    return std::sqrt(regret_constant(s.noise_sigma) * t * bs * bs * info);
}

double one_step_estimate(std::span<const StepTerm> history, StepTerm candidate) {
    double sum = 0.0;
    for (const StepTerm& term : history) sum += term.beta_sqrt * term.sigma_at_next;
    return 2.0 * sum + 2.0 * candidate.beta_sqrt * candidate.sigma_at_next;
}

HSolution solve_h(const ScalingState& s, int t, const std::function<double(double)>& estimator) {
    const double target = reference_regret(s, t);
    const double cap = std::max(h_cap(s, t), s.h_prev);
    HSolution out;
    out.h = s.h_prev;

    auto eval = [&](double h) {
        ++out.evaluations;
        return estimator(h);
    };

    double lo = s.h_prev;
    double f_lo = eval(lo);
    if (!std::isfinite(f_lo)) {
        out.status = HSolveStatus::BracketFailure;
        return out;
    }
    if (f_lo >= target) {
        out.status = HSolveStatus::AboveReference;
        return out;
    }
    if (cap <= lo) {
        out.status = HSolveStatus::Capped;
        return out;
    }

    // Geometric doubling until the estimate crosses p(t) or the cap is hit.
    double hi = lo;
    double f_hi = f_lo;
    while (true) {
        const double next = std::min(2.0 * hi, cap);
        const double f_next = eval(next);
        if (!std::isfinite(f_next) || f_next < f_hi) {
            out.status = HSolveStatus::BracketFailure;
            out.h = s.h_prev;
            return out;
        }
        if (f_next >= target) {
            lo = hi;
            hi = next;
            f_hi = f_next;
            break;
        }
        if (next >= cap) {
            out.status = HSolveStatus::Capped;
            out.h = cap;
            return out;
        }
        hi = next;
        f_hi = f_next;
    }

    while ((hi - lo) > 1e-6 * lo) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = eval(mid);
        if (!std::isfinite(f_mid)) {
            out.status = HSolveStatus::BracketFailure;
            out.h = s.h_prev;
            return out;
        }
        if (f_mid >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.status = HSolveStatus::Matched;
    out.h = std::max(0.5 * (lo + hi), s.h_prev);
    return out;
}

WangScale wang_baseline_scale(const GaussianProcess& gp, double kappa,
                              const std::function<Eigen::VectorXd(const GaussianProcess&)>& x_next,
                              double ratio, double cap) {
    if (!(kappa > 0.0)) throw ContractViolation("wang_baseline_scale: kappa must be positive");
    if (!(ratio > 1.0) || !(cap >= 1.0)) throw ContractViolation("wang_baseline_scale: bad grid");
    const Eigen::VectorXd theta = gp.kernel().lengthscales();
    for (int k = 0;; ++k) {
        const double c = std::pow(ratio, k);
        if (c > cap) break;
        const GaussianProcess shrunk = k == 0 ? gp : gp.with_kernel(gp.kernel().with_lengthscales(theta / c));
        const Eigen::VectorXd x = x_next(shrunk);
        if (std::sqrt(shrunk.predict(x).variance) >= kappa) return {c, false};
    }
    return {cap, true};
}

} // namespace abo
