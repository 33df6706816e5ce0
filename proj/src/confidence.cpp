#include "abo/confidence.hpp"

#include <cmath>

#include "abo/errors.hpp"

namespace abo {

void ConfidenceParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidSpec("delta must lie in (0, 1)");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidSpec("noise_sigma must be non-negative and finite");
    }
    if (!(norm_bound > 0.0) || !std::isfinite(norm_bound)) {
        throw InvalidSpec("norm_bound must be positive and finite");
    }
}

double beta_sqrt(const ConfidenceParams& params, double mutual_info) {
    params.validate();
    if (!(mutual_info >= 0.0)) throw ContractViolation("mutual information must be non-negative");
    return params.norm_bound +
           4.0 * params.noise_sigma * std::sqrt(mutual_info + 1.0 + std::log(1.0 / params.delta));
}

Interval confidence_interval(const GaussianProcess& gp, double beta_sqrt_value,
                             const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Prediction p = gp.predict(x);
    const double half = beta_sqrt_value * std::sqrt(p.variance);
    return {p.mean - half, p.mean + half};
}

Interval confidence_interval(const GaussianProcess& gp, const ConfidenceParams& params,
                             const Eigen::Ref<const Eigen::VectorXd>& x) {
    return confidence_interval(gp, beta_sqrt(params, gp.mutual_information()), x);
}

} // namespace abo
