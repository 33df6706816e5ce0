#ifndef ABO_CONFIDENCE_HPP
#define ABO_CONFIDENCE_HPP

#include <Eigen/Core>

#include "abo/gp.hpp"

namespace abo {

/// Empirical constant beta commonly used in practice (beta, not beta^1/2).
inline constexpr double kDefaultEmpiricalBeta = 3.0;

struct ConfidenceParams {
    double delta = 0.9;       ///< failure probability
    double noise_sigma = 0.1;
    double norm_bound = 2.0;  ///< B_t

    /// Throws InvalidSpec unless 0 < delta < 1, sigma >= 0 and norm_bound > 0.
    void validate() const;
};

/// B_t + 4 sigma sqrt(I + 1 + ln(1/delta)).
double beta_sqrt(const ConfidenceParams& params, double mutual_info);

struct Interval {
    double lower;
    double upper;
};

/// mu(x) -/+ beta^1/2 sigma(x), with beta from the model's realized mutual information.
Interval confidence_interval(const GaussianProcess& gp, const ConfidenceParams& params,
                             const Eigen::Ref<const Eigen::VectorXd>& x);

/// Same, for an explicitly supplied beta^1/2.
Interval confidence_interval(const GaussianProcess& gp, double beta_sqrt_value,
                             const Eigen::Ref<const Eigen::VectorXd>& x);

} // namespace abo

#endif // ABO_CONFIDENCE_HPP
