#ifndef ABO_GP_HPP
#define ABO_GP_HPP

#include <Eigen/Core>

#include "abo/kernels.hpp"

namespace abo {

struct Prediction {
    double mean = 0.0;
    double variance = 1.0;
};

struct BatchPrediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};

/**
 * Exact GP posterior on accumulated data (zero prior mean).
 *
 * Value type: every update returns a new model with a freshly rebuilt
 * Cholesky factor of (K + sigma^2 I [+ jitter]). The factorization is first
 * attempted without jitter; on failure 1e-10 is added to the diagonal and
 * escalated x10 up to 1e-6 before SingularModel is thrown.
 */
class GaussianProcess {
public:
    GaussianProcess(KernelSpec kernel, double noise_sigma);
    GaussianProcess(KernelSpec kernel, double noise_sigma, PointMatrix inputs,
                    Eigen::VectorXd observations);

    [[nodiscard]] GaussianProcess with_observation(const Eigen::VectorXd& x, double y) const;
    [[nodiscard]] GaussianProcess with_kernel(KernelSpec kernel) const;

    [[nodiscard]] Prediction predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    [[nodiscard]] BatchPrediction predict_batch(const PointMatrix& points) const;

    /// 0.5 * ln det(I + sigma^-2 K_t); zero for an empty model.
    [[nodiscard]] double mutual_information() const;

    [[nodiscard]] Eigen::Index size() const noexcept { return observations_.size(); }
    [[nodiscard]] int dim() const noexcept { return kernel_.dim(); }
    [[nodiscard]] const KernelSpec& kernel() const noexcept { return kernel_; }
    [[nodiscard]] double noise_sigma() const noexcept { return noise_sigma_; }
    [[nodiscard]] const PointMatrix& inputs() const noexcept { return inputs_; }
    [[nodiscard]] const Eigen::VectorXd& observations() const noexcept { return observations_; }

    /// Lower Cholesky factor of K + (sigma^2 + jitter) I.
    [[nodiscard]] const Eigen::MatrixXd& cholesky() const noexcept { return chol_; }
    /// (K + sigma^2 I)^-1 y.
    [[nodiscard]] const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
    [[nodiscard]] double jitter() const noexcept { return jitter_; }
    /// ln det(K + (sigma^2 + jitter) I) from the cached factor.
    [[nodiscard]] double log_det() const noexcept;

private:
    void refactor();

    KernelSpec kernel_;
    double noise_sigma_;
    PointMatrix inputs_;
    Eigen::VectorXd observations_;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd alpha_;
    double jitter_ = 0.0;
};

/**
 * Lower Cholesky factor of `a + jitter I` with the escalation ladder used by
 * the GP (0, then 1e-10 .. 1e-6). Returns the jitter that succeeded via
 * `jitter_used`; throws SingularModel if every rung fails.
 */
Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& a, double* jitter_used = nullptr);

} // namespace abo

#endif // ABO_GP_HPP
