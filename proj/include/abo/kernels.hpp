#ifndef ABO_KERNELS_HPP
#define ABO_KERNELS_HPP

#include <vector>

#include <Eigen/Core>

namespace abo {

enum class KernelFamily { SquaredExponential, Matern };

/// First diagonal jitter tried when a covariance factorization fails.
inline constexpr double kGramJitter = 1e-10;

/**
 * Stationary kernel with unit prior variance and one lengthscale per input
 * dimension. Inputs are divided componentwise by the lengthscales before
 * the isotropic profile is applied, so k(x, x) = 1 always.
 *
 * Matern is supported for nu in {3/2, 5/2} via the closed forms.
 */
class KernelSpec {
public:
    /// Throws InvalidSpec on non-positive/non-finite lengthscales or an
    /// unsupported nu.
    KernelSpec(KernelFamily family, Eigen::VectorXd lengthscales, double nu = 0.0);

    static KernelSpec squared_exponential(Eigen::VectorXd lengthscales);
    static KernelSpec squared_exponential(int dim, double lengthscale);
    static KernelSpec matern(double nu, Eigen::VectorXd lengthscales);

    [[nodiscard]] KernelFamily family() const noexcept { return family_; }
    [[nodiscard]] double nu() const noexcept { return nu_; }
    [[nodiscard]] int dim() const noexcept { return static_cast<int>(lengthscales_.size()); }
    [[nodiscard]] const Eigen::VectorXd& lengthscales() const noexcept { return lengthscales_; }

    /// Same family, new lengthscales.
    [[nodiscard]] KernelSpec with_lengthscales(Eigen::VectorXd lengthscales) const;

    /// Exponent of g(t) in the information-capacity growth: d for SE,
    /// 2 nu + d for Matern.
    [[nodiscard]] double capacity_exponent() const noexcept;

    /// Kernel profile as a function of the scaled distance r = |(x - x')/theta|.
    [[nodiscard]] double profile(double scaled_distance) const noexcept;

    /// k_theta(x, x2). Throws ContractViolation on a dimension mismatch.
    [[nodiscard]] double evaluate(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& x2) const;

    bool operator==(const KernelSpec& other) const;

private:
    KernelFamily family_;
    double nu_;
    Eigen::VectorXd lengthscales_;
};

/// Points are stored one per row.
using PointMatrix = Eigen::MatrixXd;

/// Stack a list of points into rows of a matrix.
PointMatrix to_rows(const std::vector<Eigen::VectorXd>& points);

/// n x n matrix of pairwise kernel values (no jitter).
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const PointMatrix& points);

/// n x m cross-covariance between rows of `a` and rows of `b`.
Eigen::MatrixXd cross_covariance(const KernelSpec& spec, const PointMatrix& a, const PointMatrix& b);

/**
 * RKHS norm of f = sum_i w_i k(., c_i), i.e. sqrt(w^T K w).
 *
 * Quadratic forms in [-1e-10, 0) are clamped to zero; anything more negative
 * throws NumericalError.
 */
double rkhs_norm_of_expansion(const KernelSpec& spec, const PointMatrix& centers,
                              const Eigen::VectorXd& weights);

} // namespace abo

#endif // ABO_KERNELS_HPP
