#ifndef ABO_TEST_SUPPORT_HPP
#define ABO_TEST_SUPPORT_HPP

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "abo/kernels.hpp"

namespace abo::test {

// Kernel written out from the textbook formulas, independent of KernelSpec::profile.
inline double reference_kernel(const KernelSpec& spec, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double z = (a(i) - b(i)) / spec.lengthscales()(i);
        r2 += z * z;
    }
    const double r = std::sqrt(r2);
    if (spec.family() == KernelFamily::SquaredExponential) return std::exp(-0.5 * r2);
    if (spec.nu() == 1.5) return (1.0 + std::sqrt(3.0) * r) * std::exp(-std::sqrt(3.0) * r);
    return (1.0 + std::sqrt(5.0) * r + 5.0 * r2 / 3.0) * std::exp(-std::sqrt(5.0) * r);
}

inline Eigen::MatrixXd reference_gram(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) {
            k(i, j) = reference_kernel(spec, a.row(i).transpose(), b.row(j).transpose());
        }
    }
    return k;
}

inline Eigen::MatrixXd random_points(std::mt19937_64& rng, int n, int d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(i, j) = u(rng);
    }
    return x;
}

} // namespace abo::test

#endif
