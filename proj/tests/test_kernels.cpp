#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "abo/errors.hpp"
#include "abo/kernels.hpp"
#include "test_support.hpp"

using namespace abo;
using Eigen::VectorXd;

namespace {

VectorXd v1(double a) { return VectorXd::Constant(1, a); }

} // namespace

TEST_CASE("SE kernel values") {
    const auto k = KernelSpec::squared_exponential(1, 1.0);
    CHECK(k.evaluate(v1(0), v1(0)) == 1.0);
    CHECK(k.evaluate(v1(0), v1(1)) == doctest::Approx(0.606531).epsilon(1e-6));
    CHECK(k.evaluate(v1(0), v1(1)) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    const auto k_half = KernelSpec::squared_exponential(1, 0.5);
    CHECK(k_half.evaluate(v1(0), v1(1)) == doctest::Approx(0.135335).epsilon(1e-5));
}

TEST_CASE("Matern kernels") {
    const auto m32 = KernelSpec::matern(1.5, v1(1.0));
    const auto m52 = KernelSpec::matern(2.5, v1(1.0));
    CHECK(m32.evaluate(v1(0), v1(0)) == 1.0);
    CHECK(m52.evaluate(v1(0), v1(0)) == 1.0);
    const double s3 = std::sqrt(3.0);
    const double s5 = std::sqrt(5.0);
    CHECK(m32.evaluate(v1(0), v1(1)) == doctest::Approx((1 + s3) * std::exp(-s3)));
    CHECK(m52.evaluate(v1(0), v1(1)) == doctest::Approx((1 + s5 + 5.0 / 3.0) * std::exp(-s5)));
    CHECK(m32.capacity_exponent() == 4.0);
    CHECK(m52.capacity_exponent() == 6.0);
    CHECK(KernelSpec::squared_exponential(3, 1.0).capacity_exponent() == 3.0);
}

TEST_CASE("invalid kernel specifications") {
    CHECK_THROWS_AS(KernelSpec::squared_exponential(v1(0.0)), InvalidSpec);
    CHECK_THROWS_AS(KernelSpec::squared_exponential(v1(-1.0)), InvalidSpec);
    CHECK_THROWS_AS(KernelSpec::squared_exponential(v1(std::nan(""))), InvalidSpec);
    CHECK_THROWS_AS(KernelSpec::squared_exponential(VectorXd(0)), InvalidSpec);
    CHECK_THROWS_AS(KernelSpec::matern(1.0, v1(1.0)), InvalidSpec);
    CHECK_THROWS_AS(KernelSpec::matern(0.5, v1(1.0)), InvalidSpec);
    CHECK_THROWS_AS(KernelSpec::matern(3.5, v1(1.0)), InvalidSpec);
}

TEST_CASE("dimension mismatch is a contract violation") {
    const auto k = KernelSpec::squared_exponential(2, 1.0);
    CHECK_THROWS_AS((void)k.evaluate(v1(0), VectorXd::Zero(2)), ContractViolation);
    CHECK_THROWS_AS(gram_matrix(k, Eigen::MatrixXd::Zero(3, 1)), ContractViolation);
}

TEST_CASE("gram matrix examples") {
    const auto k = KernelSpec::squared_exponential(1, 1.0);
    CHECK(gram_matrix(k, Eigen::MatrixXd(0, 1)).size() == 0);
    const Eigen::MatrixXd one = gram_matrix(k, Eigen::MatrixXd::Constant(1, 1, 0.3));
    CHECK(one.rows() == 1);
    CHECK(one(0, 0) == 1.0);
    Eigen::MatrixXd x(2, 1);
    x << 0, 1;
    const Eigen::MatrixXd g = gram_matrix(k, x);
    CHECK(g(0, 0) == 1.0);
    CHECK(g(1, 1) == 1.0);
    CHECK(g(0, 1) == doctest::Approx(0.606531).epsilon(1e-6));
    CHECK(g(1, 0) == g(0, 1));
}

TEST_CASE("gram and cross covariance agree with the reference kernel") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + trial % 3;
        VectorXd theta = (test::random_points(rng, d, 1).array() + 0.1).matrix();
        const KernelSpec specs[] = {KernelSpec::squared_exponential(theta), KernelSpec::matern(1.5, theta),
                                    KernelSpec::matern(2.5, theta)};
        const auto a = test::random_points(rng, 7, d);
        const auto b = test::random_points(rng, 4, d);
        for (const auto& spec : specs) {
            CHECK((gram_matrix(spec, a) - test::reference_gram(spec, a, a)).cwiseAbs().maxCoeff() < 1e-14);
            const Eigen::MatrixXd cross = cross_covariance(spec, a, b);
            CHECK(cross.rows() == 7);
            CHECK(cross.cols() == 4);
            CHECK((cross - test::reference_gram(spec, a, b)).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("symmetry, unit diagonal and PSD on random point sets") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + trial % 4;
        const int n = 1 + static_cast<int>(rng() % 20);
        const auto x = test::random_points(rng, n, d);
        const KernelSpec spec = trial % 2 ? KernelSpec::squared_exponential(d, 0.3) : KernelSpec::matern(2.5, VectorXd::Constant(d, 0.3));
        Eigen::MatrixXd g = gram_matrix(spec, x);
        CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((g.diagonal().array() == 1.0).all());
        g.diagonal().array() += 1e-10;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
        CHECK(eig.eigenvalues().minCoeff() >= 0.0);
    }
}

TEST_CASE("kernel is nondecreasing in every lengthscale") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 3;
        const auto pts = test::random_points(rng, 2, d);
        VectorXd theta = VectorXd::Constant(d, 0.2);
        for (auto family : {0, 1}) {
            double previous = -1.0;
            for (double scale = 0.5; scale < 8.0; scale *= 1.3) {
                theta(0) = 0.2 * scale;
                const KernelSpec spec = family ? KernelSpec::matern(1.5, theta) : KernelSpec::squared_exponential(theta);
                const double k = spec.evaluate(pts.row(0).transpose(), pts.row(1).transpose());
                CHECK(k >= previous);
                previous = k;
            }
        }
    }
}

TEST_CASE("RKHS norm of expansions") {
    const auto k = KernelSpec::squared_exponential(1, 1.0);
    Eigen::MatrixXd c1 = Eigen::MatrixXd::Constant(1, 1, 0.4);
    CHECK(rkhs_norm_of_expansion(k, c1, v1(1.0)) == doctest::Approx(1.0));
    CHECK(rkhs_norm_of_expansion(k, c1, v1(3.5)) == doctest::Approx(3.5));
    CHECK(rkhs_norm_of_expansion(k, c1, v1(-3.5)) == doctest::Approx(3.5));
    Eigen::MatrixXd c2(2, 1);
    c2 << 0, 1;
    VectorXd w(2);
    w << 1, 1;
    CHECK(rkhs_norm_of_expansion(k, c2, w) == doctest::Approx(1.792501).epsilon(1e-6));
    CHECK(rkhs_norm_of_expansion(k, c2, w) == doctest::Approx(std::sqrt(2.0 + 2.0 * std::exp(-0.5))));

    // Duplicate centers with opposite weights cancel exactly to zero.
    Eigen::MatrixXd dup = Eigen::MatrixXd::Constant(2, 1, 0.5);
    w << 1, -1;
    CHECK(rkhs_norm_of_expansion(k, dup, w) == 0.0);
    CHECK_THROWS_AS(rkhs_norm_of_expansion(k, Eigen::MatrixXd(0, 1), VectorXd(0)), ContractViolation);
    CHECK_THROWS_AS(rkhs_norm_of_expansion(k, c2, v1(1.0)), ContractViolation);
}

TEST_CASE("with_lengthscales keeps the family") {
    const auto m = KernelSpec::matern(1.5, v1(1.0));
    const auto m2 = m.with_lengthscales(v1(0.5));
    CHECK(m2.family() == KernelFamily::Matern);
    CHECK(m2.nu() == 1.5);
    CHECK(m2.lengthscales()(0) == 0.5);
    CHECK(!(m2 == m));
    CHECK(m.with_lengthscales(v1(1.0)) == m);
}
