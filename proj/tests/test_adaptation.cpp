#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "abo/adaptation.hpp"
#include "abo/confidence.hpp"
#include "abo/errors.hpp"

using namespace abo;
using Eigen::VectorXd;

namespace {

ScalingState state(int dim = 1, double lambda = 0.1) {
    ScalingState s;
    s.dim = dim;
    s.lambda = lambda;
    s.theta0 = VectorXd::Ones(dim);
    s.gamma_exponent = dim;
    return s;
}

BetaSqrtFn theoretical_beta(double sigma = 0.1, double delta = 0.9) {
    return [=](double b, double mi) {
        ConfidenceParams p;
        p.norm_bound = b;
        p.noise_sigma = sigma;
        p.delta = delta;
        return beta_sqrt(p, mi);
    };
}

} // namespace

TEST_CASE("decomposition examples") {
    for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
        const ScaleSplit s = decompose(1.0, lambda, 2);
        CHECK(s.g == 1.0);
        CHECK(s.b == 1.0);
    }
    const ScaleSplit s = decompose(2.0, 0.1, 1);
    CHECK(s.eps_g == doctest::Approx((-1.1 + std::sqrt(1.61)) / 0.2).epsilon(1e-14));
    CHECK(s.g == doctest::Approx(1.844289).epsilon(1e-6));
    CHECK(s.b == doctest::Approx(1.084429).epsilon(1e-6));
    CHECK(s.g * s.b == doctest::Approx(2.0).epsilon(1e-14));

    const ScaleSplit z = decompose(2.0, 0.0, 2);
    CHECK(z.g == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(z.b == 1.0);
    CHECK_THROWS_AS(decompose(0.5, 0.1, 1), ContractViolation);
}

TEST_CASE("decomposition identity and monotonicity over a wide range") {
    for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
        for (int d : {1, 2, 4}) {
            double prev_g = 1.0;
            double prev_b = 1.0;
            for (double h = 1.0; h <= 1e6; h *= 1.07) {
                const ScaleSplit s = decompose(h, lambda, d);
                // Residual of the defining quadratic.
                const double e = s.eps_g;
                CHECK(std::abs(lambda * e * e + (1 + lambda) * e + (1 - h)) <= 1e-9 * h);
                CHECK(std::abs((1 + s.eps_g) * (1 + s.eps_b) - h) <= 1e-9 * h);
                CHECK(std::abs(std::pow(s.g, d) - (1 + s.eps_g)) <= 1e-9 * h);
                CHECK(s.g >= prev_g);
                CHECK(s.b >= prev_b);
                CHECK(s.g >= 1.0);
                CHECK(s.b >= 1.0);
                prev_g = s.g;
                prev_b = s.b;
            }
        }
    }
}

TEST_CASE("scaled hyperparameters") {
    ScalingState s = state(2, 0.1);
    s.b0 = 2.0;
    const auto id = scaled_hyperparameters(s, 1.0);
    CHECK(id.theta == s.theta0);
    CHECK(id.norm_bound == 2.0);

    // g = 2 and b = 1.5 in d = 2 means 1 + eps_g = 4, eps_b = 0.5, so lambda = 1/6 and h = 6.
    ScalingState s2 = state(2, 0.5 / 3.0);
    s2.b0 = 2.0;
    const auto sc = scaled_hyperparameters(s2, 6.0);
    CHECK(sc.split.g == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sc.split.b == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sc.theta(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sc.theta(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sc.norm_bound == doctest::Approx(12.0).epsilon(1e-12));

    for (double h = 1.0; h < 1e4; h *= 1.5) {
        const auto r = scaled_hyperparameters(s, h);
        CHECK(r.norm_bound / s.b0 >= std::pow(r.split.g, 2) * (1 - 1e-12));
    }
}

TEST_CASE("reference regret and cap") {
    ScalingState s = state();
    CHECK(reference_regret(s, 1) == 1.0);
    CHECK(reference_regret(s, 100) == doctest::Approx(63.095734).epsilon(1e-8));
    double prev = 1.0;
    for (int t = 2; t < 1000; ++t) {
        const double ratio = reference_regret(s, t) / t;
        CHECK(ratio < prev);
        prev = ratio;
    }
    CHECK(h_cap(s, 0) == 1.0);
    CHECK(h_cap(s, 100) == doctest::Approx(1.0 + std::pow(100.0, 0.45)));
    CHECK(h_cap(s, 1000000) / 1e6 < 1e-3);
}

TEST_CASE("regret-bound estimator") {
    CHECK(regret_constant(0.1) == doctest::Approx(8.0 / std::log(101.0)).epsilon(1e-15));
    CHECK(regret_constant(0.1) == doctest::Approx(1.733433).epsilon(1e-6));

    ScalingState s = state();
    const auto beta = theoretical_beta();
    CHECK(regret_bound_estimate(s, 1.0, 1, 0.0, beta) == 0.0);

    // With lambda = 0, doubling h doubles g in d = 1, so the MI factor doubles.
    ScalingState z = state(1, 0.0);
    const double mi = 3.0;
    const double e1 = regret_bound_estimate(z, 1.0, 10, mi, beta);
    const double e2 = regret_bound_estimate(z, 2.0, 10, mi, beta);
    const double beta1 = beta(2.0, mi);
    const double beta2 = beta(4.0, 2.0 * mi);
    CHECK(e2 / e1 == doctest::Approx(std::sqrt(2.0 * beta2 * beta2 / (beta1 * beta1))).epsilon(1e-12));
    CHECK(e1 == doctest::Approx(std::sqrt(regret_constant(0.1) * 10 * beta1 * beta1 * mi)).epsilon(1e-14));

    // Relative to the previous scale: g_prev = 2 means h = 2 gives factor 1.
    z.h_prev = 2.0;
    const double beta_same = beta(4.0, mi);
    CHECK(regret_bound_estimate(z, 2.0, 10, mi, beta) ==
          doctest::Approx(std::sqrt(regret_constant(0.1) * 10 * beta_same * beta_same * mi)).epsilon(1e-14));

    // Strictly increasing in h for every lambda and dimension.
    for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
        for (int d : {1, 2, 4}) {
            ScalingState q = state(d, lambda);
            double prev = 0.0;
            for (double h = 1.0; h < 1e3; h *= 1.3) {
                const double e = regret_bound_estimate(q, h, 20, 2.5, beta);
                CHECK(e > prev);
                prev = e;
            }
        }
    }
}

TEST_CASE("one-step estimator") {
    std::vector<StepTerm> none;
    CHECK(one_step_estimate(none, {2.42, 1.0}) == doctest::Approx(4.84));
    std::vector<StepTerm> three{{0.5, 0.5}, {1.0, 0.25}, {0.25, 1.0}};
    CHECK(one_step_estimate(three, {0.2, 0.5}) == doctest::Approx(1.7));
    CHECK(one_step_estimate(three, {5.0, 0.0}) == doctest::Approx(1.5));
}

TEST_CASE("solve_h examples") {
    ScalingState s = state();
    s.cap_coefficient = 100.0;
    // With p(t) = sqrt(t), t = 25 and t = 81 give reference values 5 and 9.
    s.reference_exponent = 0.5;

    HSolution above = solve_h(s, 4, [](double) { return 100.0; });
    CHECK(above.h == 1.0);
    CHECK(above.status == HSolveStatus::AboveReference);

    HSolution ident = solve_h(s, 25, [](double h) { return h; });
    CHECK(ident.status == HSolveStatus::Matched);
    CHECK(ident.h == doctest::Approx(5.0).epsilon(1e-6));

    HSolution sq = solve_h(s, 81, [](double h) { return h * h; });
    CHECK(sq.status == HSolveStatus::Matched);
    CHECK(sq.h == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("solve_h respects h_prev, the cap and non-monotone estimators") {
    ScalingState s = state();
    s.reference_exponent = 0.5;
    s.cap_coefficient = 1.0;
    s.cap_exponent = 0.45;
    // Root at 10 but the cap at t = 100 is 1 + 100^0.45 ~ 8.94.
    const HSolution capped = solve_h(s, 100, [](double h) { return h; });
    CHECK(capped.status == HSolveStatus::Capped);
    CHECK(capped.h == doctest::Approx(h_cap(s, 100)));

    s.cap_coefficient = 100.0;
    s.h_prev = 4.0;
    const HSolution kept = solve_h(s, 9, [](double h) { return h; });
    CHECK(kept.h == 4.0);

    const HSolution bad = solve_h(s, 100, [](double h) { return 5.0 - h; });
    CHECK(bad.status == HSolveStatus::BracketFailure);
    CHECK(bad.h == 4.0);
    const HSolution nan = solve_h(s, 100, [](double h) { return h > 5.0 ? std::nan("") : h; });
    CHECK(nan.status == HSolveStatus::BracketFailure);
    CHECK(nan.h == 4.0);
}

TEST_CASE("solve_h agrees with analytic roots of polynomial estimators") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        ScalingState s = state();
        s.cap_coefficient = 1e6;
        s.h_prev = 1.0 + 3.0 * u(rng);
        const double a = 0.5 + 2.0 * u(rng);
        const int k = 1 + trial % 4;
        const int t = 50 + static_cast<int>(u(rng) * 500);
        const double target = reference_regret(s, t);
        const auto est = [&](double h) { return a * std::pow(h, k); };
        const HSolution sol = solve_h(s, t, est);
        const double root = std::pow(target / a, 1.0 / k);
        if (root <= s.h_prev) {
            CHECK(sol.h == s.h_prev);
        } else {
            CHECK(sol.status == HSolveStatus::Matched);
            CHECK(std::abs(sol.h - root) <= 1e-6 * root);
        }
        CHECK(sol.h >= s.h_prev);
        CHECK(sol.h <= h_cap(s, t));
    }
}

TEST_CASE("Wang line search") {
    const KernelSpec k = KernelSpec::squared_exponential(1, 1.0);
    GaussianProcess empty(k, 0.1);
    auto at_half = [](const GaussianProcess&) { return VectorXd::Constant(1, 0.5); };
    CHECK(wang_baseline_scale(empty, 0.1, at_half).factor == 1.0);

    // Dense data on [0, 1] under a long lengthscale pins sigma below kappa everywhere.
    GaussianProcess dense(k, 0.1);
    for (int i = 0; i <= 20; ++i) dense = dense.with_observation(VectorXd::Constant(1, i / 20.0), 0.0);
    auto probe = [](const GaussianProcess&) { return VectorXd::Constant(1, 0.525); };
    CHECK(std::sqrt(dense.predict(VectorXd::Constant(1, 0.525)).variance) < 0.1);
    const WangScale w = wang_baseline_scale(dense, 0.1, probe);
    CHECK(!w.capped);
    CHECK(w.factor > 1.0);
    const int steps = static_cast<int>(std::lround(std::log(w.factor) / std::log(1.05)));
    CHECK(w.factor == doctest::Approx(std::pow(1.05, steps)));
    auto sigma_at = [&](double c) {
        const auto shrunk = dense.with_kernel(KernelSpec::squared_exponential(1, 1.0 / c));
        return std::sqrt(shrunk.predict(VectorXd::Constant(1, 0.525)).variance);
    };
    CHECK(sigma_at(w.factor) >= 0.1);
    CHECK(sigma_at(w.factor / 1.05) < 0.1);

    CHECK(wang_baseline_scale(dense, 1e-12, probe).factor == 1.0);
    const WangScale cap = wang_baseline_scale(dense, 2.0, probe);
    CHECK(cap.capped);
    CHECK(cap.factor == 1e3);
}

TEST_CASE("state validation") {
    ScalingState s = state();
    CHECK_NOTHROW(s.validate());
    s.h_prev = 0.5;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = state();
    s.reference_exponent = 1.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = state();
    s.theta0 = VectorXd::Ones(2);
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
}
