#ifndef ABO_ALGORITHMS_HPP
#define ABO_ALGORITHMS_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "abo/adaptation.hpp"
#include "abo/gp.hpp"
#include "abo/hyperparam.hpp"

namespace abo {

/// Axis-aligned box. Runs operate on the unit cube and map back through it.
struct Domain {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static Domain unit_cube(int dim);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(lower.size()); }
    /// Throws InvalidSpec unless lower < upper componentwise.
    void validate() const;
    [[nodiscard]] Eigen::VectorXd from_unit(const Eigen::VectorXd& u) const;
    [[nodiscard]] Eigen::VectorXd to_unit(const Eigen::VectorXd& x) const;
    [[nodiscard]] bool contains(const Eigen::VectorXd& x, double slack = 0.0) const;
};

/// Black-box objective. `value` is the noiseless function on `domain`;
/// observations add N(0, observation_noise^2).
struct Objective {
    std::function<double(const Eigen::VectorXd&)> value;
    Domain domain;
    double observation_noise = 0.1;
    /// Known optimum for regret bookkeeping; NaN when unknown.
    double f_max = std::numeric_limits<double>::quiet_NaN();
};

enum class Variant { AGPUCB, FixedGPUCB, WangShrink };
enum class MapMode { Off, CombineMax, CombineScale };
enum class BetaMode { Theoretical, EmpiricalConstant };

struct AlgorithmConfig {
    std::string name = "agp_ucb";
    Variant variant = Variant::AGPUCB;
    RegretEstimator estimator = RegretEstimator::RegretBound;
    MapMode map_mode = MapMode::Off;
    BetaMode beta_mode = BetaMode::Theoretical;
    /// beta (not beta^1/2) in EmpiricalConstant mode.
    double beta_constant = 3.0;
    KernelFamily kernel_family = KernelFamily::SquaredExponential;
    double matern_nu = 2.5;
    /// Empty means all-ones of the problem dimension.
    Eigen::VectorXd theta0;
    double b0 = 2.0;
    double delta = 0.9;
    double noise_sigma = 0.1;
    double lambda = 0.1;
    double reference_exponent = 0.9;
    double kappa = 0.1;
    int iterations = 100;
    /// Negative means 2^d.
    int init_points = -1;
    std::uint64_t seed = 0;
    LengthscalePrior prior{};
    double cap_coefficient = 1.0;
    double cap_exponent = 0.45;
    /// Resolve theta0 and b0 with use_algorithm1_defaults once the dimension is known.
    bool algorithm1_defaults = false;

    /// B_0 = 1 and theta_0 = diam(unit cube) = sqrt(d).
    void use_algorithm1_defaults(int dim);
    void validate() const;
    [[nodiscard]] Eigen::VectorXd theta0_for(int dim) const;
    [[nodiscard]] int init_points_for(int dim) const;
};

struct TraceRecord {
    /// Negative for initialization points, 1-based for BO iterations.
    int iter = 0;
    /// Unit-cube coordinates.
    Eigen::VectorXd x;
    double y = 0.0;
    /// Noiseless objective value at x.
    double f = 0.0;
    double beta_sqrt = 0.0;
    double g = 1.0;
    double b = 1.0;
    double h = 1.0;
    Eigen::VectorXd theta;
    double norm_bound = 0.0;
    /// Posterior mean / std at x under theta, before observing y.
    double predicted_mean = 0.0;
    double predicted_sigma = 0.0;
    /// max_i theta0_i / theta_i, including any MAP shrinkage.
    double effective_scale = 1.0;
    double simple_regret = std::numeric_limits<double>::quiet_NaN();
    double cumulative_regret = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
    std::string algorithm;
    int dim = 0;
    double noise_sigma = 0.1;
    double f_max = std::numeric_limits<double>::quiet_NaN();
    std::vector<TraceRecord> records;
    std::vector<std::string> warnings;
    bool aborted = false;
    std::string error;

    [[nodiscard]] std::size_t init_count() const;
    [[nodiscard]] std::size_t iteration_count() const { return records.size() - init_count(); }
};

struct UcbResult {
    Eigen::VectorXd x;
    double value = 0.0;
};

struct UcbOptions {
    /// Scan size per dimension (grid in 1-d, Sobol otherwise).
    int scan_per_dim = 1024;
    int refine_starts = 5;
    int refine_iterations = 20;
};

/**
 * argmax over the box of mu(x) + beta^1/2 sigma(x).
 *
 * 1-d scans a uniform 1024-point grid including both ends; higher dimensions
 * scan 1024 d Sobol points shifted by a seed-dependent offset (mod 1). The
 * best scan points are refined by coordinate search with a halving step;
 * only strict improvements are accepted, and ties keep the lowest scan index.
 */
UcbResult maximize_ucb(const GaussianProcess& gp, double beta_sqrt, const Domain& domain,
                       std::uint64_t seed, const UcbOptions& options = {});

double ucb_value(const GaussianProcess& gp, double beta_sqrt, const Eigen::VectorXd& x);

RunTrace run_agp_ucb(const Objective& objective, const AlgorithmConfig& config);
RunTrace run_fixed_gp_ucb(const Objective& objective, const AlgorithmConfig& config);
RunTrace run_wang_shrink(const Objective& objective, const AlgorithmConfig& config);

/// Dispatch on config.variant.
RunTrace run_algorithm(const Objective& objective, const AlgorithmConfig& config);

} // namespace abo

#endif // ABO_ALGORITHMS_HPP
