#include "abo/algorithms.hpp"

#include <cmath>
#include <sstream>

#include "abo/confidence.hpp"
#include "abo/errors.hpp"
#include "abo/rng.hpp"

namespace abo {

void AlgorithmConfig::use_algorithm1_defaults(int dim) {
    b0 = 1.0;
    theta0 = Eigen::VectorXd::Constant(dim, std::sqrt(static_cast<double>(dim)));
}

void AlgorithmConfig::validate() const {
    auto fail = [&](const std::string& what) { throw InvalidSpec("algorithm '" + name + "': " + what); };
    if (iterations < 1) fail("iterations must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
    if (!(noise_sigma > 0.0)) fail("noise_sigma must be positive");
    if (!(b0 > 0.0)) fail("b0 must be positive");
    if (!(lambda >= 0.0)) fail("lambda must be >= 0");
    if (!(reference_exponent > 0.0 && reference_exponent < 1.0)) fail("reference_exponent must lie in (0, 1)");
    if (!(kappa > 0.0)) fail("kappa must be positive");
    if (!(beta_constant > 0.0)) fail("beta_constant must be positive");
    if (theta0.size() > 0 && !(theta0.array() > 0.0).all()) fail("theta0 must be positive");
    if (!(cap_coefficient >= 0.0) || !(cap_exponent >= 0.0 && cap_exponent < 1.0)) {
        fail("h cap must be 1 + c t^e with c >= 0 and 0 <= e < 1");
    }
    prior.validate();
}

Eigen::VectorXd AlgorithmConfig::theta0_for(int dim) const {
    if (theta0.size() == 0) return Eigen::VectorXd::Ones(dim);
    if (theta0.size() == 1 && dim > 1) return Eigen::VectorXd::Constant(dim, theta0(0));
    if (theta0.size() != dim) throw ContractViolation("theta0 dimension does not match the problem");
    return theta0;
}

int AlgorithmConfig::init_points_for(int dim) const {
    return init_points >= 0 ? init_points : (1 << dim);
}

std::size_t RunTrace::init_count() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.iter < 0 ? 1 : 0;
    return n;
}

namespace {

class RunLoop {
public:
    RunLoop(const Objective& objective, const AlgorithmConfig& config, Variant variant)
        : objective_(objective),
          config_(config),
          variant_(variant),
          dim_(objective.domain.dim()),
          unit_(Domain::unit_cube(objective.domain.dim())),
          theta0_(config.theta0_for(objective.domain.dim())),
          theta_map_(theta0_),
          gp_(make_kernel(theta0_), config.noise_sigma),
          noise_rng_(config.seed, 0, "noise") {
        scaling_.lambda = config.lambda;
        scaling_.reference_exponent = config.reference_exponent;
        scaling_.dim = dim_;
        scaling_.theta0 = theta0_;
        scaling_.b0 = config.b0;
        scaling_.estimator = config.estimator;
        scaling_.gamma_exponent = gp_.kernel().capacity_exponent();
        scaling_.noise_sigma = config.noise_sigma;
        scaling_.cap_coefficient = config.cap_coefficient;
        scaling_.cap_exponent = config.cap_exponent;
        scaling_.validate();

        trace_.algorithm = config.name;
        trace_.dim = dim_;
        trace_.noise_sigma = config.noise_sigma;
        trace_.f_max = objective.f_max;
    }

    RunTrace run() {
        try {
            initialize();
            for (int t = 1; t <= config_.iterations; ++t) iterate(t);
        } catch (const InvalidObservation& e) {
            trace_.aborted = true;
            trace_.error = e.what();
        }
        return std::move(trace_);
    }

private:
    KernelSpec make_kernel(const Eigen::VectorXd& theta) const {
        return KernelSpec(config_.kernel_family, theta,
                          config_.kernel_family == KernelFamily::Matern ? config_.matern_nu : 0.0);
    }

    double beta_for(double norm_bound, double mutual_info) const {
        if (config_.beta_mode == BetaMode::EmpiricalConstant) return std::sqrt(config_.beta_constant);
        return beta_sqrt(ConfidenceParams{config_.delta, config_.noise_sigma, norm_bound}, mutual_info);
    }

    Eigen::VectorXd theta_for(double g) const {
        switch (config_.map_mode) {
        case MapMode::Off:
            return theta0_ / g;
        case MapMode::CombineMax:
            return combine_max(theta_map_, theta0_, g);
        case MapMode::CombineScale:
            return combine_scale(theta_map_, g);
        }
        return theta0_ / g;
    }

    // Observe f at a unit-cube point and append it to the model and the trace.
    void observe(TraceRecord record) {
        const double f = objective_.value(objective_.domain.from_unit(record.x));
        if (!std::isfinite(f)) {
            std::ostringstream msg;
            msg << "objective returned a non-finite value at iteration " << record.iter;
            throw InvalidObservation(msg.str());
        }
        const double y = f + objective_.observation_noise * noise_rng_.normal();
        record.f = f;
        record.y = y;
        gp_ = gp_.with_observation(record.x, y);

        if (std::isfinite(objective_.f_max)) {
            const double r = objective_.f_max - f;
            best_f_ = std::max(best_f_, f);
            record.simple_regret = objective_.f_max - best_f_;
            if (record.iter > 0) cumulative_ += r;
            record.cumulative_regret = cumulative_;
        }
        trace_.records.push_back(std::move(record));
    }

    void initialize() {
        const int n0 = config_.init_points_for(dim_);
        CounterRng rng(config_.seed, 0, "init");
        for (int i = 0; i < n0; ++i) {
            TraceRecord r;
            r.iter = i - n0;
            r.x = rng.uniform_vector(dim_);
            r.theta = theta0_;
            r.norm_bound = config_.b0;
            observe(std::move(r));
        }
    }

    UcbResult select(const GaussianProcess& gp, double beta, int t) const {
        return maximize_ucb(gp, beta, unit_, config_.seed ^ (static_cast<std::uint64_t>(t) << 32));
    }

    void iterate(int t) {
        if (config_.map_mode != MapMode::Off && gp_.size() > 0) {
            MapOptions options;
            options.seed = mix64(config_.seed) ^ static_cast<std::uint64_t>(t);
            const MapResult map = map_estimate(gp_, config_.prior, theta_map_, options);
            if (map.failed) {
                trace_.warnings.push_back("iteration " + std::to_string(t) + ": MAP estimation failed");
            }
            theta_map_ = truncate_to_bounded_change(map.theta_map, theta0_);
        }

        double h = 1.0;
        ScaleSplit split;
        double norm_bound = config_.b0;
        Eigen::VectorXd theta;

        switch (variant_) {
        case Variant::AGPUCB: {
            h = solve_schedule(t);
            split = decompose(h, config_.lambda, dim_);
            norm_bound = split.b * (1.0 + split.eps_g) * config_.b0;
            theta = theta_for(split.g);
            break;
        }
        case Variant::FixedGPUCB:
            theta = theta_for(1.0);
            break;
        case Variant::WangShrink: {
            const GaussianProcess current = gp_.with_kernel(make_kernel(theta_for(wang_factor_)));
            const WangScale scale = wang_baseline_scale(
                current, config_.kappa,
                [&](const GaussianProcess& shrunk) {
                    return select(shrunk, beta_for(config_.b0, shrunk.mutual_information()), t).x;
                });
            if (scale.capped) {
                trace_.warnings.push_back("iteration " + std::to_string(t) +
                                          ": Wang line search reached its cap");
            }
            wang_factor_ *= scale.factor;
            split.g = wang_factor_;
            split.eps_g = std::pow(wang_factor_, dim_) - 1.0;
            h = std::pow(wang_factor_, dim_);
            theta = theta_for(wang_factor_);
            break;
        }
        }

        gp_ = gp_.with_kernel(make_kernel(theta));
        const double beta = beta_for(norm_bound, gp_.mutual_information());
        const UcbResult choice = select(gp_, beta, t);
        const Prediction pred = gp_.predict(choice.x);

        TraceRecord r;
        r.iter = t;
        r.x = choice.x;
        r.beta_sqrt = beta;
        r.g = split.g;
        r.b = split.b;
        r.h = h;
        r.theta = theta;
        r.norm_bound = norm_bound;
        r.predicted_mean = pred.mean;
        r.predicted_sigma = std::sqrt(pred.variance);
        r.effective_scale = (theta0_.array() / theta.array()).maxCoeff();
        history_.push_back({beta, r.predicted_sigma});
        observe(std::move(r));
    }

    double solve_schedule(int t) {
        std::function<double(double)> estimator;
        if (config_.estimator == RegretEstimator::RegretBound) {
            // The model still carries the previous iteration's lengthscales.
            const double mi_prev = gp_.mutual_information();
            estimator = [this, t, mi_prev](double h) {
                return regret_bound_estimate(scaling_, h, t, mi_prev,
                                             [this](double b, double i) { return beta_for(b, i); });
            };
        } else {
            estimator = [this, t](double h) {
                const ScaleSplit split = decompose(h, config_.lambda, dim_);
                const GaussianProcess probe = gp_.with_kernel(make_kernel(theta_for(split.g)));
                const double norm_bound = split.b * (1.0 + split.eps_g) * config_.b0;
                const double beta = beta_for(norm_bound, probe.mutual_information());
                const UcbResult next = select(probe, beta, t);
                const double sigma = std::sqrt(probe.predict(next.x).variance);
                return one_step_estimate(history_, {beta, sigma});
            };
        }
        const HSolution sol = solve_h(scaling_, t, estimator);
        if (sol.status == HSolveStatus::BracketFailure) {
            trace_.warnings.push_back("iteration " + std::to_string(t) +
                                      ": regret estimator not monotone over bracket, keeping h");
        }
        scaling_.h_prev = std::max(sol.h, scaling_.h_prev);
        return scaling_.h_prev;
    }

    const Objective& objective_;
    const AlgorithmConfig& config_;
    Variant variant_;
    int dim_;
    Domain unit_;
    Eigen::VectorXd theta0_;
    Eigen::VectorXd theta_map_;
    GaussianProcess gp_;
    CounterRng noise_rng_;
    ScalingState scaling_;
    std::vector<StepTerm> history_;
    double wang_factor_ = 1.0;
    double best_f_ = -std::numeric_limits<double>::infinity();
    double cumulative_ = 0.0;
    RunTrace trace_;
};

RunTrace run_variant(const Objective& objective, const AlgorithmConfig& config, Variant variant) {
    objective.domain.validate();
    config.validate();
    if (!objective.value) throw ContractViolation("objective has no value function");
    return RunLoop(objective, config, variant).run();
}

} // namespace

RunTrace run_agp_ucb(const Objective& objective, const AlgorithmConfig& config) {
    return run_variant(objective, config, Variant::AGPUCB);
}

RunTrace run_fixed_gp_ucb(const Objective& objective, const AlgorithmConfig& config) {
    return run_variant(objective, config, Variant::FixedGPUCB);
}

RunTrace run_wang_shrink(const Objective& objective, const AlgorithmConfig& config) {
    return run_variant(objective, config, Variant::WangShrink);
}

RunTrace run_algorithm(const Objective& objective, const AlgorithmConfig& config) {
    return run_variant(objective, config, config.variant);
}

} // namespace abo
