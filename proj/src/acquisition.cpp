#include <algorithm>
#include <cmath>
#include <numeric>

#include "abo/algorithms.hpp"
#include "abo/errors.hpp"
#include "abo/rng.hpp"

namespace abo {

Domain Domain::unit_cube(int dim) {
    return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
}

void Domain::validate() const {
    if (lower.size() == 0 || lower.size() != upper.size()) {
        throw InvalidSpec("domain bounds must be non-empty and of equal length");
    }
    if (!(lower.array() < upper.array()).all() || !lower.allFinite() || !upper.allFinite()) {
        throw InvalidSpec("domain requires finite lower < upper in every dimension");
    }
}

Eigen::VectorXd Domain::from_unit(const Eigen::VectorXd& u) const {
    return lower + (upper - lower).cwiseProduct(u);
}

Eigen::VectorXd Domain::to_unit(const Eigen::VectorXd& x) const {
    return (x - lower).cwiseQuotient(upper - lower);
}

bool Domain::contains(const Eigen::VectorXd& x, double slack) const {
    return x.size() == lower.size() && (x.array() >= lower.array() - slack).all() &&
           (x.array() <= upper.array() + slack).all();
}

double ucb_value(const GaussianProcess& gp, double beta_sqrt, const Eigen::VectorXd& x) {
    const Prediction p = gp.predict(x);
    return p.mean + beta_sqrt * std::sqrt(p.variance);
}

UcbResult maximize_ucb(const GaussianProcess& gp, double beta_sqrt, const Domain& domain,
                       std::uint64_t seed, const UcbOptions& options) {
    if (!(beta_sqrt > 0.0)) throw ContractViolation("maximize_ucb: beta_sqrt must be positive");
    domain.validate();
    const int d = domain.dim();
    if (d != gp.dim()) throw ContractViolation("maximize_ucb: domain and model dimensions differ");

    // Candidates in unit coordinates, one per row.
    const Eigen::Index n = static_cast<Eigen::Index>(options.scan_per_dim) * d;
    PointMatrix unit(n, d);
    if (d == 1) {
        for (Eigen::Index i = 0; i < n; ++i) unit(i, 0) = static_cast<double>(i) / static_cast<double>(n - 1);
    } else {
        SobolSequence sobol(d);
        CounterRng rng(seed, 0, "ucb-shift");
        const Eigen::VectorXd shift = rng.uniform_vector(d);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::VectorXd p = sobol.next() + shift;
            unit.row(i) = (p.array() - p.array().floor()).matrix().transpose();
        }
    }
    PointMatrix candidates(n, d);
    const Eigen::RowVectorXd lo = domain.lower.transpose();
    const Eigen::RowVectorXd width = (domain.upper - domain.lower).transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
        candidates.row(i) = lo + unit.row(i).cwiseProduct(width);
    }

    const BatchPrediction pred = gp.predict_batch(candidates);
    const Eigen::VectorXd acq = pred.mean + beta_sqrt * pred.variance.cwiseSqrt();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.refine_starts, 1)), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                          return acq(a) > acq(b) || (acq(a) == acq(b) && a < b);
                      });

    const double initial_step = d == 1 ? 1.0 / static_cast<double>(n - 1)
                                       : 0.5 * std::pow(static_cast<double>(n), -1.0 / d);

    UcbResult best;
    bool have_best = false;
    for (std::size_t s = 0; s < starts; ++s) {
        Eigen::VectorXd u = unit.row(order[s]).transpose();
        double value = acq(order[s]);
        double step = initial_step;
        for (int it = 0; it < options.refine_iterations; ++it) {
            bool improved = false;
            for (int j = 0; j < d; ++j) {
                for (double dir : {1.0, -1.0}) {
                    Eigen::VectorXd probe = u;
                    probe(j) = std::clamp(probe(j) + dir * step, 0.0, 1.0);
                    if (probe(j) == u(j)) continue;
                    const double v = ucb_value(gp, beta_sqrt, domain.from_unit(probe));
                    if (v > value) {
                        value = v;
                        u = probe;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (!have_best || value > best.value) {
            best.x = domain.from_unit(u);
            best.value = value;
            have_best = true;
        }
    }
    return best;
}

} // namespace abo
