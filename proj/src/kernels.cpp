#include "abo/kernels.hpp"

#include <cmath>
#include <sstream>

#include "abo/errors.hpp"

namespace abo {

namespace {

bool is_half_integer(double nu, double target) { return std::abs(nu - target) < 1e-12; }

void check_dims(const KernelSpec& spec, Eigen::Index cols, const char* what) {
    if (cols != spec.dim()) {
        std::ostringstream msg;
        msg << what << ": point dimension " << cols << " does not match kernel dimension "
            << spec.dim();
        throw ContractViolation(msg.str());
    }
}

} // namespace

KernelSpec::KernelSpec(KernelFamily family, Eigen::VectorXd lengthscales, double nu)
    : family_(family), nu_(nu), lengthscales_(std::move(lengthscales)) {
    if (lengthscales_.size() == 0) throw InvalidSpec("kernel needs at least one lengthscale");
    for (Eigen::Index i = 0; i < lengthscales_.size(); ++i) {
        const double l = lengthscales_(i);
        if (!std::isfinite(l) || l <= 0.0) {
            std::ostringstream msg;
            msg << "lengthscale " << i << " must be positive and finite, got " << l;
            throw InvalidSpec(msg.str());
        }
    }
    if (family_ == KernelFamily::Matern) {
        if (!(nu_ > 1.0)) throw InvalidSpec("Matern kernel requires nu > 1");
        if (!is_half_integer(nu_, 1.5) && !is_half_integer(nu_, 2.5)) {
            throw InvalidSpec("Matern kernel is implemented for nu = 3/2 and nu = 5/2 only");
        }
    } else {
        nu_ = 0.0;
    }
}

KernelSpec KernelSpec::squared_exponential(Eigen::VectorXd lengthscales) {
    return {KernelFamily::SquaredExponential, std::move(lengthscales)};
}

KernelSpec KernelSpec::squared_exponential(int dim, double lengthscale) {
    return squared_exponential(Eigen::VectorXd::Constant(dim, lengthscale));
}

KernelSpec KernelSpec::matern(double nu, Eigen::VectorXd lengthscales) {
    return {KernelFamily::Matern, std::move(lengthscales), nu};
}

KernelSpec KernelSpec::with_lengthscales(Eigen::VectorXd lengthscales) const {
    return {family_, std::move(lengthscales), nu_};
}

double KernelSpec::capacity_exponent() const noexcept {
    const double d = static_cast<double>(dim());
    return family_ == KernelFamily::SquaredExponential ? d : 2.0 * nu_ + d;
}

double KernelSpec::profile(double r) const noexcept {
    switch (family_) {
    case KernelFamily::SquaredExponential:
        return std::exp(-0.5 * r * r);
    case KernelFamily::Matern:
        if (is_half_integer(nu_, 1.5)) {
            const double s = std::sqrt(3.0) * r;
            return (1.0 + s) * std::exp(-s);
        } else {
            const double s = std::sqrt(5.0) * r;
            return (1.0 + s + s * s / 3.0) * std::exp(-s);
        }
    }
    return 0.0;
}

double KernelSpec::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& x2) const {
    if (x.size() != dim() || x2.size() != dim()) {
        std::ostringstream msg;
        msg << "kernel of dimension " << dim() << " evaluated on points of dimension " << x.size()
            << " and " << x2.size();
        throw ContractViolation(msg.str());
    }
    const double r2 = ((x - x2).array() / lengthscales_.array()).square().sum();
    return profile(std::sqrt(r2));
}

bool KernelSpec::operator==(const KernelSpec& other) const {
    return family_ == other.family_ && nu_ == other.nu_ &&
           lengthscales_.size() == other.lengthscales_.size() &&
           lengthscales_ == other.lengthscales_;
}

PointMatrix to_rows(const std::vector<Eigen::VectorXd>& points) {
    if (points.empty()) return PointMatrix(0, 0);
    PointMatrix out(static_cast<Eigen::Index>(points.size()), points.front().size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != out.cols()) throw ContractViolation("to_rows: ragged point list");
        out.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    }
    return out;
}

Eigen::MatrixXd cross_covariance(const KernelSpec& spec, const PointMatrix& a, const PointMatrix& b) {
    if (a.rows() > 0) check_dims(spec, a.cols(), "cross_covariance");
    if (b.rows() > 0) check_dims(spec, b.cols(), "cross_covariance");
    const Eigen::RowVectorXd inv = spec.lengthscales().cwiseInverse().transpose();
    const Eigen::MatrixXd as = a.rows() > 0 ? Eigen::MatrixXd(a.array().rowwise() * inv.array())
                                            : Eigen::MatrixXd(0, spec.dim());
    const Eigen::MatrixXd bs = b.rows() > 0 ? Eigen::MatrixXd(b.array().rowwise() * inv.array())
                                            : Eigen::MatrixXd(0, spec.dim());
    Eigen::MatrixXd out(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < bs.rows(); ++j) {
        for (Eigen::Index i = 0; i < as.rows(); ++i) {
            out(i, j) = spec.profile(std::sqrt((as.row(i) - bs.row(j)).squaredNorm()));
        }
    }
    return out;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const PointMatrix& points) {
    const Eigen::Index n = points.rows();
    if (n == 0) return Eigen::MatrixXd(0, 0);
    check_dims(spec, points.cols(), "gram_matrix");
    const Eigen::RowVectorXd inv = spec.lengthscales().cwiseInverse().transpose();
    const Eigen::MatrixXd scaled = points.array().rowwise() * inv.array();
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        K(j, j) = 1.0;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double v = spec.profile(std::sqrt((scaled.row(i) - scaled.row(j)).squaredNorm()));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

double rkhs_norm_of_expansion(const KernelSpec& spec, const PointMatrix& centers,
                              const Eigen::VectorXd& weights) {
    if (centers.rows() < 1) throw ContractViolation("rkhs_norm_of_expansion needs at least one center");
    if (weights.size() != centers.rows()) {
        throw ContractViolation("rkhs_norm_of_expansion: weight count does not match center count");
    }
    const double q = weights.dot(gram_matrix(spec, centers) * weights);
    if (q < -1e-10) {
        std::ostringstream msg;
        msg << "RKHS quadratic form is negative (" << q << ")";
        throw NumericalError(msg.str());
    }
    return std::sqrt(std::max(q, 0.0));
}

} // namespace abo
