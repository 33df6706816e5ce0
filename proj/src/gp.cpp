#include "abo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "abo/errors.hpp"

namespace abo {

Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& a, double* jitter_used) {
    const Eigen::Index n = a.rows();
    double jitter = 0.0;
    while (true) {
        Eigen::MatrixXd shifted = a;
        shifted.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            Eigen::MatrixXd L = llt.matrixL();
            if (L.diagonal().minCoeff() > 0.0 && L.allFinite()) {
                if (jitter_used) *jitter_used = jitter;
                return L;
            }
        }
        if (jitter == 0.0) {
            jitter = kGramJitter;
        } else if (jitter < 1e-6 * 0.999) {
            jitter *= 10.0;
        } else {
            std::ostringstream msg;
            msg << "Cholesky of " << n << "x" << n << " covariance failed with jitter up to 1e-6";
            throw SingularModel(msg.str());
        }
    }
}

GaussianProcess::GaussianProcess(KernelSpec kernel, double noise_sigma)
    : GaussianProcess(std::move(kernel), noise_sigma, PointMatrix(0, 0), Eigen::VectorXd(0)) {}

GaussianProcess::GaussianProcess(KernelSpec kernel, double noise_sigma, PointMatrix inputs,
                                 Eigen::VectorXd observations)
    : kernel_(std::move(kernel)),
      noise_sigma_(noise_sigma),
      inputs_(std::move(inputs)),
      observations_(std::move(observations)) {
    if (!(noise_sigma_ > 0.0) || !std::isfinite(noise_sigma_)) {
        throw InvalidSpec("noise_sigma must be positive and finite");
    }
    if (inputs_.rows() != observations_.size()) {
        throw ContractViolation("GaussianProcess: input and observation counts differ");
    }
    if (inputs_.rows() > 0 && inputs_.cols() != kernel_.dim()) {
        throw ContractViolation("GaussianProcess: input dimension does not match kernel");
    }
    if (!observations_.allFinite()) throw InvalidObservation("observations must be finite");
    if (inputs_.rows() == 0) inputs_.resize(0, kernel_.dim());
    refactor();
}

void GaussianProcess::refactor() {
    const Eigen::Index t = size();
    if (t == 0) {
        chol_.resize(0, 0);
        alpha_.resize(0);
        jitter_ = 0.0;
        return;
    }
    Eigen::MatrixXd K = gram_matrix(kernel_, inputs_);
    K.diagonal().array() += noise_sigma_ * noise_sigma_;
    chol_ = robust_cholesky(K, &jitter_);
    const auto L = chol_.triangularView<Eigen::Lower>();
    alpha_ = L.solve(observations_);
    chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
}

GaussianProcess GaussianProcess::with_observation(const Eigen::VectorXd& x, double y) const {
    if (!std::isfinite(y)) throw InvalidObservation("observation must be finite");
    if (x.size() != dim()) {
        throw ContractViolation("with_observation: point dimension does not match kernel");
    }
    if (!x.allFinite()) throw InvalidObservation("observation input must be finite");
    PointMatrix inputs(size() + 1, dim());
    inputs.topRows(size()) = inputs_;
    inputs.row(size()) = x.transpose();
    Eigen::VectorXd obs(size() + 1);
    obs.head(size()) = observations_;
    obs(size()) = y;
    return {kernel_, noise_sigma_, std::move(inputs), std::move(obs)};
}

GaussianProcess GaussianProcess::with_kernel(KernelSpec kernel) const {
    if (kernel.dim() != dim()) {
        throw ContractViolation("with_kernel: kernel dimension does not match stored inputs");
    }
    return {std::move(kernel), noise_sigma_, inputs_, observations_};
}

Prediction GaussianProcess::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != dim()) throw ContractViolation("predict: point dimension does not match kernel");
    if (size() == 0) return {0.0, 1.0};
    Eigen::VectorXd k(size());
    for (Eigen::Index i = 0; i < size(); ++i) k(i) = kernel_.evaluate(x, inputs_.row(i).transpose());
    const double mean = k.dot(alpha_);
    chol_.triangularView<Eigen::Lower>().solveInPlace(k);
    const double var = std::clamp(1.0 - k.squaredNorm(), 0.0, 1.0);
    return {mean, var};
}

BatchPrediction GaussianProcess::predict_batch(const PointMatrix& points) const {
    const Eigen::Index m = points.rows();
    if (m > 0 && points.cols() != dim()) {
        throw ContractViolation("predict: point dimension does not match kernel");
    }
    if (size() == 0) return {Eigen::VectorXd::Zero(m), Eigen::VectorXd::Ones(m)};
    // t x m
    Eigen::MatrixXd kx = cross_covariance(kernel_, inputs_, points);
    BatchPrediction out;
    out.mean = kx.transpose() * alpha_;
    chol_.triangularView<Eigen::Lower>().solveInPlace(kx);
    out.variance = (1.0 - kx.colwise().squaredNorm().array()).max(0.0).min(1.0).matrix().transpose();
    return out;
}

double GaussianProcess::log_det() const noexcept {
    return 2.0 * chol_.diagonal().array().log().sum();
}

double GaussianProcess::mutual_information() const {
    if (size() == 0) return 0.0;
    // det(K + s^2 I) = s^(2t) det(I + s^-2 K)
    const double mi = 0.5 * (log_det() - static_cast<double>(size()) * std::log(noise_sigma_ * noise_sigma_));
    return std::max(mi, 0.0);
}

} // namespace abo
