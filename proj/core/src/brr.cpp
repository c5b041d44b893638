#include <Eigen/Dense>
#include <Eigen/SVD>

#include "agd/estimators.hpp"

namespace agd {

namespace {

Eigen::MatrixXd with_ones_column(const Eigen::MatrixXd& X) {
    Eigen::MatrixXd design(X.rows(), X.cols() + 1);
    design.leftCols(X.cols()) = X;
    design.col(X.cols()).setOnes();
    return design;
}

}  // namespace

Eigen::VectorXd linear_predict(const LinearModel& model, const Eigen::MatrixXd& X) {
    if (X.cols() != model.feature_count())
        throw invalid_input("linear_predict: column count does not match model");
    return X * model.w.head(model.feature_count()) +
           Eigen::VectorXd::Constant(X.rows(), model.intercept());
}

Eigen::VectorXd brr_posterior_mean(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                   double alpha, double lambda) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::VectorXd uty = svd.matrixU().transpose() * y;
    Eigen::VectorXd coef(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        coef(i) = alpha * sv(i) / (lambda + alpha * sv(i) * sv(i)) * uty(i);
    return svd.matrixV() * coef;
}

double brr_effective_dof(const Eigen::VectorXd& gram_eigenvalues, double alpha, double lambda) {
    if (alpha <= 0 || lambda <= 0)
        throw invalid_input("brr_effective_dof: precisions must be positive");
    return (alpha * gram_eigenvalues.array() / (lambda + alpha * gram_eigenvalues.array())).sum();
}

BrrFit brr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const BrrConfig& config) {
    const Eigen::Index n = X.rows();
    if (n < 2) throw invalid_input("brr_fit: need at least 2 samples");
    if (y.size() != n) throw invalid_input("brr_fit: X/y row mismatch");
    if (!X.allFinite() || !y.allFinite()) throw invalid_input("brr_fit: non-finite input");
    if (config.lambda1 <= 0 || config.lambda2 <= 0 || config.alpha1 <= 0 || config.alpha2 <= 0)
        throw invalid_input("brr_fit: hyperpriors must be positive");
    if (y.maxCoeff() == y.minCoeff()) throw degenerate_error("brr_fit: constant target");

    const Eigen::MatrixXd design = with_ones_column(X);
    const Eigen::Index D = design.cols();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::MatrixXd& U = svd.matrixU();
    const Eigen::MatrixXd& V = svd.matrixV();
    const Eigen::Index r = sv.size();
    // eigenvalues of design^T design; entries beyond r are zero
    Eigen::VectorXd s = sv.array().square();
    Eigen::VectorXd uty = U.transpose() * y;

    double y_mean = y.mean();
    double var_y = (y.array() - y_mean).square().sum() / static_cast<double>(n);
    double alpha = 1.0 / var_y;
    double lambda = 1.0;

    BrrFit fit;
    Eigen::VectorXd mu_prev = Eigen::VectorXd::Zero(D);
    Eigen::VectorXd coef(r);
    double gamma = 0.0;

    int it = 0;
    for (it = 1; it <= config.max_iter; ++it) {
        // mu for the current (alpha, lambda); Sigma is only materialized at
        // the end since the updates need just mu, gamma and the residual
        for (Eigen::Index i = 0; i < r; ++i)
            coef(i) = alpha * sv(i) / (lambda + alpha * s(i)) * uty(i);
        fit.mu = V * coef;

        if (it > 1 && (fit.mu - mu_prev).lpNorm<1>() < config.tol) {
            fit.converged = true;
            break;
        }
        mu_prev = fit.mu;
        if (it == config.max_iter) break;  // keep (alpha, lambda) paired with mu

        gamma = brr_effective_dof(s, alpha, lambda);
        double mu_sq = fit.mu.squaredNorm();
        Eigen::VectorXd fitted = U * (sv.asDiagonal() * coef);
        double sse = (y - fitted).squaredNorm();
        lambda = (gamma + 2.0 * config.lambda1) / (mu_sq + 2.0 * config.lambda2);
        alpha = (static_cast<double>(n) - gamma + 2.0 * config.alpha1) / (sse + 2.0 * config.alpha2);
    }
    (void)gamma;
    fit.iterations = std::min(it, config.max_iter);
    fit.alpha = alpha;
    fit.lambda = lambda;
    fit.gamma_eff = brr_effective_dof(s, alpha, lambda);

    // Sigma = V diag(1/(lambda+alpha s)) V^T + (1/lambda)(I - V V^T)
    Eigen::VectorXd dinv = (lambda + alpha * s.array()).inverse();
    fit.sigma = Eigen::MatrixXd::Identity(D, D) / lambda +
                V * (dinv.array() - 1.0 / lambda).matrix().asDiagonal() * V.transpose();
    return fit;
}

Eigen::VectorXd brr_predict(const BrrFit& fit, const Eigen::MatrixXd& X) {
    if (X.cols() + 1 != fit.mu.size())
        throw invalid_input("brr_predict: column count does not match fit");
    return with_ones_column(X) * fit.mu;
}

}  // namespace agd
