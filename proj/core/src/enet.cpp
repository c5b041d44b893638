#include <cmath>

#include "agd/estimators.hpp"

namespace agd {

namespace {

constexpr double kCoordTol = 1e-6;
constexpr int kMaxSweeps = 10000;

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

}  // namespace

double enet_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
    Eigen::VectorXd yc = y.array() - y.mean();
    return (Xc.transpose() * yc).lpNorm<Eigen::Infinity>();
}

LinearModel enet_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda1,
                     double lambda2) {
    const Eigen::Index n = X.rows(), d = X.cols();
    if (n < 2) throw invalid_input("enet_fit: need at least 2 samples");
    if (y.size() != n) throw invalid_input("enet_fit: X/y row mismatch");
    if (!X.allFinite() || !y.allFinite()) throw invalid_input("enet_fit: non-finite input");
    if (lambda1 < 0 || lambda2 < 0) throw invalid_input("enet_fit: negative penalty");

    Eigen::RowVectorXd x_mean = X.colwise().mean();
    Eigen::MatrixXd Xc = X.rowwise() - x_mean;
    double y_mean = y.mean();
    Eigen::VectorXd residual = y.array() - y_mean;  // r = yc - Xc w, w = 0

    Eigen::VectorXd col_sq(d);
    for (Eigen::Index j = 0; j < d; ++j) col_sq(j) = Xc.col(j).squaredNorm();

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            if (col_sq(j) == 0.0) continue;  // constant column stays at zero
            double rho = Xc.col(j).dot(residual) + col_sq(j) * w(j);
            double w_new = soft_threshold(rho, lambda1) / (col_sq(j) + lambda2);
            if (w_new != w(j)) {
                residual += Xc.col(j) * (w(j) - w_new);
                max_change = std::max(max_change, std::fabs(w_new - w(j)));
                w(j) = w_new;
            }
        }
        if (max_change < kCoordTol) break;
    }

    LinearModel model;
    model.w.resize(d + 1);
    model.w.head(d) = w;
    model.w(d) = y_mean - x_mean * w;
    return model;
}

}  // namespace agd
