#include <algorithm>
#include <cmath>
#include <set>

#include "agd/estimators.hpp"

namespace agd {

namespace {

constexpr double kPgTol = 1e-8;
constexpr int kMaxSweeps = 10000;

}  // namespace

LinearModel svc_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_pm1, double C) {
    const Eigen::Index n = X.rows(), d = X.cols();
    if (y_pm1.size() != n) throw invalid_input("svc_fit: X/y row mismatch");
    if (!X.allFinite() || !y_pm1.allFinite()) throw invalid_input("svc_fit: non-finite input");
    if (C <= 0) throw invalid_input("svc_fit: C must be positive");
    bool has_pos = false, has_neg = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (y_pm1(i) == 1.0)
            has_pos = true;
        else if (y_pm1(i) == -1.0)
            has_neg = true;
        else
            throw invalid_input("svc_fit: labels must be +1/-1");
    }
    if (!has_pos || !has_neg) throw degenerate_error("svc_fit: single-class input");

    // augmented design: the regularized ones column carries the intercept
    Eigen::MatrixXd Xa(n, d + 1);
    Xa.leftCols(d) = X;
    Xa.col(d).setOnes();

    Eigen::VectorXd qdiag(n);
    for (Eigen::Index i = 0; i < n; ++i) qdiag(i) = Xa.row(i).squaredNorm();

    // dual coordinate descent on 1/2 a^T Q a - e^T a, 0 <= a_i <= C
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_pg = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double g = y_pm1(i) * Xa.row(i).dot(w) - 1.0;
            double pg = g;
            if (alpha(i) == 0.0)
                pg = std::min(g, 0.0);
            else if (alpha(i) == C)
                pg = std::max(g, 0.0);
            max_pg = std::max(max_pg, std::fabs(pg));
            if (pg != 0.0) {
                double a_new = std::clamp(alpha(i) - g / qdiag(i), 0.0, C);
                if (a_new != alpha(i)) {
                    w += (a_new - alpha(i)) * y_pm1(i) * Xa.row(i).transpose();
                    alpha(i) = a_new;
                }
            }
        }
        if (max_pg < kPgTol) break;
    }

    LinearModel model;
    model.w = w;
    return model;
}

SvcModel svc_fit_multiclass(const Eigen::MatrixXd& X, const Eigen::VectorXd& labels, double C) {
    std::set<double> distinct(labels.data(), labels.data() + labels.size());
    if (distinct.size() < 2) throw degenerate_error("svc_fit_multiclass: single-class input");

    SvcModel model;
    model.classes.assign(distinct.begin(), distinct.end());
    const Eigen::Index n = labels.size();
    Eigen::VectorXd pm1(n);
    if (model.classes.size() == 2) {
        for (Eigen::Index i = 0; i < n; ++i)
            pm1(i) = labels(i) == model.classes[1] ? 1.0 : -1.0;
        model.machines.push_back(svc_fit(X, pm1, C));
        return model;
    }
    for (double cls : model.classes) {
        for (Eigen::Index i = 0; i < n; ++i) pm1(i) = labels(i) == cls ? 1.0 : -1.0;
        model.machines.push_back(svc_fit(X, pm1, C));
    }
    return model;
}

Eigen::VectorXd svc_predict(const SvcModel& model, const Eigen::MatrixXd& X) {
    if (model.machines.empty()) throw invalid_input("svc_predict: empty model");
    Eigen::VectorXd out(X.rows());
    if (model.classes.size() == 2) {
        Eigen::VectorXd dec = linear_predict(model.machines[0], X);
        // sign with exact ties toward the smaller class
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            out(i) = dec(i) > 0.0 ? model.classes[1] : model.classes[0];
        return out;
    }
    Eigen::MatrixXd dec(X.rows(), model.machines.size());
    for (std::size_t m = 0; m < model.machines.size(); ++m)
        dec.col(m) = linear_predict(model.machines[m], X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        Eigen::Index best = 0;
        dec.row(i).maxCoeff(&best);  // first maximum wins: smallest class
        out(i) = model.classes[static_cast<std::size_t>(best)];
    }
    return out;
}

}  // namespace agd
