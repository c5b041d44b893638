#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "agd/estimators.hpp"

namespace agd {

Eigen::VectorXd anova_f_scores(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               TargetKind target) {
    const Eigen::Index n = X.rows(), p = X.cols();
    if (y.size() != n) throw invalid_input("anova_f_scores: X/y row mismatch");
    if (n < 3) throw invalid_input("anova_f_scores: need at least 3 samples");
    Eigen::VectorXd f(p);

    if (target == TargetKind::regression) {
        // F of the univariate linear fit: F = r^2 (n-2) / (1 - r^2)
        double y_mean = y.mean();
        Eigen::VectorXd yc = y.array() - y_mean;
        double y_ss = yc.squaredNorm();
        if (y_ss == 0.0) throw degenerate_error("anova_f_scores: constant target");
        for (Eigen::Index j = 0; j < p; ++j) {
            Eigen::VectorXd xc = X.col(j).array() - X.col(j).mean();
            double x_ss = xc.squaredNorm();
            if (x_ss == 0.0) {
                f(j) = 0.0;
                continue;
            }
            double r = xc.dot(yc) / std::sqrt(x_ss * y_ss);
            double r2 = r * r;
            f(j) = r2 >= 1.0 ? std::numeric_limits<double>::infinity()
                             : r2 * static_cast<double>(n - 2) / (1.0 - r2);
        }
        return f;
    }

    // one-way ANOVA across classes
    std::map<double, std::vector<int>> by_class;
    for (Eigen::Index i = 0; i < n; ++i) by_class[y(i)].push_back(static_cast<int>(i));
    const std::size_t K = by_class.size();
    if (K < 2) throw degenerate_error("anova_f_scores: single-class target");
    if (n <= static_cast<Eigen::Index>(K))
        throw invalid_input("anova_f_scores: no within-class degrees of freedom");
    for (Eigen::Index j = 0; j < p; ++j) {
        double grand = X.col(j).mean();
        double between = 0.0, within = 0.0;
        for (const auto& [cls, idx] : by_class) {
            double m = 0.0;
            for (int i : idx) m += X(i, j);
            m /= static_cast<double>(idx.size());
            between += static_cast<double>(idx.size()) * (m - grand) * (m - grand);
            for (int i : idx) within += (X(i, j) - m) * (X(i, j) - m);
        }
        double ms_between = between / static_cast<double>(K - 1);
        double ms_within = within / static_cast<double>(n - K);
        if (ms_within == 0.0)
            f(j) = ms_between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        else
            f(j) = ms_between / ms_within;
    }
    return f;
}

std::vector<int> anova_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                              TargetKind target) {
    if (k < 1 || k > X.cols()) throw invalid_input("anova_select: k out of range");
    Eigen::VectorXd f = anova_f_scores(X, y, target);
    std::vector<int> order(X.cols());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (f(a) != f(b)) return f(a) > f(b);
        return a < b;
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace agd
