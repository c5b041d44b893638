#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "agd/errors.hpp"
#include "agd/estimator.hpp"

namespace agd {

enum class ScoreKind { zeta, kappa };

// Ratio of explained variance (population variance, denominator n):
// zeta = (var(y) - var(y - yhat)) / var(y). 1 for perfect prediction,
// 0 for any constant prediction.
double explained_variance(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

// Fraction of exact label matches.
double accuracy(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

double score_value(ScoreKind kind, const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

// A cross-validation fold scheme. kfold shuffles sample indices with the
// given seed before chunking, so fold assignment is reproducible.
struct FoldScheme {
    enum class Kind { kfold, leave_one_out, leave_one_group_out };

    Kind kind = Kind::kfold;
    int k = 4;
    std::uint64_t seed = 0;

    static FoldScheme kfold(int k, std::uint64_t seed = 0) {
        return {Kind::kfold, k, seed};
    }
    static FoldScheme leave_one_out() { return {Kind::leave_one_out, 0, 0}; }
    static FoldScheme leave_one_group_out() { return {Kind::leave_one_group_out, 0, 0}; }

    // "kfold:4", "loo", "logo"
    static FoldScheme parse(const std::string& text, std::uint64_t seed = 0);
    std::string to_string() const;
};

struct Fold {
    std::vector<int> train;
    std::vector<int> test;
};

// Materialize the folds for n samples. Every sample lands in exactly one
// test fold; grouped folds never split a group.
std::vector<Fold> make_folds(const FoldScheme& scheme, int n,
                             const std::optional<Eigen::VectorXi>& groups = std::nullopt);

struct CvResult {
    std::vector<double> per_fold;
    double mean = 0.0;
};

// Fit a clone of the estimator on each train fold and score the test fold.
// A fold whose fit or scoring fails raises an error naming the fold.
CvResult cross_val_score(const Estimator& estimator, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y, const FoldScheme& scheme, ScoreKind score,
                         const std::optional<Eigen::VectorXi>& groups = std::nullopt,
                         std::atomic<long long>* fit_counter = nullptr, int threads = 1);

// Two-sided p-value of the paired t statistic with n-1 degrees of freedom.
// Zero-variance differences are degenerate.
double paired_t_test(const Eigen::VectorXd& scores_a, const Eigen::VectorXd& scores_b);

// Exposed for verification: regularized incomplete beta I_x(a,b) evaluated
// by continued fraction, and the Student-t two-sided tail it implies.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, double dof);

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& rows);
Eigen::VectorXd take_rows(const Eigen::VectorXd& v, const std::vector<int>& rows);

}  // namespace agd
