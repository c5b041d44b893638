#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "agd/errors.hpp"
#include "agd/estimator.hpp"
#include "agd/evaluation.hpp"

namespace agd {

// Fitted linear predictor; the intercept rides along as the last entry of w.
struct LinearModel {
    Eigen::VectorXd w;

    int feature_count() const { return static_cast<int>(w.size()) - 1; }
    double intercept() const { return w(w.size() - 1); }
};

Eigen::VectorXd linear_predict(const LinearModel& model, const Eigen::MatrixXd& X);

// ---------------------------------------------------------------------------
// Bayesian Ridge Regression

struct BrrConfig {
    double lambda1 = 1e-6;  // Gamma hyperprior on the weight precision
    double lambda2 = 1e-6;
    double alpha1 = 1e-6;  // Gamma hyperprior on the noise precision
    double alpha2 = 1e-6;
    int max_iter = 300;
    double tol = 1e-3;  // L1 norm of the weight update
};

struct BrrFit {
    Eigen::VectorXd mu;     // posterior mean, length d+1 (intercept last)
    Eigen::MatrixXd sigma;  // posterior covariance, (d+1)x(d+1)
    double alpha = 0.0;     // noise precision
    double lambda = 0.0;    // weight precision
    double gamma_eff = 0.0; // effective degrees of freedom
    int iterations = 0;
    bool converged = false;
};

// Evidence-maximizing BRR. A ones column is appended to X internally; the
// intercept coefficient is regularized along with the rest of w. Eigenvalues
// of the augmented design's Gram matrix come from one SVD per fit.
BrrFit brr_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const BrrConfig& config = {});

Eigen::VectorXd brr_predict(const BrrFit& fit, const Eigen::MatrixXd& X);

// Posterior mean/covariance for frozen alpha and lambda on an explicit
// design (no intercept handling). mu = alpha * Sigma * design^T y,
// Sigma = (lambda I + alpha design^T design)^-1.
Eigen::VectorXd brr_posterior_mean(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                   double alpha, double lambda);

// gamma = sum_i alpha s_i / (lambda + alpha s_i) over the Gram eigenvalues.
double brr_effective_dof(const Eigen::VectorXd& gram_eigenvalues, double alpha, double lambda);

// ---------------------------------------------------------------------------
// Elastic net by cyclic coordinate descent

// Minimizes 1/2 ||y - Xw||^2 + lambda1 ||w||_1 + lambda2/2 ||w||^2.
// Columns of X and y are centered internally; the intercept is recovered
// after the fit and never penalized.
LinearModel enet_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda1,
                     double lambda2);

// ||Xc^T yc||_inf on the centered data: the smallest lambda1 that zeroes w.
double enet_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// ---------------------------------------------------------------------------
// Linear SVC by dual coordinate descent

// L2-regularized hinge loss on +/-1 labels; a regularized ones column acts
// as the intercept. Returns primal weights (intercept last).
LinearModel svc_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y_pm1, double C);

// Multiclass one-vs-rest: one binary machine per class, argmax decision.
struct SvcModel {
    std::vector<double> classes;          // ascending
    std::vector<LinearModel> machines;    // size 1 when binary
};

SvcModel svc_fit_multiclass(const Eigen::MatrixXd& X, const Eigen::VectorXd& labels, double C);
Eigen::VectorXd svc_predict(const SvcModel& model, const Eigen::MatrixXd& X);

// ---------------------------------------------------------------------------
// Univariate ANOVA screening

enum class TargetKind { regression, classification };

// Indices of the k features with the largest F statistics (ascending order;
// ties keep the smaller index).
std::vector<int> anova_select(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int k,
                              TargetKind target);

Eigen::VectorXd anova_f_scores(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               TargetKind target);

// ---------------------------------------------------------------------------
// Estimator wrappers and registry

// brr                      Bayesian ridge (paper defaults)
// svc / svc:C              fixed-C linear SVC (default C = 0.01)
// enet:L1,L2               fixed-penalty elastic net
// enet_cv                  elastic net tuned on the paper's (L1,L2) grid
// svc_cv                   SVC tuned on the C grid 1e-3..10
// anova+<inner>            ANOVA screening (k in {50,100,250,500}) + inner
// Tuned estimators run an internal 4-fold CV seeded from cv_seed.
std::unique_ptr<Estimator> make_estimator(const std::string& id, std::uint64_t cv_seed = 0);

void export_model_csv(const Eigen::VectorXd& weights_with_intercept, const std::string& path);

}  // namespace agd
