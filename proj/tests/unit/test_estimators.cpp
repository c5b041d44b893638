#include <doctest.h>

#include <cmath>

#include "agd/estimators.hpp"
#include "agd/rng.hpp"
#include "oracles.hpp"

using namespace agd;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, int n, int d) {
    Eigen::MatrixXd X(n, d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) X(r, c) = rng.normal();
    return X;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("brr half-update equals closed-form ridge for frozen precisions") {
    Rng rng(100);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 4 + static_cast<int>(rng.below(20));
        int d = 1 + static_cast<int>(rng.below(8));
        Eigen::MatrixXd design = random_matrix(rng, n, d);
        Eigen::VectorXd y = random_matrix(rng, n, 1);
        double alpha = std::exp(rng.uniform(-2.0, 2.0));
        double lambda = std::exp(rng.uniform(-2.0, 2.0));
        Eigen::VectorXd mu = brr_posterior_mean(design, y, alpha, lambda);
        Eigen::VectorXd ridge = oracles::ridge_closed_form(design, y, alpha, lambda);
        CHECK((mu - ridge).norm() / ridge.norm() < 1e-9);
    }
}

TEST_CASE("brr recovers a noiseless linear target") {
    Rng rng(101);
    Eigen::MatrixXd X = random_matrix(rng, 120, 4);
    Eigen::VectorXd w(4);
    w << 1.0, -0.5, 2.0, 0.25;
    Eigen::VectorXd y = X * w + Eigen::VectorXd::Constant(120, 0.7);
    BrrFit fit = brr_fit(X, y);
    Eigen::VectorXd pred = brr_predict(fit, X);
    CHECK(explained_variance(y, pred) > 0.999);
    CHECK(fit.converged);
    CHECK(fit.alpha > 0);
    CHECK(fit.lambda > 0);
    CHECK(fit.gamma_eff >= 0.0);
    CHECK(fit.gamma_eff <= 5.0);
    // sigma is symmetric positive definite
    CHECK((fit.sigma - fit.sigma.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
    Eigen::LLT<Eigen::MatrixXd> llt(fit.sigma);
    CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("brr config defaults are the weakly informative priors") {
    BrrConfig config;
    CHECK(config.lambda1 == 1e-6);
    CHECK(config.lambda2 == 1e-6);
    CHECK(config.alpha1 == 1e-6);
    CHECK(config.alpha2 == 1e-6);
    CHECK(config.tol == 1e-3);
}

TEST_CASE("brr_predict basics and the recomputation oracle") {
    BrrFit fit;
    fit.mu.resize(3);
    fit.mu << 0.0, 0.0, 4.5;  // zero weights, intercept 4.5
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 2);
    Eigen::VectorXd pred = brr_predict(fit, X);
    for (int i = 0; i < 5; ++i) CHECK(pred(i) == 4.5);

    fit.mu.resize(2);
    fit.mu << 1.0, 0.0;  // identity on a single feature
    Eigen::MatrixXd X1 = Eigen::MatrixXd::Random(6, 1);
    CHECK(brr_predict(fit, X1) == X1.col(0));

    Rng rng(7);
    fit.mu = random_matrix(rng, 4, 1);
    Eigen::MatrixXd X3 = random_matrix(rng, 5, 3);
    Eigen::VectorXd expect(5);
    for (int i = 0; i < 5; ++i) {
        expect(i) = fit.mu(3);
        for (int j = 0; j < 3; ++j) expect(i) += X3(i, j) * fit.mu(j);
    }
    CHECK((brr_predict(fit, X3) - expect).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK_THROWS_AS(brr_predict(fit, Eigen::MatrixXd::Zero(2, 5)), invalid_input);
}

TEST_CASE("brr degenerate and invalid inputs") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(6, 2);
    CHECK_THROWS_AS(brr_fit(X, Eigen::VectorXd::Constant(6, 3.0)), degenerate_error);
    Eigen::VectorXd y = Eigen::VectorXd::Random(6);
    Eigen::MatrixXd bad = X;
    bad(1, 1) = std::nan("");
    CHECK_THROWS_AS(brr_fit(bad, y), invalid_input);
}

TEST_CASE("effective dof limits in lambda") {
    Rng rng(11);
    Eigen::MatrixXd design = random_matrix(rng, 12, 5);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design);
    Eigen::VectorXd s = svd.singularValues().array().square();
    double alpha = 1.7;
    // lambda -> 0: gamma approaches the number of nonzero eigenvalues
    CHECK(brr_effective_dof(s, alpha, 1e-14) == doctest::Approx(5.0).epsilon(1e-9));
    // lambda -> inf: gamma -> 0
    CHECK(brr_effective_dof(s, alpha, 1e14) == doctest::Approx(0.0));
    // monotone decreasing in lambda
    double prev = 5.0;
    for (double lambda : {1e-6, 1e-3, 1.0, 1e3, 1e6}) {
        double g = brr_effective_dof(s, alpha, lambda);
        CHECK(g <= prev + 1e-12);
        prev = g;
    }
}

TEST_CASE("enet zeroes out at lambda_max") {
    Rng rng(200);
    Eigen::MatrixXd X = random_matrix(rng, 30, 6);
    Eigen::VectorXd y = random_matrix(rng, 30, 1);
    double lmax = enet_lambda_max(X, y);
    for (double l2 : {0.0, 1.0}) {
        LinearModel model = enet_fit(X, y, lmax, l2);
        CHECK(model.w.head(6).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK(model.intercept() == doctest::Approx(y.mean()));
    }
}

TEST_CASE("unpenalized enet matches the normal-equations oracle") {
    Rng rng(201);
    Eigen::MatrixXd X = random_matrix(rng, 40, 5);
    Eigen::VectorXd w_true(5);
    w_true << 1.0, -2.0, 0.0, 0.5, 3.0;
    Eigen::VectorXd y = X * w_true + 0.01 * random_matrix(rng, 40, 1);

    Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
    Eigen::VectorXd yc = y.array() - y.mean();
    Eigen::VectorXd ols = (Xc.transpose() * Xc).ldlt().solve(Xc.transpose() * yc);

    LinearModel model = enet_fit(X, y, 0.0, 0.0);
    CHECK((model.w.head(5) - ols).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("enet 1d identity example") {
    Eigen::MatrixXd X(3, 1);
    X << 1.0, 2.0, 3.0;
    Eigen::VectorXd y(3);
    y << 1.0, 2.0, 3.0;
    LinearModel model = enet_fit(X, y, 0.0, 0.0);
    CHECK(model.w(0) == doctest::Approx(1.0));
    CHECK(model.intercept() == doctest::Approx(0.0));
}

TEST_CASE("enet solutions satisfy the KKT conditions") {
    Rng rng(202);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 10 + static_cast<int>(rng.below(30));
        int d = 2 + static_cast<int>(rng.below(8));
        Eigen::MatrixXd X = random_matrix(rng, n, d);
        Eigen::VectorXd y = random_matrix(rng, n, 1);
        double l1 = std::exp(rng.uniform(-2.0, 2.0));
        double l2 = std::exp(rng.uniform(-3.0, 2.0));
        LinearModel model = enet_fit(X, y, l1, l2);

        Eigen::MatrixXd Xc = X.rowwise() - X.colwise().mean();
        Eigen::VectorXd yc = y.array() - y.mean();
        Eigen::VectorXd w = model.w.head(d);
        Eigen::VectorXd grad = Xc.transpose() * (yc - Xc * w);
        for (int j = 0; j < d; ++j) {
            if (w(j) == 0.0) {
                CHECK(std::fabs(grad(j)) <= l1 + 1e-5);
            } else {
                CHECK(grad(j) - l2 * w(j) ==
                      doctest::Approx(l1 * (w(j) > 0 ? 1.0 : -1.0)).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("svc separates a trivial pair") {
    Eigen::MatrixXd X(2, 1);
    X << 1.0, -1.0;
    Eigen::VectorXd y(2);
    y << 1.0, -1.0;
    LinearModel model = svc_fit(X, y, 1.0);
    Eigen::VectorXd dec = linear_predict(model, X);
    CHECK(dec(0) > 0.0);
    CHECK(dec(1) < 0.0);
}

TEST_CASE("contradictory duplicates tie toward the smaller class") {
    Eigen::MatrixXd X(2, 1);
    X << 1.0, 1.0;
    Eigen::VectorXd y(2);
    y << 1.0, -1.0;
    SvcModel model = svc_fit_multiclass(X, y, 1.0);
    Eigen::VectorXd dec = linear_predict(model.machines[0], X);
    CHECK(dec(0) == doctest::Approx(0.0).epsilon(1e-10));
    Eigen::VectorXd pred = svc_predict(model, X);
    CHECK(pred(0) == -1.0);
    CHECK(pred(1) == -1.0);
}

TEST_CASE("svc reaches the dual optimum on random separable data") {
    Rng rng(300);
    for (int trial = 0; trial < 8; ++trial) {
        int per_class = 4 + static_cast<int>(rng.below(4));
        Eigen::MatrixXd X(2 * per_class, 2);
        Eigen::VectorXd y(2 * per_class);
        for (int i = 0; i < per_class; ++i) {
            X.row(i) << rng.normal() * 0.3 + 3.0, rng.normal() * 0.3;
            y(i) = 1.0;
            X.row(per_class + i) << rng.normal() * 0.3 - 3.0, rng.normal() * 0.3;
            y(per_class + i) = -1.0;
        }
        double C = 1.0;
        LinearModel model = svc_fit(X, y, C);
        Eigen::VectorXd dec = linear_predict(model, X);
        for (int i = 0; i < 2 * per_class; ++i) CHECK(dec(i) * y(i) > 0.0);  // zero error
        // strong duality: primal objective == -(dual minimum)
        double primal = oracles::svc_primal_objective(X, y, model.w, C);
        double dual = oracles::svc_dual_optimum(X, y, C);
        CHECK(primal == doctest::Approx(-dual).epsilon(1e-6));
    }
}

TEST_CASE("svc decision is invariant under duplicating the training set") {
    // valid whenever no alpha sits at the box bound, i.e. well-separated data
    Rng rng(301);
    Eigen::MatrixXd X(8, 2);
    Eigen::VectorXd y(8);
    for (int i = 0; i < 4; ++i) {
        X.row(i) << rng.normal() * 0.2 + 2.5, rng.normal() * 0.2;
        y(i) = 1.0;
        X.row(4 + i) << rng.normal() * 0.2 - 2.5, rng.normal() * 0.2;
        y(4 + i) = -1.0;
    }
    Eigen::MatrixXd X2(16, 2);
    X2 << X, X;
    Eigen::VectorXd y2(16);
    y2 << y, y;
    LinearModel a = svc_fit(X, y, 10.0);
    LinearModel b = svc_fit(X2, y2, 10.0);
    Eigen::MatrixXd probe = random_matrix(rng, 20, 2);
    CHECK((linear_predict(a, probe) - linear_predict(b, probe)).lpNorm<Eigen::Infinity>() <
          1e-5);
}

TEST_CASE("svc input validation") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(4, 2);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(svc_fit(X, ones, 1.0), degenerate_error);
    Eigen::VectorXd bad(4);
    bad << 1.0, -1.0, 2.0, -1.0;
    CHECK_THROWS_AS(svc_fit(X, bad, 1.0), invalid_input);
}

TEST_CASE("multiclass one-vs-rest on three separated blobs") {
    Rng rng(302);
    Eigen::MatrixXd X(30, 2);
    Eigen::VectorXd y(30);
    const double centers[3][2] = {{4.0, 0.0}, {-4.0, 0.0}, {0.0, 4.0}};
    for (int i = 0; i < 30; ++i) {
        int cls = i % 3;
        X.row(i) << centers[cls][0] + rng.normal() * 0.3, centers[cls][1] + rng.normal() * 0.3;
        y(i) = static_cast<double>(cls);
    }
    SvcModel model = svc_fit_multiclass(X, y, 1.0);
    CHECK(model.machines.size() == 3);
    CHECK(accuracy(y, svc_predict(model, X)) == 1.0);
}

TEST_CASE("anova picks the perfect correlate") {
    Rng rng(400);
    Eigen::MatrixXd X = random_matrix(rng, 50, 8);
    Eigen::VectorXd y = X.col(3) + 0.001 * random_matrix(rng, 50, 1);
    auto picked = anova_select(X, y, 1, TargetKind::regression);
    CHECK(picked == std::vector<int>{3});
    auto all = anova_select(X, y, 8, TargetKind::regression);
    CHECK(all.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(all[j] == j);
    CHECK_THROWS_AS(anova_select(X, y, 9, TargetKind::regression), invalid_input);
}

TEST_CASE("classification F matches the hand computation on 4 samples") {
    Eigen::MatrixXd X(4, 2);
    X.col(0) << 0.0, 0.2, 1.0, 0.8;  // mean-shifted across classes
    X.col(1) << 0.5, -0.5, 0.5, -0.5;
    Eigen::VectorXd y(4);
    y << 0.0, 0.0, 1.0, 1.0;
    Eigen::VectorXd f = anova_f_scores(X, y, TargetKind::classification);
    // between = 2*(0.1-0.5)^2 + 2*(0.9-0.5)^2 = 0.64 on 1 dof;
    // within = 4*0.01 = 0.04 on 2 dof; F = 0.64/0.02 = 32
    CHECK(f(0) == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(anova_select(X, y, 1, TargetKind::classification) == std::vector<int>{0});
}

TEST_CASE("anova selection invariances") {
    Rng rng(401);
    Eigen::MatrixXd X = random_matrix(rng, 40, 6);
    Eigen::VectorXd y = random_matrix(rng, 40, 1);
    auto base = anova_select(X, y, 3, TargetKind::regression);
    auto scaled = anova_select(X, (y * 7.0).eval(), 3, TargetKind::regression);
    CHECK(base == scaled);

    Eigen::VectorXd labels(40);
    for (int i = 0; i < 40; ++i) labels(i) = static_cast<double>(i % 3);
    auto cls = anova_select(X, labels, 3, TargetKind::classification);
    Eigen::VectorXd relabeled(40);
    for (int i = 0; i < 40; ++i) relabeled(i) = 10.0 - labels(i);
    CHECK(anova_select(X, relabeled, 3, TargetKind::classification) == cls);
}

TEST_CASE("estimator registry round trip") {
    CHECK(make_estimator("brr")->name() == "brr");
    CHECK(make_estimator("svc")->is_classifier());
    CHECK(make_estimator("svc:0.5")->fitted_params()[0].second == 0.5);
    CHECK(make_estimator("enet:1.0,2.0")->name() == "enet");
    CHECK(make_estimator("anova+brr")->name() == "anova+brr");
    CHECK_THROWS_AS(make_estimator("nope"), invalid_input);
    CHECK_THROWS_AS(make_estimator("svc:-1"), invalid_input);
}

TEST_CASE("cv-tuned estimators pick sensible grid points") {
    Rng rng(500);
    // sparse truth: enet_cv should recover good predictions
    Eigen::MatrixXd X = random_matrix(rng, 60, 10);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(10);
    w(2) = 2.0;
    w(7) = -1.5;
    Eigen::VectorXd y = X * w + 0.05 * random_matrix(rng, 60, 1);
    auto enet = make_estimator("enet_cv", 42);
    enet->fit(X, y);
    CHECK(explained_variance(y, enet->predict(X)) > 0.95);
    auto params = enet->fitted_params();
    REQUIRE(params.size() == 2);
    CHECK(params[0].first == "lambda1");

    auto anova = make_estimator("anova+brr", 42);
    anova->fit(X, y);
    CHECK(explained_variance(y, anova->predict(X)) > 0.9);
    CHECK(anova->fitted_params()[0].first == "k");
}

}  // TEST_SUITE
