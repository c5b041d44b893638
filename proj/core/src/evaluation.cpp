#include "agd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "agd/parallel.hpp"
#include "agd/rng.hpp"

namespace agd {

namespace {

double population_variance(const Eigen::VectorXd& v) {
    double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size());
}

bool is_constant(const Eigen::VectorXd& v) { return v.maxCoeff() == v.minCoeff(); }

}  // namespace

double explained_variance(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size())
        throw invalid_input("explained_variance: length mismatch");
    if (y_true.size() < 2) throw invalid_input("explained_variance: need at least 2 samples");
    if (is_constant(y_true)) throw degenerate_error("explained_variance: constant target");
    double var_y = population_variance(y_true);
    double var_res = population_variance(y_true - y_pred);
    return (var_y - var_res) / var_y;
}

double accuracy(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size()) throw invalid_input("accuracy: length mismatch");
    if (y_true.size() < 1) throw invalid_input("accuracy: empty input");
    int hits = 0;
    for (Eigen::Index i = 0; i < y_true.size(); ++i)
        if (y_true(i) == y_pred(i)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double score_value(ScoreKind kind, const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    return kind == ScoreKind::zeta ? explained_variance(y_true, y_pred)
                                   : accuracy(y_true, y_pred);
}

FoldScheme FoldScheme::parse(const std::string& text, std::uint64_t seed) {
    if (text == "loo") return leave_one_out();
    if (text == "logo") return leave_one_group_out();
    if (text.rfind("kfold:", 0) == 0) {
        int k = std::atoi(text.c_str() + 6);
        if (k < 2) throw invalid_input("FoldScheme: kfold needs k >= 2, got '" + text + "'");
        return kfold(k, seed);
    }
    throw invalid_input("FoldScheme: unknown scheme '" + text + "' (want kfold:K, loo, logo)");
}

std::string FoldScheme::to_string() const {
    switch (kind) {
        case Kind::kfold: {
            std::ostringstream s;
            s << "kfold:" << k;
            return s.str();
        }
        case Kind::leave_one_out:
            return "loo";
        case Kind::leave_one_group_out:
            return "logo";
    }
    return "?";
}

std::vector<Fold> make_folds(const FoldScheme& scheme, int n,
                             const std::optional<Eigen::VectorXi>& groups) {
    if (n < 2) throw invalid_input("make_folds: need at least 2 samples");
    std::vector<std::vector<int>> test_sets;

    switch (scheme.kind) {
        case FoldScheme::Kind::kfold: {
            if (scheme.k < 2 || scheme.k > n)
                throw invalid_input("make_folds: kfold k out of range");
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 0);
            Rng rng(scheme.seed);
            rng.stream("folds").shuffle(order);
            test_sets.resize(scheme.k);
            // first n % k folds take one extra sample
            int base = n / scheme.k, extra = n % scheme.k;
            int pos = 0;
            for (int f = 0; f < scheme.k; ++f) {
                int len = base + (f < extra ? 1 : 0);
                test_sets[f].assign(order.begin() + pos, order.begin() + pos + len);
                std::sort(test_sets[f].begin(), test_sets[f].end());
                pos += len;
            }
            break;
        }
        case FoldScheme::Kind::leave_one_out: {
            test_sets.resize(n);
            for (int i = 0; i < n; ++i) test_sets[i] = {i};
            break;
        }
        case FoldScheme::Kind::leave_one_group_out: {
            if (!groups) throw invalid_input("make_folds: leave_one_group_out requires groups");
            if (groups->size() != n) throw invalid_input("make_folds: groups length mismatch");
            std::map<int, std::vector<int>> by_group;
            for (int i = 0; i < n; ++i) by_group[(*groups)(i)].push_back(i);
            if (by_group.size() < 2)
                throw invalid_input("make_folds: need at least 2 groups");
            for (auto& [g, idx] : by_group) test_sets.push_back(std::move(idx));
            break;
        }
    }

    std::vector<Fold> folds(test_sets.size());
    std::vector<char> in_test(n, 0);
    for (std::size_t f = 0; f < test_sets.size(); ++f) {
        folds[f].test = test_sets[f];
        for (int i : folds[f].test) in_test[i] = 1;
        for (int i = 0; i < n; ++i)
            if (!in_test[i]) folds[f].train.push_back(i);
        for (int i : folds[f].test) in_test[i] = 0;
        if (folds[f].train.empty() || folds[f].test.empty())
            throw invalid_input("make_folds: fold with empty train or test side");
    }
    return folds;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& rows) {
    Eigen::MatrixXd out(rows.size(), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = X.row(rows[i]);
    return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& v, const std::vector<int>& rows) {
    Eigen::VectorXd out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out(i) = v(rows[i]);
    return out;
}

CvResult cross_val_score(const Estimator& estimator, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y, const FoldScheme& scheme, ScoreKind score,
                         const std::optional<Eigen::VectorXi>& groups,
                         std::atomic<long long>* fit_counter, int threads) {
    if (X.rows() != y.size()) throw invalid_input("cross_val_score: X/y row mismatch");
    const auto folds = make_folds(scheme, static_cast<int>(X.rows()), groups);

    CvResult result;
    result.per_fold.assign(folds.size(), 0.0);
    std::vector<std::string> fold_errors(folds.size());

    parallel_for(
        folds.size(),
        [&](std::size_t f) {
            try {
                auto model = estimator.clone();
                if (fit_counter) fit_counter->fetch_add(1);
                model->fit(take_rows(X, folds[f].train), take_rows(y, folds[f].train));
                Eigen::VectorXd pred = model->predict(take_rows(X, folds[f].test));
                result.per_fold[f] = score_value(score, take_rows(y, folds[f].test), pred);
            } catch (const std::exception& e) {
                fold_errors[f] = e.what();
            }
        },
        threads);

    for (std::size_t f = 0; f < folds.size(); ++f)
        if (!fold_errors[f].empty()) {
            std::ostringstream msg;
            msg << "cross_val_score: fold " << f << " failed: " << fold_errors[f];
            throw degenerate_error(msg.str());
        }

    result.mean = std::accumulate(result.per_fold.begin(), result.per_fold.end(), 0.0) /
                  static_cast<double>(result.per_fold.size());
    return result;
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    return h;  // converged to machine precision in practice well before this
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw invalid_input("incomplete beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0) throw invalid_input("student_t_two_sided_p: dof must be positive");
    if (std::isinf(t)) return 0.0;
    double x = dof / (dof + t * t);
    return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

double paired_t_test(const Eigen::VectorXd& scores_a, const Eigen::VectorXd& scores_b) {
    if (scores_a.size() != scores_b.size()) throw invalid_input("paired_t_test: length mismatch");
    const Eigen::Index n = scores_a.size();
    if (n < 2) throw invalid_input("paired_t_test: need at least 2 pairs");
    Eigen::VectorXd d = scores_a - scores_b;
    double mean = d.mean();
    double ss = (d.array() - mean).square().sum();
    if (ss == 0.0) throw degenerate_error("paired_t_test: zero-variance differences");
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    double t = mean * std::sqrt(static_cast<double>(n)) / sd;
    return student_t_two_sided_p(t, static_cast<double>(n - 1));
}

}  // namespace agd
