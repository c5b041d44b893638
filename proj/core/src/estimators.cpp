#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include "agd/estimators.hpp"

namespace agd {

namespace {

class BrrEstimator final : public Estimator {
public:
    explicit BrrEstimator(BrrConfig config = {}) : config_(config) {}

    std::unique_ptr<Estimator> clone() const override {
        return std::make_unique<BrrEstimator>(*this);
    }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
        fit_ = brr_fit(X, y, config_);
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
        if (!fit_) throw invalid_input("BrrEstimator: not fitted");
        return brr_predict(*fit_, X);
    }
    std::string name() const override { return "brr"; }
    Eigen::VectorXd weights() const override {
        if (!fit_) throw invalid_input("BrrEstimator: not fitted");
        return fit_->mu;
    }
    std::vector<std::pair<std::string, double>> fitted_params() const override {
        if (!fit_) return {};
        return {{"alpha", fit_->alpha},
                {"lambda", fit_->lambda},
                {"gamma_eff", fit_->gamma_eff},
                {"iterations", static_cast<double>(fit_->iterations)},
                {"converged", fit_->converged ? 1.0 : 0.0}};
    }

private:
    BrrConfig config_;
    std::optional<BrrFit> fit_;
};

class EnetEstimator final : public Estimator {
public:
    EnetEstimator(double lambda1, double lambda2) : lambda1_(lambda1), lambda2_(lambda2) {}

    std::unique_ptr<Estimator> clone() const override {
        return std::make_unique<EnetEstimator>(*this);
    }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
        model_ = enet_fit(X, y, lambda1_, lambda2_);
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
        if (!model_) throw invalid_input("EnetEstimator: not fitted");
        return linear_predict(*model_, X);
    }
    std::string name() const override { return "enet"; }
    Eigen::VectorXd weights() const override {
        if (!model_) throw invalid_input("EnetEstimator: not fitted");
        return model_->w;
    }
    std::vector<std::pair<std::string, double>> fitted_params() const override {
        return {{"lambda1", lambda1_}, {"lambda2", lambda2_}};
    }

private:
    double lambda1_, lambda2_;
    std::optional<LinearModel> model_;
};

class SvcEstimator final : public Estimator {
public:
    explicit SvcEstimator(double C) : C_(C) {}

    std::unique_ptr<Estimator> clone() const override {
        return std::make_unique<SvcEstimator>(*this);
    }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
        model_ = svc_fit_multiclass(X, y, C_);
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
        if (!model_) throw invalid_input("SvcEstimator: not fitted");
        return svc_predict(*model_, X);
    }
    bool is_classifier() const override { return true; }
    std::string name() const override { return "svc"; }
    Eigen::VectorXd weights() const override {
        if (!model_) throw invalid_input("SvcEstimator: not fitted");
        if (model_->machines.size() != 1)
            throw invalid_input("SvcEstimator: no single weight vector for multiclass");
        return model_->machines[0].w;
    }
    std::vector<std::pair<std::string, double>> fitted_params() const override {
        return {{"C", C_}};
    }

private:
    double C_;
    std::optional<SvcModel> model_;
};

// Shared driver for estimators that pick hyperparameters by internal CV.
// Grid points failing their CV (degenerate folds etc.) are skipped.
template <typename Candidate>
std::size_t pick_best(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<Candidate>& grid,
                      const std::function<std::unique_ptr<Estimator>(const Candidate&)>& build,
                      ScoreKind score, std::uint64_t seed) {
    const int n = static_cast<int>(X.rows());
    FoldScheme inner = FoldScheme::kfold(std::min(4, n), seed);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    bool any = false;
    std::string last_error = "empty grid";
    for (std::size_t g = 0; g < grid.size(); ++g) {
        try {
            auto est = build(grid[g]);
            CvResult cv = cross_val_score(*est, X, y, inner, score);
            if (cv.mean > best) {
                best = cv.mean;
                best_idx = g;
            }
            any = true;
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    if (!any) throw degenerate_error(std::string("grid search failed: ") + last_error);
    return best_idx;
}

class EnetCvEstimator final : public Estimator {
public:
    explicit EnetCvEstimator(std::uint64_t seed) : seed_(seed) {}

    std::unique_ptr<Estimator> clone() const override {
        return std::make_unique<EnetCvEstimator>(*this);
    }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
        const double lmax = enet_lambda_max(X, y);
        std::vector<std::pair<double, double>> grid;
        for (double f : {0.2, 0.1, 0.05, 0.01})
            for (double l2 : {0.1, 0.5, 1.0, 10.0, 100.0}) grid.push_back({f * lmax, l2});
        std::size_t best = pick_best<std::pair<double, double>>(
            X, y, grid,
            [](const std::pair<double, double>& g) {
                return std::make_unique<EnetEstimator>(g.first, g.second);
            },
            ScoreKind::zeta, seed_);
        lambda1_ = grid[best].first;
        lambda2_ = grid[best].second;
        model_ = enet_fit(X, y, lambda1_, lambda2_);
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
        if (!model_) throw invalid_input("EnetCvEstimator: not fitted");
        return linear_predict(*model_, X);
    }
    std::string name() const override { return "enet_cv"; }
    Eigen::VectorXd weights() const override {
        if (!model_) throw invalid_input("EnetCvEstimator: not fitted");
        return model_->w;
    }
    std::vector<std::pair<std::string, double>> fitted_params() const override {
        return {{"lambda1", lambda1_}, {"lambda2", lambda2_}};
    }

private:
    std::uint64_t seed_;
    double lambda1_ = 0.0, lambda2_ = 0.0;
    std::optional<LinearModel> model_;
};

class SvcCvEstimator final : public Estimator {
public:
    explicit SvcCvEstimator(std::uint64_t seed) : seed_(seed) {}

    std::unique_ptr<Estimator> clone() const override {
        return std::make_unique<SvcCvEstimator>(*this);
    }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
        std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
        std::size_t best = pick_best<double>(
            X, y, grid, [](const double& c) { return std::make_unique<SvcEstimator>(c); },
            ScoreKind::kappa, seed_);
        C_ = grid[best];
        model_ = svc_fit_multiclass(X, y, C_);
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
        if (!model_) throw invalid_input("SvcCvEstimator: not fitted");
        return svc_predict(*model_, X);
    }
    bool is_classifier() const override { return true; }
    std::string name() const override { return "svc_cv"; }
    Eigen::VectorXd weights() const override {
        if (!model_ || model_->machines.size() != 1)
            throw invalid_input("SvcCvEstimator: no single weight vector");
        return model_->machines[0].w;
    }
    std::vector<std::pair<std::string, double>> fitted_params() const override {
        return {{"C", C_}};
    }

private:
    std::uint64_t seed_;
    double C_ = 0.0;
    std::optional<SvcModel> model_;
};

class AnovaEstimator final : public Estimator {
public:
    AnovaEstimator(std::unique_ptr<Estimator> inner, std::uint64_t seed)
        : inner_(std::move(inner)), seed_(seed) {}

    AnovaEstimator(const AnovaEstimator& other)
        : inner_(other.inner_->clone()),
          seed_(other.seed_),
          k_(other.k_),
          selected_(other.selected_),
          fitted_(other.fitted_ ? other.fitted_->clone() : nullptr) {}

    std::unique_ptr<Estimator> clone() const override {
        return std::make_unique<AnovaEstimator>(*this);
    }
    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
        const int p = static_cast<int>(X.cols());
        const TargetKind target =
            inner_->is_classifier() ? TargetKind::classification : TargetKind::regression;
        std::vector<int> k_grid;
        for (int k : {50, 100, 250, 500})
            if (k <= p) k_grid.push_back(k);
        if (k_grid.empty()) k_grid.push_back(p);

        std::size_t best = pick_best<int>(
            X, y, k_grid,
            [&](const int& k) -> std::unique_ptr<Estimator> {
                auto sel = anova_select(X, y, k, target);
                return std::make_unique<Restricted>(inner_->clone(), sel);
            },
            inner_->is_classifier() ? ScoreKind::kappa : ScoreKind::zeta, seed_);
        k_ = k_grid[best];

        selected_ = anova_select(X, y, k_, target);
        Eigen::MatrixXd Xs(X.rows(), selected_.size());
        for (std::size_t j = 0; j < selected_.size(); ++j) Xs.col(j) = X.col(selected_[j]);
        fitted_ = inner_->clone();
        fitted_->fit(Xs, y);
    }
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
        if (!fitted_) throw invalid_input("AnovaEstimator: not fitted");
        Eigen::MatrixXd Xs(X.rows(), selected_.size());
        for (std::size_t j = 0; j < selected_.size(); ++j) Xs.col(j) = X.col(selected_[j]);
        return fitted_->predict(Xs);
    }
    bool is_classifier() const override { return inner_->is_classifier(); }
    std::string name() const override { return "anova+" + inner_->name(); }
    Eigen::VectorXd weights() const override {
        throw invalid_input("AnovaEstimator: weights live on the selected subspace");
    }
    std::vector<std::pair<std::string, double>> fitted_params() const override {
        std::vector<std::pair<std::string, double>> out = {{"k", static_cast<double>(k_)}};
        if (fitted_)
            for (auto& kv : fitted_->fitted_params()) out.push_back(kv);
        return out;
    }

    const std::vector<int>& selected() const { return selected_; }

private:
    // inner estimator viewed through a fixed column subset
    class Restricted final : public Estimator {
    public:
        Restricted(std::unique_ptr<Estimator> inner, std::vector<int> cols)
            : inner_(std::move(inner)), cols_(std::move(cols)) {}
        Restricted(const Restricted& other)
            : inner_(other.inner_->clone()), cols_(other.cols_) {}

        std::unique_ptr<Estimator> clone() const override {
            return std::make_unique<Restricted>(*this);
        }
        void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
            inner_->fit(take(X), y);
        }
        Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
            return inner_->predict(take(X));
        }
        bool is_classifier() const override { return inner_->is_classifier(); }
        std::string name() const override { return "restricted+" + inner_->name(); }
        Eigen::VectorXd weights() const override { return inner_->weights(); }

    private:
        Eigen::MatrixXd take(const Eigen::MatrixXd& X) const {
            Eigen::MatrixXd out(X.rows(), cols_.size());
            for (std::size_t j = 0; j < cols_.size(); ++j) out.col(j) = X.col(cols_[j]);
            return out;
        }
        std::unique_ptr<Estimator> inner_;
        std::vector<int> cols_;
    };

    std::unique_ptr<Estimator> inner_;
    std::uint64_t seed_;
    int k_ = 0;
    std::vector<int> selected_;
    std::unique_ptr<Estimator> fitted_;
};

}  // namespace

std::unique_ptr<Estimator> make_estimator(const std::string& id, std::uint64_t cv_seed) {
    if (id == "brr") return std::make_unique<BrrEstimator>();
    if (id == "enet_cv") return std::make_unique<EnetCvEstimator>(cv_seed);
    if (id == "svc_cv") return std::make_unique<SvcCvEstimator>(cv_seed);
    if (id == "svc") return std::make_unique<SvcEstimator>(0.01);
    if (id.rfind("svc:", 0) == 0) {
        double C = std::atof(id.c_str() + 4);
        if (C <= 0) throw invalid_input("make_estimator: bad C in '" + id + "'");
        return std::make_unique<SvcEstimator>(C);
    }
    if (id.rfind("enet:", 0) == 0) {
        double l1 = 0, l2 = 0;
        if (std::sscanf(id.c_str() + 5, "%lf,%lf", &l1, &l2) != 2 || l1 < 0 || l2 < 0)
            throw invalid_input("make_estimator: bad penalties in '" + id + "'");
        return std::make_unique<EnetEstimator>(l1, l2);
    }
    if (id.rfind("anova+", 0) == 0)
        return std::make_unique<AnovaEstimator>(make_estimator(id.substr(6), cv_seed), cv_seed);
    throw invalid_input("make_estimator: unknown estimator '" + id + "'");
}

void export_model_csv(const Eigen::VectorXd& weights_with_intercept, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_input("export_model_csv: cannot open " + path + " for writing");
    out << "index,weight\n";
    char buf[32];
    const Eigen::Index d = weights_with_intercept.size() - 1;
    for (Eigen::Index j = 0; j < d; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", weights_with_intercept(j));
        out << j << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", weights_with_intercept(d));
    out << "intercept," << buf << '\n';
    if (!out) throw std::runtime_error("export_model_csv: write failed for " + path);
}

}  // namespace agd
