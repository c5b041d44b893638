#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace agd {

// A prediction function: fit on a design matrix and target, predict on new
// rows. Fitted instances are immutable in use; concurrent drivers clone one
// prototype per worker.
class Estimator {
public:
    virtual ~Estimator() = default;

    virtual std::unique_ptr<Estimator> clone() const = 0;
    virtual void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) = 0;
    virtual Eigen::VectorXd predict(const Eigen::MatrixXd& X) const = 0;

    virtual bool is_classifier() const { return false; }
    virtual std::string name() const = 0;

    // Primal weights of the fitted model, intercept last. Estimators that
    // tune hyperparameters report the chosen values through fitted_params.
    virtual Eigen::VectorXd weights() const = 0;
    virtual std::vector<std::pair<std::string, double>> fitted_params() const { return {}; }
};

}  // namespace agd
