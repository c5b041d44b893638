#include "agd/cut.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "agd/parallel.hpp"

namespace agd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Mean cross-validated score of the estimator on the parcel averages of the
// training rows, over prebuilt folds. Any failure yields -inf.
double score_parcellation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Parcellation& parcellation, const std::vector<Fold>& folds,
                          const Estimator& estimator, ScoreKind score,
                          std::atomic<long long>& fit_count) {
    try {
        Eigen::MatrixXd reduced = parcel_averages(X, parcellation);
        double total = 0.0;
        for (const Fold& fold : folds) {
            auto model = estimator.clone();
            fit_count.fetch_add(1);
            model->fit(take_rows(reduced, fold.train), take_rows(y, fold.train));
            Eigen::VectorXd pred = model->predict(take_rows(reduced, fold.test));
            total += score_value(score, take_rows(y, fold.test), pred);
        }
        return total / static_cast<double>(folds.size());
    } catch (const std::exception&) {
        return kNegInf;
    }
}

int clip_delta(const CutOptions& options, int p, CutTrace& trace) {
    if (options.delta_max < 1) throw invalid_input("cut: delta_max must be >= 1");
    if (options.delta_max > p - 1) {
        std::ostringstream msg;
        msg << "delta_max " << options.delta_max << " clipped to p-1 = " << (p - 1);
        trace.warnings.push_back(msg.str());
        return p - 1;
    }
    return options.delta_max;
}

void check_estimator_kind(const Estimator& estimator, ScoreKind score) {
    const bool wants_classifier = score == ScoreKind::kappa;
    if (estimator.is_classifier() != wants_classifier)
        throw invalid_input("cut: estimator does not match the score kind");
}

void select_best_delta(const Dataset& train, const Estimator& estimator,
                       const CutOptions& options, CutTrace& trace,
                       std::atomic<long long>& fit_count) {
    const auto folds =
        make_folds(options.cv_select, train.n(), train.groups);
    trace.selection_scores.assign(trace.parcellations.size(), kNegInf);
    parallel_for(
        trace.parcellations.size(),
        [&](std::size_t i) {
            trace.selection_scores[i] = score_parcellation(
                train.X, train.y, trace.parcellations[i], folds, estimator, options.score,
                fit_count);
        },
        options.threads);

    trace.chosen_delta = 1;
    for (std::size_t i = 1; i < trace.selection_scores.size(); ++i)
        if (trace.selection_scores[i] > trace.selection_scores[trace.chosen_delta - 1])
            trace.chosen_delta = static_cast<int>(i) + 1;
}

}  // namespace

CutTrace supervised_cut(const Dataset& train, const Dendrogram& tree, const Estimator& estimator,
                        const CutOptions& options) {
    train.validate();
    if (tree.leaf_count() != train.p())
        throw invalid_input("supervised_cut: tree leaf count does not match features");
    if (train.p() < 2) throw invalid_input("supervised_cut: need at least 2 features");
    check_estimator_kind(estimator, options.score);

    CutTrace trace;
    trace.score = options.score;
    const int delta_max = clip_delta(options, train.p(), trace);
    const auto explore_folds = make_folds(options.cv_explore, train.n(), train.groups);
    std::atomic<long long> fit_count{0};

    Parcellation current = root_parcellation(tree);
    for (int step = 1; step <= delta_max; ++step) {
        // every non-singleton parcel is a candidate split
        std::vector<int> candidates;
        for (int k = 0; k < current.delta(); ++k)
            if (!tree.is_leaf(current.parcel_nodes[k])) candidates.push_back(k);
        if (candidates.empty()) {
            trace.warnings.push_back("no splittable parcel left before reaching delta_max");
            break;
        }

        std::vector<Parcellation> refined(candidates.size());
        std::vector<double> scores(candidates.size(), kNegInf);
        parallel_for(
            candidates.size(),
            [&](std::size_t c) {
                refined[c] = refine(current, candidates[c], tree);
                scores[c] = score_parcellation(train.X, train.y, refined[c], explore_folds,
                                               estimator, options.score, fit_count);
            },
            options.threads);

        std::size_t best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c)
            if (scores[c] > scores[best]) best = c;  // ties keep the smallest parcel id
        if (scores[best] == kNegInf)
            throw degenerate_error("supervised_cut: every candidate split failed");

        trace.candidate_scores.emplace_back();
        for (std::size_t c = 0; c < candidates.size(); ++c)
            trace.candidate_scores.back().emplace_back(candidates[c], scores[c]);
        trace.exploration_scores.push_back(scores[best]);
        trace.chosen_splits.push_back(candidates[best]);
        current = std::move(refined[best]);
        trace.parcellations.push_back(current);
    }

    select_best_delta(train, estimator, options, trace, fit_count);
    trace.fit_count = fit_count.load();
    return trace;
}

CutTrace unsupervised_cut_select(const Dataset& train, const Dendrogram& tree,
                                 const Estimator& estimator, const CutOptions& options) {
    train.validate();
    if (tree.leaf_count() != train.p())
        throw invalid_input("unsupervised_cut_select: tree leaf count does not match features");
    if (train.p() < 2) throw invalid_input("unsupervised_cut_select: need at least 2 features");
    check_estimator_kind(estimator, options.score);

    CutTrace trace;
    trace.score = options.score;
    const int delta_max = clip_delta(options, train.p(), trace);
    std::atomic<long long> fit_count{0};

    for (int delta = 1; delta <= delta_max; ++delta)
        trace.parcellations.push_back(main_branches_cut(tree, delta));

    select_best_delta(train, estimator, options, trace, fit_count);
    trace.exploration_scores = trace.selection_scores;
    trace.fit_count = fit_count.load();
    return trace;
}

CutPrediction predict_with_cut(const CutTrace& trace, const Dataset& train, const Dataset& test,
                               const Estimator& estimator) {
    if (test.p() != train.p())
        throw invalid_input("predict_with_cut: test features do not match train features");
    const Parcellation& parcellation = trace.chosen();
    Eigen::MatrixXd reduced_train = parcel_averages(train.X, parcellation);
    Eigen::MatrixXd reduced_test = parcel_averages(test.X, parcellation);
    auto model = estimator.clone();
    model->fit(reduced_train, train.y);
    CutPrediction out;
    out.predictions = model->predict(reduced_test);
    out.score = score_value(trace.score, test.y, out.predictions);
    return out;
}

}  // namespace agd
