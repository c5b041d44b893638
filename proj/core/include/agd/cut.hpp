#pragma once

#include <string>
#include <utility>
#include <vector>

#include "agd/estimator.hpp"
#include "agd/evaluation.hpp"
#include "agd/grid.hpp"
#include "agd/parcellation.hpp"
#include "agd/ward.hpp"

namespace agd {

struct CutOptions {
    int delta_max = 50;                               // exploration steps
    FoldScheme cv_explore = FoldScheme::kfold(4);     // C_e, drives the splits
    FoldScheme cv_select = FoldScheme::kfold(4);      // C_s, picks the sub-tree
    ScoreKind score = ScoreKind::zeta;
    int threads = 1;
};

// The nested parcellation sequence produced by a cut search, with the
// per-step exploration scores, the per-delta selection scores, and the
// selected sub-tree. parcellations[k] holds P_{k+1}.
struct CutTrace {
    std::vector<Parcellation> parcellations;
    std::vector<double> exploration_scores;
    std::vector<double> selection_scores;
    // per step: (parcel id, mean C_e score) for every evaluated candidate
    std::vector<std::vector<std::pair<int, double>>> candidate_scores;
    std::vector<int> chosen_splits;  // parcel id committed at each step
    int chosen_delta = 1;            // 1-based index into parcellations
    ScoreKind score = ScoreKind::zeta;
    long long fit_count = 0;
    std::vector<std::string> warnings;

    const Parcellation& chosen() const { return parcellations.at(chosen_delta - 1); }
};

// Greedy top-down pruning: at each step, split the parcel whose candidate
// parcellation maximizes the C_e cross-validated score (ties: smallest
// parcel id), then pick the delta maximizing the C_s score (ties: smallest
// delta). A candidate whose estimator fails scores -inf and is never chosen.
CutTrace supervised_cut(const Dataset& train, const Dendrogram& tree, const Estimator& estimator,
                        const CutOptions& options);

// Cut into the delta main branches for delta = 1..Delta and select by C_s.
// Exploration scores are filled with the selection scores.
CutTrace unsupervised_cut_select(const Dataset& train, const Dendrogram& tree,
                                 const Estimator& estimator, const CutOptions& options);

struct CutPrediction {
    Eigen::VectorXd predictions;
    double score = 0.0;
};

// Apply the chosen parcellation to both sets, fit on the train averages,
// and score the test predictions.
CutPrediction predict_with_cut(const CutTrace& trace, const Dataset& train, const Dataset& test,
                               const Estimator& estimator);

}  // namespace agd
