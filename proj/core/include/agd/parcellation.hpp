#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "agd/grid.hpp"
#include "agd/ward.hpp"

namespace agd {

// A partition of the p features into parcels, each parcel tied to a
// dendrogram node. Parcel ids are canonicalized by first feature
// occurrence, so equal partitions always carry equal labelings.
struct Parcellation {
    std::vector<int> labels;        // feature -> parcel id, 0..delta-1
    std::vector<int> parcel_nodes;  // parcel id -> dendrogram node id

    int p() const { return static_cast<int>(labels.size()); }
    int delta() const { return static_cast<int>(parcel_nodes.size()); }

    std::vector<int> parcel_sizes() const;
    void validate() const;
};

// The single-parcel partition at the dendrogram root.
Parcellation root_parcellation(const Dendrogram& tree);

// n x delta matrix of per-parcel arithmetic means of the columns of X.
Eigen::MatrixXd parcel_averages(const Eigen::MatrixXd& X, const Parcellation& parcellation);

// Split one parcel into its two dendrogram children; all other parcels are
// unchanged and ids are re-canonicalized. Splitting a singleton throws.
Parcellation refine(const Parcellation& parcellation, int parcel_id, const Dendrogram& tree);

// Spread parcel weights back to features, dividing by parcel size.
WeightMap backproject_weights(const Eigen::VectorXd& parcel_weights,
                              const Parcellation& parcellation, const VoxelGrid& grid);

// The partition obtained by undoing the delta-1 most recent (most
// expensive, for connected graphs) merges of the tree.
Parcellation main_branches_cut(const Dendrogram& tree, int delta);

// CSV: feature_index,parcel_id
void save_parcellation(const Parcellation& parcellation, const std::string& path);

// CSV: feature_index,x,y,z,weight
void save_weight_map(const WeightMap& map, const std::string& path);

}  // namespace agd
