#include "agd/parcellation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace agd {

std::vector<int> Parcellation::parcel_sizes() const {
    std::vector<int> sizes(delta(), 0);
    for (int l : labels) ++sizes[l];
    return sizes;
}

void Parcellation::validate() const {
    if (labels.empty()) throw invalid_input("Parcellation: empty");
    std::vector<int> sizes(delta(), 0);
    for (int l : labels) {
        if (l < 0 || l >= delta()) throw invalid_input("Parcellation: label out of range");
        ++sizes[l];
    }
    for (int s : sizes)
        if (s == 0) throw invalid_input("Parcellation: empty parcel id");
}

namespace {

// Relabel parcels in order of first feature occurrence.
Parcellation canonicalize(const std::vector<int>& raw_labels, const std::vector<int>& raw_nodes) {
    Parcellation out;
    out.labels.assign(raw_labels.size(), -1);
    std::vector<int> remap(raw_nodes.size(), -1);
    for (std::size_t j = 0; j < raw_labels.size(); ++j) {
        int r = raw_labels[j];
        if (remap[r] < 0) {
            remap[r] = static_cast<int>(out.parcel_nodes.size());
            out.parcel_nodes.push_back(raw_nodes[r]);
        }
        out.labels[j] = remap[r];
    }
    return out;
}

}  // namespace

Parcellation root_parcellation(const Dendrogram& tree) {
    Parcellation out;
    out.labels.assign(tree.leaf_count(), 0);
    out.parcel_nodes = {tree.root()};
    return out;
}

Eigen::MatrixXd parcel_averages(const Eigen::MatrixXd& X, const Parcellation& parcellation) {
    if (X.cols() != parcellation.p())
        throw invalid_input("parcel_averages: column count does not match parcellation");
    Eigen::MatrixXd reduced = Eigen::MatrixXd::Zero(X.rows(), parcellation.delta());
    for (int j = 0; j < parcellation.p(); ++j) reduced.col(parcellation.labels[j]) += X.col(j);
    const std::vector<int> sizes = parcellation.parcel_sizes();
    for (int k = 0; k < parcellation.delta(); ++k) reduced.col(k) /= sizes[k];
    return reduced;
}

Parcellation refine(const Parcellation& parcellation, int parcel_id, const Dendrogram& tree) {
    if (parcel_id < 0 || parcel_id >= parcellation.delta())
        throw invalid_input("refine: parcel id out of range");
    int node = parcellation.parcel_nodes[parcel_id];
    if (tree.is_leaf(node)) throw invalid_input("refine: singleton parcel is not splittable");
    auto [c1, c2] = tree.children(node);

    // membership of the first child decides which half a feature lands in
    std::vector<char> in_first(tree.leaf_count(), 0);
    for (int leaf : tree.leaves_under(c1)) in_first[leaf] = 1;

    std::vector<int> raw = parcellation.labels;
    const int second_id = parcellation.delta();
    for (int j = 0; j < parcellation.p(); ++j)
        if (raw[j] == parcel_id && !in_first[j]) raw[j] = second_id;
    std::vector<int> nodes = parcellation.parcel_nodes;
    nodes[parcel_id] = c1;
    nodes.push_back(c2);
    return canonicalize(raw, nodes);
}

WeightMap backproject_weights(const Eigen::VectorXd& parcel_weights,
                              const Parcellation& parcellation, const VoxelGrid& grid) {
    if (parcel_weights.size() != parcellation.delta())
        throw invalid_input("backproject_weights: weight length does not match parcel count");
    if (grid.p() != parcellation.p())
        throw invalid_input("backproject_weights: grid feature count does not match parcellation");
    const std::vector<int> sizes = parcellation.parcel_sizes();
    Eigen::VectorXd values(parcellation.p());
    for (int j = 0; j < parcellation.p(); ++j) {
        int k = parcellation.labels[j];
        values(j) = parcel_weights(k) / sizes[k];
    }
    return WeightMap(std::move(values), grid);
}

Parcellation main_branches_cut(const Dendrogram& tree, int delta) {
    if (delta < 1 || delta > tree.leaf_count())
        throw invalid_input("main_branches_cut: delta out of range");
    // undo the delta-1 most recent merges: active nodes are those not yet
    // split, starting from the root
    std::vector<int> active = {tree.root()};
    // the last delta-1 internal nodes are exactly the ones to split, and
    // splitting in decreasing node id order keeps every split applicable
    for (int node = tree.root(); node > tree.node_count() - delta; --node) {
        auto it = std::find(active.begin(), active.end(), node);
        active.erase(it);
        auto [c1, c2] = tree.children(node);
        active.push_back(c1);
        active.push_back(c2);
    }
    std::vector<int> raw_labels(tree.leaf_count(), -1);
    for (std::size_t k = 0; k < active.size(); ++k)
        for (int leaf : tree.leaves_under(active[k])) raw_labels[leaf] = static_cast<int>(k);
    std::vector<int> nodes(active.begin(), active.end());
    return canonicalize(raw_labels, nodes);
}

void save_parcellation(const Parcellation& parcellation, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_input("save_parcellation: cannot open " + path + " for writing");
    out << "feature_index,parcel_id\n";
    for (int j = 0; j < parcellation.p(); ++j) out << j << ',' << parcellation.labels[j] << '\n';
    if (!out) throw std::runtime_error("save_parcellation: write failed for " + path);
}

void save_weight_map(const WeightMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_input("save_weight_map: cannot open " + path + " for writing");
    out << "feature_index,x,y,z,weight\n";
    char buf[32];
    for (int j = 0; j < map.grid.p(); ++j) {
        auto c = map.grid.coords(j);
        std::snprintf(buf, sizeof(buf), "%.17g", map.values(j));
        out << j << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << buf << '\n';
    }
    if (!out) throw std::runtime_error("save_weight_map: write failed for " + path);
}

}  // namespace agd
