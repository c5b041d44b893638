#pragma once

#include <string>
#include <utility>
#include <vector>

#include "agd/grid.hpp"

namespace agd {

// Binary merge tree from connectivity-constrained Ward clustering.
// Leaves are feature ids 0..p-1; internal node p+k is the k-th merge, so
// node ids follow merge order. merge_cost is the Ward inertia increase.
// Merges joining residual mask components are flagged forced.
class Dendrogram {
public:
    struct Merge {
        int child1;  // child1 < child2
        int child2;
        double merge_cost;
        int size;
        bool forced;
    };

    Dendrogram(int leaf_count, std::vector<Merge> merges);

    int leaf_count() const { return leaf_count_; }
    int node_count() const { return 2 * leaf_count_ - 1; }
    int root() const { return node_count() - 1; }
    bool is_leaf(int node) const { return node < leaf_count_; }

    // Stored child pair, smaller node id first. Throws on leaves.
    std::pair<int, int> children(int node) const;

    int size_of(int node) const;
    double merge_cost_of(int node) const;
    bool forced_of(int node) const;

    // Feature ids under a node, ascending.
    std::vector<int> leaves_under(int node) const;

    const std::vector<Merge>& merges() const { return merges_; }

private:
    const Merge& merge_at(int node) const;

    int leaf_count_;
    std::vector<Merge> merges_;
};

// Agglomerate the p feature columns of the dataset under the connectivity
// constraint, greedily merging the adjacent pair with minimal Ward cost
// (ties: smallest (min id, max id) pair). Disconnected masks are completed
// per component first, then components are joined by forced merges in
// increasing-cost order.
Dendrogram ward_build(const Dataset& dataset, const ConnectivityGraph& graph);

// One line per internal node: node_id,child1,child2,merge_cost,size,forced.
void save_dendrogram(const Dendrogram& tree, const std::string& path);
Dendrogram load_dendrogram(const std::string& path);

}  // namespace agd
