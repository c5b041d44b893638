#include "agd/ward.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>
#include <stack>
#include <unordered_set>

namespace agd {

Dendrogram::Dendrogram(int leaf_count, std::vector<Merge> merges)
    : leaf_count_(leaf_count), merges_(std::move(merges)) {
    if (leaf_count_ < 1) throw invalid_input("Dendrogram: need at least one leaf");
    if (static_cast<int>(merges_.size()) != leaf_count_ - 1)
        throw invalid_input("Dendrogram: expected p-1 merges");
    std::vector<char> has_parent(node_count(), 0);
    for (std::size_t k = 0; k < merges_.size(); ++k) {
        const Merge& m = merges_[k];
        int id = leaf_count_ + static_cast<int>(k);
        if (m.child1 >= m.child2 || m.child1 < 0 || m.child2 >= id)
            throw invalid_input("Dendrogram: malformed merge children");
        if (has_parent[m.child1] || has_parent[m.child2])
            throw invalid_input("Dendrogram: node has two parents");
        has_parent[m.child1] = has_parent[m.child2] = 1;
        int expected = (m.child1 < leaf_count_ ? 1 : merges_[m.child1 - leaf_count_].size) +
                       (m.child2 < leaf_count_ ? 1 : merges_[m.child2 - leaf_count_].size);
        if (m.size != expected) throw invalid_input("Dendrogram: size bookkeeping broken");
    }
}

const Dendrogram::Merge& Dendrogram::merge_at(int node) const {
    if (node < leaf_count_ || node >= node_count())
        throw invalid_input("Dendrogram: no such internal node");
    return merges_[node - leaf_count_];
}

std::pair<int, int> Dendrogram::children(int node) const {
    if (node >= 0 && node < leaf_count_)
        throw invalid_input("Dendrogram: leaf node has no children");
    const Merge& m = merge_at(node);
    return {m.child1, m.child2};
}

int Dendrogram::size_of(int node) const {
    if (is_leaf(node)) {
        if (node < 0) throw invalid_input("Dendrogram: negative node id");
        return 1;
    }
    return merge_at(node).size;
}

double Dendrogram::merge_cost_of(int node) const { return merge_at(node).merge_cost; }

bool Dendrogram::forced_of(int node) const { return merge_at(node).forced; }

std::vector<int> Dendrogram::leaves_under(int node) const {
    std::vector<int> out;
    out.reserve(size_of(node));
    std::stack<int> todo;
    todo.push(node);
    while (!todo.empty()) {
        int v = todo.top();
        todo.pop();
        if (is_leaf(v)) {
            out.push_back(v);
        } else {
            auto [a, b] = children(v);
            todo.push(a);
            todo.push(b);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct Candidate {
    double cost;
    int a;  // a < b
    int b;
};

struct CandidateOrder {
    // min-heap on (cost, a, b); the tie rule is the lexicographically
    // smallest (min id, max id) pair
    bool operator()(const Candidate& lhs, const Candidate& rhs) const {
        if (lhs.cost != rhs.cost) return lhs.cost > rhs.cost;
        if (lhs.a != rhs.a) return lhs.a > rhs.a;
        return lhs.b > rhs.b;
    }
};

// Ward inertia increase for joining two clusters, from their moments.
double ward_cost(double na, const Eigen::VectorXd& ca, double nb, const Eigen::VectorXd& cb) {
    return na * nb / (na + nb) * (ca - cb).squaredNorm();
}

}  // namespace

Dendrogram ward_build(const Dataset& dataset, const ConnectivityGraph& graph) {
    const int p = dataset.p();
    if (p < 1) throw invalid_input("ward_build: need at least one feature");
    if (graph.p() != p)
        throw invalid_input("ward_build: graph feature count does not match dataset");

    const int total_nodes = 2 * p - 1;
    std::vector<Eigen::VectorXd> centroid(total_nodes);
    std::vector<int> size(total_nodes, 0);
    std::vector<char> active(total_nodes, 0);
    std::vector<std::unordered_set<int>> nbrs(total_nodes);

    for (int j = 0; j < p; ++j) {
        centroid[j] = dataset.X.col(j);
        size[j] = 1;
        active[j] = 1;
        nbrs[j].insert(graph.neighbors[j].begin(), graph.neighbors[j].end());
        if (nbrs[j].count(j)) throw invalid_input("ward_build: graph has a self-loop");
    }

    std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap;
    for (int i = 0; i < p; ++i)
        for (int j : graph.neighbors[i])
            if (j > i) heap.push({ward_cost(1, centroid[i], 1, centroid[j]), i, j});

    std::vector<Dendrogram::Merge> merges;
    merges.reserve(p - 1);
    int n_active = p;
    bool forced_phase = false;

    auto do_merge = [&](int a, int b, double cost) {
        int m = p + static_cast<int>(merges.size());
        merges.push_back({std::min(a, b), std::max(a, b), cost, size[a] + size[b], forced_phase});
        double na = size[a], nb = size[b];
        centroid[m] = (na * centroid[a] + nb * centroid[b]) / (na + nb);
        size[m] = size[a] + size[b];
        active[a] = active[b] = 0;
        active[m] = 1;
        centroid[a].resize(0);
        centroid[b].resize(0);
        // union the neighbor sets, dropping the merged pair and stale ids
        std::unordered_set<int>& merged = nbrs[m];
        for (int src : {a, b})
            for (int k : nbrs[src])
                if (k != a && k != b && active[k]) merged.insert(k);
        nbrs[a].clear();
        nbrs[b].clear();
        for (int k : merged) {
            nbrs[k].erase(a);
            nbrs[k].erase(b);
            nbrs[k].insert(m);
            heap.push({ward_cost(size[m], centroid[m], size[k], centroid[k]), k, m});
        }
        --n_active;
    };

    while (static_cast<int>(merges.size()) < p - 1) {
        bool merged_one = false;
        while (!heap.empty()) {
            Candidate top = heap.top();
            heap.pop();
            if (!active[top.a] || !active[top.b]) continue;  // stale entry
            do_merge(top.a, top.b, top.cost);
            merged_one = true;
            break;
        }
        if (merged_one) continue;

        // residual components: make the survivors mutually adjacent and
        // keep going, flagging the merges as forced
        forced_phase = true;
        std::vector<int> rest;
        for (int v = 0; v < total_nodes; ++v)
            if (active[v]) rest.push_back(v);
        if (rest.size() < 2) break;
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = i + 1; j < rest.size(); ++j) {
                int a = rest[i], b = rest[j];
                nbrs[a].insert(b);
                nbrs[b].insert(a);
                heap.push({ward_cost(size[a], centroid[a], size[b], centroid[b]), a, b});
            }
    }
    (void)n_active;

    return Dendrogram(p, std::move(merges));
}

void save_dendrogram(const Dendrogram& tree, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw invalid_input("save_dendrogram: cannot open " + path + " for writing");
    out << "node_id,child1,child2,merge_cost,size,forced\n";
    char buf[32];
    for (std::size_t k = 0; k < tree.merges().size(); ++k) {
        const auto& m = tree.merges()[k];
        std::snprintf(buf, sizeof(buf), "%.17g", m.merge_cost);
        out << (tree.leaf_count() + k) << ',' << m.child1 << ',' << m.child2 << ',' << buf << ','
            << m.size << ',' << (m.forced ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("save_dendrogram: write failed for " + path);
}

Dendrogram load_dendrogram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("load_dendrogram: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error(path + ": empty dendrogram file");
    std::vector<Dendrogram::Merge> merges;
    int first_id = -1;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        Dendrogram::Merge m{};
        int node_id = 0, forced = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%d,%d", &node_id, &m.child1, &m.child2,
                        &m.merge_cost, &m.size, &forced) != 6) {
            std::ostringstream msg;
            msg << path << ": malformed dendrogram row " << row;
            throw parse_error(msg.str());
        }
        m.forced = forced != 0;
        if (first_id < 0) first_id = node_id;
        merges.push_back(m);
    }
    if (merges.empty()) throw parse_error(path + ": dendrogram has no merges");
    return Dendrogram(first_id, std::move(merges));
}

}  // namespace agd
