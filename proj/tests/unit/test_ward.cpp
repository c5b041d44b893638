#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <queue>

#include "agd/grid.hpp"
#include "agd/rng.hpp"
#include "agd/ward.hpp"
#include "oracles.hpp"

using namespace agd;

namespace {

Dataset random_dataset(Rng& rng, int n, int p) {
    Dataset ds;
    ds.X.resize(n, p);
    ds.y.resize(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < p; ++c) ds.X(r, c) = rng.normal();
        ds.y(r) = rng.normal();
    }
    return ds;
}

bool leaves_connected(const Dendrogram& tree, int node, const ConnectivityGraph& graph) {
    auto leaves = tree.leaves_under(node);
    std::vector<char> in_set(graph.p(), 0), seen(graph.p(), 0);
    for (int f : leaves) in_set[f] = 1;
    std::queue<int> q;
    q.push(leaves[0]);
    seen[leaves[0]] = 1;
    std::size_t visited = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : graph.neighbors[v])
            if (in_set[w] && !seen[w]) {
                seen[w] = 1;
                ++visited;
                q.push(w);
            }
    }
    return visited == leaves.size();
}

}  // namespace

TEST_SUITE("ward") {

TEST_CASE("identical columns merge at zero cost") {
    Dataset ds;
    ds.X.resize(3, 2);
    ds.X.col(0) << 1.0, 2.0, 3.0;
    ds.X.col(1) << 1.0, 2.0, 3.0;
    ds.y = Eigen::VectorXd::Zero(3);
    auto g = build_connectivity(VoxelGrid::line(2), NeighborOrder::chain_1d);
    Dendrogram tree = ward_build(ds, g);
    REQUIRE(tree.merges().size() == 1);
    CHECK(tree.merges()[0].merge_cost == 0.0);
    CHECK(tree.children(tree.root()) == std::pair<int, int>{0, 1});
}

TEST_CASE("p=3 chain hand example") {
    // columns (0,0), (0.1,0.1), (5,5): pair {0,1} costs 0.01, pair {1,2}
    // costs 24.01, so {0,1} merges first, then joins leaf 2 at cost
    // 2/3 * ||(0.05,0.05)-(5,5)||^2 = 32.67
    Dataset ds;
    ds.X.resize(2, 3);
    ds.X << 0.0, 0.1, 5.0, 0.0, 0.1, 5.0;
    ds.y = Eigen::VectorXd::Zero(2);
    auto g = build_connectivity(VoxelGrid::line(3), NeighborOrder::chain_1d);
    Dendrogram tree = ward_build(ds, g);
    REQUIRE(tree.merges().size() == 2);
    CHECK(tree.merges()[0].child1 == 0);
    CHECK(tree.merges()[0].child2 == 1);
    CHECK(tree.merges()[0].merge_cost == doctest::Approx(0.01));
    CHECK(tree.children(tree.root()) == std::pair<int, int>{2, 3});
    CHECK(tree.merges()[1].merge_cost == doctest::Approx(32.67));
}

TEST_CASE("children of a leaf is an error") {
    Dataset ds = [] {
        Dataset d;
        d.X.resize(2, 2);
        d.X << 0.0, 1.0, 0.0, 2.0;
        d.y = Eigen::VectorXd::Zero(2);
        return d;
    }();
    auto g = build_connectivity(VoxelGrid::line(2), NeighborOrder::chain_1d);
    Dendrogram tree = ward_build(ds, g);
    CHECK_THROWS_AS(tree.children(0), invalid_input);
}

TEST_CASE("merge sequence matches the brute-force oracle on chains") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        int p = 2 + static_cast<int>(rng.below(11));
        int n = 2 + static_cast<int>(rng.below(9));
        Dataset ds = random_dataset(rng, n, p);
        auto g = build_connectivity(VoxelGrid::line(p), NeighborOrder::chain_1d);
        Dendrogram tree = ward_build(ds, g);
        auto expected = oracles::ward_bruteforce(ds.X, g);
        REQUIRE(tree.merges().size() == expected.size());
        for (std::size_t k = 0; k < expected.size(); ++k) {
            CHECK(tree.merges()[k].child1 == expected[k].child1);
            CHECK(tree.merges()[k].child2 == expected[k].child2);
            CHECK(tree.merges()[k].merge_cost ==
                  doctest::Approx(expected[k].cost).epsilon(1e-9));
        }
    }
}

TEST_CASE("merge costs are nondecreasing on connected graphs") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        int dx = 2 + static_cast<int>(rng.below(4));
        int dy = 1 + static_cast<int>(rng.below(4));
        Dataset ds = random_dataset(rng, 6, dx * dy);
        auto g = build_connectivity(VoxelGrid::full(dx, dy, 1));
        Dendrogram tree = ward_build(ds, g);
        for (std::size_t k = 1; k < tree.merges().size(); ++k)
            CHECK(tree.merges()[k].merge_cost >= tree.merges()[k - 1].merge_cost);
    }
}

TEST_CASE("leaf sets under non-forced nodes stay connected") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        int dx = 3, dy = 3, dz = 2;
        std::vector<std::uint8_t> mask(18);
        int count = 0;
        for (auto& m : mask) count += (m = rng.uniform() < 0.8 ? 1 : 0);
        if (count < 2) continue;
        VoxelGrid grid({dx, dy, dz}, mask);
        auto g = build_connectivity(grid);
        Dataset ds = random_dataset(rng, 5, grid.p());
        Dendrogram tree = ward_build(ds, g);
        for (int node = tree.leaf_count(); node < tree.node_count(); ++node)
            if (!tree.forced_of(node)) CHECK(leaves_connected(tree, node, g));
    }
}

TEST_CASE("disconnected masks finish with forced merges") {
    // two separated 1d blocks: features {0,1} and {2,3} with no edge between
    std::vector<std::uint8_t> mask = {1, 1, 0, 1, 1};
    VoxelGrid grid({5, 1, 1}, mask);
    auto g = build_connectivity(grid, NeighborOrder::chain_1d);
    Rng rng(3);
    Dataset ds = random_dataset(rng, 4, 4);
    Dendrogram tree = ward_build(ds, g);
    REQUIRE(tree.merges().size() == 3);
    CHECK(!tree.merges()[0].forced);
    CHECK(!tree.merges()[1].forced);
    CHECK(tree.merges()[2].forced);
    CHECK(tree.size_of(tree.root()) == 4);
}

TEST_CASE("ward_build is deterministic") {
    Rng rng(11);
    Dataset ds = random_dataset(rng, 6, 12);
    auto g = build_connectivity(VoxelGrid::full(4, 3, 1));
    Dendrogram a = ward_build(ds, g);
    Dendrogram b = ward_build(ds, g);
    REQUIRE(a.merges().size() == b.merges().size());
    for (std::size_t k = 0; k < a.merges().size(); ++k) {
        CHECK(a.merges()[k].child1 == b.merges()[k].child1);
        CHECK(a.merges()[k].child2 == b.merges()[k].child2);
        CHECK(a.merges()[k].merge_cost == b.merges()[k].merge_cost);
    }
}

TEST_CASE("graph with wrong feature count is rejected") {
    Rng rng(4);
    Dataset ds = random_dataset(rng, 3, 4);
    auto g = build_connectivity(VoxelGrid::line(3), NeighborOrder::chain_1d);
    CHECK_THROWS_AS(ward_build(ds, g), invalid_input);
}

TEST_CASE("dendrogram csv round-trip") {
    Rng rng(8);
    Dataset ds = random_dataset(rng, 5, 7);
    auto g = build_connectivity(VoxelGrid::line(7), NeighborOrder::chain_1d);
    Dendrogram tree = ward_build(ds, g);
    std::string path = (std::filesystem::temp_directory_path() / "agd_tree.csv").string();
    save_dendrogram(tree, path);
    Dendrogram back = load_dendrogram(path);
    CHECK(back.leaf_count() == tree.leaf_count());
    for (std::size_t k = 0; k < tree.merges().size(); ++k) {
        CHECK(back.merges()[k].child1 == tree.merges()[k].child1);
        CHECK(back.merges()[k].child2 == tree.merges()[k].child2);
        CHECK(back.merges()[k].merge_cost == tree.merges()[k].merge_cost);
        CHECK(back.merges()[k].size == tree.merges()[k].size);
    }
    std::remove(path.c_str());
}

}  // TEST_SUITE
