#include "agd/grid.hpp"

#include <algorithm>
#include <cmath>

namespace agd {

VoxelGrid::VoxelGrid(std::array<int, 3> dims, std::vector<std::uint8_t> mask)
    : dims_(dims), mask_(std::move(mask)) {
    if (dims_[0] < 1 || dims_[1] < 1 || dims_[2] < 1)
        throw invalid_input("VoxelGrid: all dims must be >= 1");
    std::size_t cells = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    if (mask_.size() != cells)
        throw invalid_input("VoxelGrid: mask size does not match dims");
    cell_to_feature_.assign(cells, -1);
    for (std::size_t c = 0; c < cells; ++c) {
        if (mask_[c]) {
            cell_to_feature_[c] = static_cast<int>(feature_to_cell_.size());
            feature_to_cell_.push_back(static_cast<int>(c));
        }
    }
}

VoxelGrid VoxelGrid::full(int dx, int dy, int dz) {
    if (dx < 1 || dy < 1 || dz < 1) throw invalid_input("VoxelGrid: all dims must be >= 1");
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(dx) * dy * dz, 1);
    return VoxelGrid({dx, dy, dz}, std::move(mask));
}

std::array<int, 3> VoxelGrid::coords(int feature) const {
    if (feature < 0 || feature >= p()) throw invalid_input("VoxelGrid: feature index out of range");
    int c = feature_to_cell_[feature];
    int x = c % dims_[0];
    int y = (c / dims_[0]) % dims_[1];
    int z = c / (dims_[0] * dims_[1]);
    return {x, y, z};
}

void Dataset::validate() const {
    if (y.size() != X.rows()) throw invalid_input("Dataset: y length does not match rows of X");
    if (groups && groups->size() != X.rows())
        throw invalid_input("Dataset: groups length does not match rows of X");
    if (!X.allFinite() || !y.allFinite()) throw invalid_input("Dataset: non-finite values");
}

bool ConnectivityGraph::has_edge(int a, int b) const {
    if (a < 0 || a >= p()) return false;
    const auto& nb = neighbors[a];
    return std::binary_search(nb.begin(), nb.end(), b);
}

ConnectivityGraph build_connectivity(const VoxelGrid& grid, NeighborOrder order) {
    if (grid.p() == 0) throw invalid_input("build_connectivity: empty mask");
    ConnectivityGraph g;
    g.neighbors.resize(grid.p());
    const auto& d = grid.dims();
    // chain_1d is face adjacency restricted to the x axis
    const int naxes = (order == NeighborOrder::chain_1d) ? 1 : 3;
    for (int z = 0; z < d[2]; ++z)
        for (int y = 0; y < d[1]; ++y)
            for (int x = 0; x < d[0]; ++x) {
                int f = grid.feature_at(x, y, z);
                if (f < 0) continue;
                const int steps[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
                for (int a = 0; a < naxes; ++a) {
                    int nx = x + steps[a][0], ny = y + steps[a][1], nz = z + steps[a][2];
                    if (nx >= d[0] || ny >= d[1] || nz >= d[2]) continue;
                    int nf = grid.feature_at(nx, ny, nz);
                    if (nf < 0) continue;
                    g.neighbors[f].push_back(nf);
                    g.neighbors[nf].push_back(f);
                }
            }
    for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
    return g;
}

WeightMap::WeightMap(Eigen::VectorXd v, VoxelGrid g) : values(std::move(v)), grid(std::move(g)) {
    if (values.size() != grid.p())
        throw invalid_input("WeightMap: values length does not match grid feature count");
}

}  // namespace agd
