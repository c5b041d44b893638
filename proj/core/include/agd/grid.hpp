#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "agd/errors.hpp"

namespace agd {

// A 3D voxel grid with a boolean in-mask selection. 1D data uses dims
// (p,1,1). In-mask cells are numbered 0..p-1 in x-fastest order (x, then y,
// then z), which makes the cell<->feature mapping deterministic.
class VoxelGrid {
public:
    VoxelGrid(std::array<int, 3> dims, std::vector<std::uint8_t> mask);

    // Fully masked grids.
    static VoxelGrid full(int dx, int dy, int dz);
    static VoxelGrid line(int p) { return full(p, 1, 1); }

    const std::array<int, 3>& dims() const { return dims_; }
    int p() const { return static_cast<int>(feature_to_cell_.size()); }
    std::size_t cell_count() const { return mask_.size(); }

    bool in_mask(int x, int y, int z) const { return mask_[cell_index(x, y, z)] != 0; }
    std::size_t cell_index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims_[0]) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_[1]) * z);
    }

    // feature index for an in-mask cell, -1 for out-of-mask
    int feature_at(int x, int y, int z) const { return cell_to_feature_[cell_index(x, y, z)]; }
    std::array<int, 3> coords(int feature) const;

    const std::vector<std::uint8_t>& mask() const { return mask_; }

private:
    std::array<int, 3> dims_;
    std::vector<std::uint8_t> mask_;
    std::vector<int> cell_to_feature_;
    std::vector<int> feature_to_cell_;
};

// Design matrix plus target and optional group labels (subject/session ids).
struct Dataset {
    Eigen::MatrixXd X;  // n samples x p features
    Eigen::VectorXd y;  // length n
    std::optional<Eigen::VectorXi> groups;

    int n() const { return static_cast<int>(X.rows()); }
    int p() const { return static_cast<int>(X.cols()); }

    void validate() const;
};

// Symmetric adjacency over the p in-mask features; neighbor lists sorted.
struct ConnectivityGraph {
    std::vector<std::vector<int>> neighbors;

    int p() const { return static_cast<int>(neighbors.size()); }
    bool has_edge(int a, int b) const;
};

enum class NeighborOrder { face_6, chain_1d };

// Face adjacency (6-connectivity in 3D; the 2-neighbor chain in 1D is the
// same rule restricted to the x axis). Out-of-mask cells carry no edges.
ConnectivityGraph build_connectivity(const VoxelGrid& grid,
                                     NeighborOrder order = NeighborOrder::face_6);

// A per-feature real value aligned with the grid's feature indexing.
struct WeightMap {
    Eigen::VectorXd values;
    VoxelGrid grid;

    WeightMap(Eigen::VectorXd v, VoxelGrid g);
};

enum class DatasetFormat { csv, raw_f64 };

// CSV: first line "n,p" (",groups" appended when a group column is present),
// then n lines of p feature values, the target, and optionally the group id.
// raw_f64: 16-byte header (magic "AGD1", u32 n, u32 p, u32 flags) followed by
// little-endian f64 X (row-major), y, and groups when flags bit 0 is set.
Dataset load_dataset(const std::string& path, DatasetFormat format);
void save_dataset(const Dataset& ds, const std::string& path, DatasetFormat format);

}  // namespace agd
