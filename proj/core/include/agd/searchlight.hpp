#pragma once

#include <array>
#include <string>
#include <vector>

#include "agd/evaluation.hpp"
#include "agd/grid.hpp"

namespace agd {

struct SearchlightSpec {
    double radius = 2.0;                // voxels, inclusive
    std::string inner_estimator = "brr";
    FoldScheme cv = FoldScheme::kfold(4);
    ScoreKind score = ScoreKind::zeta;
    int threads = 1;

    void validate() const;
};

// In-mask features whose voxel-center Euclidean distance to the center cell
// is <= radius, center included. The center must be in-mask.
std::vector<int> sphere_neighbors(const VoxelGrid& grid, const std::array<int, 3>& center,
                                  double radius);

// Cross-validated decodability of the sphere around each in-mask voxel.
// Voxels whose inner estimator fails carry NaN.
WeightMap searchlight_map(const Dataset& dataset, const VoxelGrid& grid,
                          const SearchlightSpec& spec);

}  // namespace agd
