#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "agd/grid.hpp"

namespace agd {

// 1D benchmark: X ~ N(0,1), y = Xw + noise, w uniform on two blocks of
// features and zero elsewhere.
struct Sim1dSpec {
    int p = 200;
    int n = 150;
    std::pair<int, int> support_a = {20, 30};  // inclusive feature ranges
    std::pair<int, int> support_b = {50, 60};
    std::pair<double, double> law_a = {0.75, 1.25};
    std::pair<double, double> law_b = {-1.25, -0.75};
    double noise_std = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Sim1dResult {
    Dataset data;
    Eigen::VectorXd true_weights;
    VoxelGrid grid;
};

Sim1dResult simulate_1d(const Sim1dSpec& spec);

// 3D benchmark: smoothed white-noise volumes, four cubic ROIs with fixed
// weights, a per-image random half of the ROI voxels active, and Gaussian
// noise scaled to the requested SNR.
struct Sim3dSpec {
    int n = 100;  // images per set
    std::array<int, 3> dims = {12, 12, 12};
    std::array<std::array<int, 3>, 4> roi_corners = {{{2, 2, 2}, {2, 8, 8}, {8, 2, 8}, {8, 8, 2}}};
    int roi_edge = 2;
    std::array<double, 4> roi_weights = {-0.5, 0.5, -0.5, 0.5};
    double smooth_sigma = 2.0;
    double snr_db = 5.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Sim3dResult {
    Dataset train;
    Dataset test;
    WeightMap true_weights;
    VoxelGrid grid;
};

Sim3dResult simulate_3d(const Sim3dSpec& spec);

// Dense volume in x-fastest layout.
struct Volume {
    std::array<int, 3> dims;
    std::vector<double> data;

    double& at(int x, int y, int z) {
        return data[x + static_cast<std::size_t>(dims[0]) * (y + static_cast<std::size_t>(dims[1]) * z)];
    }
    double at(int x, int y, int z) const {
        return data[x + static_cast<std::size_t>(dims[0]) * (y + static_cast<std::size_t>(dims[1]) * z)];
    }
};

// Separable Gaussian convolution along the three axes; kernel truncated at
// 4 sigma and renormalized to unit sum, zero-padded boundaries.
Volume gaussian_smooth(const Volume& volume, double sigma);

}  // namespace agd
