#include "agd/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agd/rng.hpp"

namespace agd {

void Sim1dSpec::validate() const {
    if (p < 1 || n < 1) throw invalid_input("Sim1dSpec: n and p must be positive");
    for (auto [lo, hi] : {support_a, support_b})
        if (lo < 0 || hi < lo || hi >= p) throw invalid_input("Sim1dSpec: support outside [0,p)");
    if (support_a.second >= support_b.first && support_b.second >= support_a.first)
        throw invalid_input("Sim1dSpec: overlapping supports");
    if (noise_std < 0) throw invalid_input("Sim1dSpec: negative noise std");
}

Sim1dResult simulate_1d(const Sim1dSpec& spec) {
    spec.validate();
    Rng master(spec.seed);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(spec.p);
    Rng w_rng = master.stream("weights");
    for (int i = spec.support_a.first; i <= spec.support_a.second; ++i)
        w(i) = w_rng.uniform(spec.law_a.first, spec.law_a.second);
    for (int i = spec.support_b.first; i <= spec.support_b.second; ++i)
        w(i) = w_rng.uniform(spec.law_b.first, spec.law_b.second);

    Sim1dResult out{Dataset{}, std::move(w), VoxelGrid::line(spec.p)};
    out.data.X.resize(spec.n, spec.p);
    Rng x_rng = master.stream("X");
    for (int r = 0; r < spec.n; ++r)
        for (int c = 0; c < spec.p; ++c) out.data.X(r, c) = x_rng.normal();

    Rng e_rng = master.stream("noise");
    out.data.y = out.data.X * out.true_weights;
    for (int r = 0; r < spec.n; ++r) out.data.y(r) += spec.noise_std * e_rng.normal();
    return out;
}

void Sim3dSpec::validate() const {
    if (n < 1) throw invalid_input("Sim3dSpec: n must be positive");
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
        throw invalid_input("Sim3dSpec: dims must be positive");
    if (roi_edge < 1) throw invalid_input("Sim3dSpec: roi_edge must be positive");
    if (!std::isfinite(snr_db)) throw invalid_input("Sim3dSpec: snr_db must be finite");
    if (smooth_sigma <= 0) throw invalid_input("Sim3dSpec: smooth_sigma must be positive");
    // ROIs inside the volume and pairwise disjoint
    for (const auto& c : roi_corners)
        for (int a = 0; a < 3; ++a)
            if (c[a] < 0 || c[a] + roi_edge > dims[a])
                throw invalid_input("Sim3dSpec: ROI outside the volume");
    for (std::size_t i = 0; i < roi_corners.size(); ++i)
        for (std::size_t j = i + 1; j < roi_corners.size(); ++j) {
            bool overlap = true;
            for (int a = 0; a < 3; ++a)
                overlap &= roi_corners[i][a] < roi_corners[j][a] + roi_edge &&
                           roi_corners[j][a] < roi_corners[i][a] + roi_edge;
            if (overlap) throw invalid_input("Sim3dSpec: overlapping ROIs");
        }
}

namespace {

// feature ids of all ROI voxels, paired with their weights
void roi_support(const Sim3dSpec& spec, const VoxelGrid& grid, std::vector<int>& features,
                 Eigen::VectorXd& weights) {
    features.clear();
    weights = Eigen::VectorXd::Zero(grid.p());
    for (std::size_t r = 0; r < spec.roi_corners.size(); ++r) {
        const auto& c = spec.roi_corners[r];
        for (int dz = 0; dz < spec.roi_edge; ++dz)
            for (int dy = 0; dy < spec.roi_edge; ++dy)
                for (int dx = 0; dx < spec.roi_edge; ++dx) {
                    int f = grid.feature_at(c[0] + dx, c[1] + dy, c[2] + dz);
                    features.push_back(f);
                    weights(f) = spec.roi_weights[r];
                }
    }
    std::sort(features.begin(), features.end());
}

Dataset generate_set(const Sim3dSpec& spec, const VoxelGrid& grid,
                     const std::vector<int>& roi_features, const Eigen::VectorXd& true_w,
                     const Rng& set_rng) {
    const int p = grid.p();
    Dataset ds;
    ds.X.resize(spec.n, p);
    Eigen::VectorXd y0(spec.n);

    for (int l = 0; l < spec.n; ++l) {
        Rng img_rng = set_rng.stream("image", static_cast<std::uint64_t>(l));
        Volume vol{spec.dims, std::vector<double>(static_cast<std::size_t>(p))};
        for (auto& v : vol.data) v = img_rng.normal();
        Volume smoothed = gaussian_smooth(vol, spec.smooth_sigma);
        for (int j = 0; j < p; ++j) ds.X(l, j) = smoothed.data[j];

        // per-image support: a random half of the ROI voxels stays active
        std::vector<int> order = roi_features;
        img_rng.shuffle(order);
        order.resize(order.size() / 2);
        double target = 0.0;
        for (int f : order) target += true_w(f) * ds.X(l, f);
        y0(l) = target;
    }

    // noise std chosen so 20*log10(||signal|| / (gamma*sqrt(n))) = snr_db
    double gamma = y0.norm() / (std::sqrt(static_cast<double>(spec.n)) *
                                std::pow(10.0, spec.snr_db / 20.0));
    Rng noise_rng = set_rng.stream("noise");
    ds.y.resize(spec.n);
    for (int l = 0; l < spec.n; ++l) ds.y(l) = y0(l) + gamma * noise_rng.normal();
    return ds;
}

}  // namespace

Sim3dResult simulate_3d(const Sim3dSpec& spec) {
    spec.validate();
    VoxelGrid grid = VoxelGrid::full(spec.dims[0], spec.dims[1], spec.dims[2]);

    std::vector<int> roi_features;
    Eigen::VectorXd true_w;
    roi_support(spec, grid, roi_features, true_w);

    Rng master(spec.seed);
    Dataset train = generate_set(spec, grid, roi_features, true_w, master.stream("train"));
    Dataset test = generate_set(spec, grid, roi_features, true_w, master.stream("test"));
    return Sim3dResult{std::move(train), std::move(test), WeightMap(true_w, grid),
                       std::move(grid)};
}

Volume gaussian_smooth(const Volume& volume, double sigma) {
    if (sigma <= 0) throw invalid_input("gaussian_smooth: sigma must be positive");
    const auto& d = volume.dims;
    if (volume.data.size() != static_cast<std::size_t>(d[0]) * d[1] * d[2])
        throw invalid_input("gaussian_smooth: data size does not match dims");
    const int radius = static_cast<int>(std::floor(4.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double total = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        kernel[t + radius] = std::exp(-0.5 * t * t / (sigma * sigma));
        total += kernel[t + radius];
    }
    for (double& k : kernel) k /= total;

    Volume out = volume;
    Volume tmp = volume;
    // pass along each axis in turn, zero outside the volume
    const std::ptrdiff_t strides[3] = {1, d[0], static_cast<std::ptrdiff_t>(d[0]) * d[1]};
    const Volume* src = &volume;
    Volume* dst = &out;
    for (int axis = 0; axis < 3; ++axis) {
        const int extent = d[axis];
        for (int z = 0; z < d[2]; ++z)
            for (int y = 0; y < d[1]; ++y)
                for (int x = 0; x < d[0]; ++x) {
                    const int coord[3] = {x, y, z};
                    const int pos = coord[axis];
                    const std::ptrdiff_t base =
                        x + static_cast<std::ptrdiff_t>(d[0]) *
                                (y + static_cast<std::ptrdiff_t>(d[1]) * z);
                    double acc = 0.0;
                    int lo = std::max(-radius, -pos), hi = std::min(radius, extent - 1 - pos);
                    for (int t = lo; t <= hi; ++t)
                        acc += kernel[t + radius] * src->data[base + t * strides[axis]];
                    dst->data[base] = acc;
                }
        if (axis == 0) {
            src = &out;
            dst = &tmp;
        } else if (axis == 1) {
            src = &tmp;
            dst = &out;
        }
    }
    return out;
}

}  // namespace agd
