#include "agd/searchlight.hpp"

#include <cmath>
#include <limits>

#include "agd/estimators.hpp"
#include "agd/parallel.hpp"

namespace agd {

void SearchlightSpec::validate() const {
    if (radius < 1.0) throw invalid_input("SearchlightSpec: radius must be >= 1");
}

std::vector<int> sphere_neighbors(const VoxelGrid& grid, const std::array<int, 3>& center,
                                  double radius) {
    const auto& d = grid.dims();
    if (center[0] < 0 || center[0] >= d[0] || center[1] < 0 || center[1] >= d[1] ||
        center[2] < 0 || center[2] >= d[2])
        throw invalid_input("sphere_neighbors: center outside the grid");
    if (!grid.in_mask(center[0], center[1], center[2]))
        throw invalid_input("sphere_neighbors: center is out of mask");

    const int r = static_cast<int>(std::floor(radius));
    const double r2 = radius * radius;
    std::vector<int> out;
    for (int dz = -r; dz <= r; ++dz)
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                if (dx * dx + dy * dy + dz * dz > r2) continue;
                int x = center[0] + dx, y = center[1] + dy, z = center[2] + dz;
                if (x < 0 || x >= d[0] || y < 0 || y >= d[1] || z < 0 || z >= d[2]) continue;
                int f = grid.feature_at(x, y, z);
                if (f >= 0) out.push_back(f);
            }
    std::sort(out.begin(), out.end());
    return out;
}

WeightMap searchlight_map(const Dataset& dataset, const VoxelGrid& grid,
                          const SearchlightSpec& spec) {
    spec.validate();
    dataset.validate();
    if (dataset.p() != grid.p())
        throw invalid_input("searchlight_map: dataset does not match grid");

    auto prototype = make_estimator(spec.inner_estimator, spec.cv.seed);
    Eigen::VectorXd scores(grid.p());
    parallel_for(
        static_cast<std::size_t>(grid.p()),
        [&](std::size_t f) {
            auto sphere = sphere_neighbors(grid, grid.coords(static_cast<int>(f)), spec.radius);
            Eigen::MatrixXd local(dataset.n(), sphere.size());
            for (std::size_t j = 0; j < sphere.size(); ++j)
                local.col(j) = dataset.X.col(sphere[j]);
            try {
                CvResult cv = cross_val_score(*prototype, local, dataset.y, spec.cv, spec.score,
                                              dataset.groups);
                scores(f) = cv.mean;
            } catch (const std::exception&) {
                scores(f) = std::numeric_limits<double>::quiet_NaN();  // recorded as missing
            }
        },
        spec.threads);

    return WeightMap(std::move(scores), grid);
}

}  // namespace agd
