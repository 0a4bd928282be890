#include "spatsort/grid.hpp"

#include <cmath>

namespace spatsort {

namespace {

// floor(span/step)+1 points; the epsilon absorbs representation error of
// steps like 2/3 without changing counts for genuinely non-integer ratios.
std::size_t mesh_count(double span, double step) {
    return static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
}

}  // namespace

Grid build_grid_validated(const Params& params) {
    Grid grid;
    grid.dx = params.dx;
    grid.dtheta = params.dtheta;

    const std::size_t nx = mesh_count(params.x_max, params.dx);
    const std::size_t ntheta = mesh_count(params.theta_max - params.theta_min, params.dtheta);
    grid.xs.resize(nx);
    grid.thetas.resize(ntheta);
    for (std::size_t i = 0; i < nx; ++i) grid.xs[i] = static_cast<double>(i) * params.dx;
    for (std::size_t j = 0; j < ntheta; ++j)
        grid.thetas[j] = params.theta_min + static_cast<double>(j) * params.dtheta;
    return grid;
}

Grid build_grid(Params& params) {
    params.validate();
    return build_grid_validated(params);
}

}  // namespace spatsort
