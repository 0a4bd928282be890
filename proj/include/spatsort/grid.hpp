#pragma once

#include <cstddef>
#include <vector>

#include "spatsort/params.hpp"

namespace spatsort {

/// Uniform meshes over [0, x_max] and [theta_min, theta_max].
/// xs[i] = i*dx, thetas[j] = theta_min + j*dtheta.
struct Grid {
    std::vector<double> xs;
    std::vector<double> thetas;
    double dx = 0.0;
    double dtheta = 0.0;

    std::size_t nx() const { return xs.size(); }
    std::size_t ntheta() const { return thetas.size(); }
};

/// Builds the meshes; Nx = floor(x_max/dx)+1, Ntheta = floor((theta_max-theta_min)/dtheta)+1.
/// Validates params first (CFL violation is a hard ConfigError).
Grid build_grid(Params& params);

/// Same, for callers holding an already validated copy.
Grid build_grid_validated(const Params& params);

}  // namespace spatsort
