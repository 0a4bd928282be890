#pragma once

#include <cstddef>
#include <vector>

#include "spatsort/grid.hpp"

namespace spatsort {

/// Discretized density f(t, x_i, theta_j), row-major with the trait index
/// contiguous: values[i*ntheta + j]. The stepper records (and never clips)
/// negative overshoot of the explicit scheme.
struct Field {
    std::size_t nx = 0;
    std::size_t ntheta = 0;
    std::vector<double> values;

    Field() = default;
    Field(std::size_t nx_, std::size_t ntheta_)
        : nx(nx_), ntheta(ntheta_), values(nx_ * ntheta_, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return values[i * ntheta + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * ntheta + j]; }

    double* row(std::size_t i) { return values.data() + i * ntheta; }
    const double* row(std::size_t i) const { return values.data() + i * ntheta; }
};

/// rho[i] = sum_j f(x_i, theta_j) * dtheta (rectangle rule).
using DensityVector = std::vector<double>;

/// Truncated Gaussian initial datum:
/// f(0,x,theta) = sqrt(2/pi) * exp(-(x^2 + (1-theta)^2)/2) for theta >= 1.
Field init_gaussian(const Grid& grid);

/// Discrete Dirac at (x=0, theta=theta_min): one cell of value 1/(dx*dtheta),
/// unit mass under the rectangle rule.
Field init_dirac(const Grid& grid);

/// Rectangle-rule population size per x-mesh point. Throws
/// std::invalid_argument on a field/grid shape mismatch.
DensityVector population_size(const Field& field, const Grid& grid);

}  // namespace spatsort
