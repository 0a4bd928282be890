#include "spatsort/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spatsort {

Field init_gaussian(const Grid& grid) {
    Field f(grid.nx(), grid.ntheta());
    const double amp = std::sqrt(2.0 / std::numbers::pi);
    for (std::size_t i = 0; i < f.nx; ++i) {
        const double x = grid.xs[i];
        for (std::size_t j = 0; j < f.ntheta; ++j) {
            const double dtheta1 = 1.0 - grid.thetas[j];
            f(i, j) = amp * std::exp(-(x * x + dtheta1 * dtheta1) / 2.0);
        }
    }
    return f;
}

Field init_dirac(const Grid& grid) {
    Field f(grid.nx(), grid.ntheta());
    f(0, 0) = 1.0 / (grid.dx * grid.dtheta);
    return f;
}

DensityVector population_size(const Field& field, const Grid& grid) {
    if (field.nx != grid.nx() || field.ntheta != grid.ntheta())
        throw std::invalid_argument("population_size: field shape does not match grid");
    DensityVector rho(field.nx);
    for (std::size_t i = 0; i < field.nx; ++i) {
        const double* row = field.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < field.ntheta; ++j) sum += row[j];
        rho[i] = sum * grid.dtheta;
    }
    return rho;
}

}  // namespace spatsort
