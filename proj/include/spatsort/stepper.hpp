#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "spatsort/diagnostics.hpp"
#include "spatsort/field.hpp"
#include "spatsort/grid.hpp"
#include "spatsort/params.hpp"
#include "spatsort/reproduction.hpp"

namespace spatsort {

/// x-boundary handling of the discrete Laplacian. The production scheme is
/// Neumann at x=0, Dirichlet at x=x_max; the all-Neumann variant exists for
/// conservation tests and spatially homogeneous runs.
enum class XBoundary { kNeumannDirichlet, kAllNeumann };

/// Tridiagonal Laplacian rows: (-1,1)/dx^2 first row, (1,-2,1)/dx^2 interior,
/// (1,-2)/dx^2 last row (or (1,-1)/dx^2 in the all-Neumann variant).
/// Applied to a constant, interior rows give 0; the first row gives 0; the
/// last row gives -const/dx^2 under the Dirichlet condition.
struct LaplacianStencil {
    double dx2_inv = 0.0;
    XBoundary boundary = XBoundary::kNeumannDirichlet;
};

inline LaplacianStencil make_stencil(const Grid& grid, XBoundary boundary) {
    return LaplacianStencil{1.0 / (grid.dx * grid.dx), boundary};
}

/// One stencil row; down/up are the x-neighbors (ignored at the edges).
inline double laplacian_at(const LaplacianStencil& stencil, double down, double mid,
                           double up, bool first_row, bool last_row) {
    double lap;
    if (first_row) {
        lap = up - mid;
    } else if (last_row) {
        lap = stencil.boundary == XBoundary::kNeumannDirichlet ? down - 2.0 * mid
                                                               : down - mid;
    } else {
        lap = down - 2.0 * mid + up;
    }
    return lap * stencil.dx2_inv;
}

/// Thrown when a step produces a non-finite entry. CLI maps it to exit code 3.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(long step, std::size_t i, std::size_t j, const std::string& msg)
        : std::runtime_error(msg), step_index(step), xi(i), thetaj(j) {}
    long step_index;
    std::size_t xi;
    std::size_t thetaj;
};

struct SimState {
    double time = 0.0;
    long step_index = 0;
    Field field;
    DensityVector rho;
    double min_value = 0.0;  // running minimum of field entries (overshoot monitor)
};

struct StepOptions {
    bool fast = true;
    XBoundary boundary = XBoundary::kNeumannDirichlet;
    int threads = 1;  // 0 = hardware concurrency
};

/// Trait-weighted diffusion term: out[i][j] = theta_j * (Laplacian_x f)[i][j].
Field apply_diffusion(const Field& field, const Grid& grid,
                      XBoundary boundary = XBoundary::kNeumannDirichlet);

/// Initial SimState at t=0 with rho and min_value computed from the field.
SimState make_state(Field init, const Grid& grid);

/// One explicit Euler update
///   F <- F + dt * [ theta_j * Lap_x(F) + r * (B[F] - rho F / K) ],
/// then rho, min_value, time and step_index are refreshed. Throws
/// BlowUpError on the first non-finite entry.
void euler_step(SimState& state, const Params& params, const SegregationKernel& kernel,
                const Grid& grid, const StepOptions& opts);

struct Snapshot {
    double time = 0.0;
    Field field;
    DensityVector rho;
};

struct RunResult {
    SimState final_state;
    std::vector<DiagnosticRecord> records;
    std::vector<Snapshot> snapshots;
};

/// Integrates from the initial field to t_end. Snapshot times are the
/// params' output_times rounded to the nearest step (clamped to t_end, the
/// final step always included); diagnostic records are emitted every
/// record_dt plus at the first and last step. Deterministic for fixed
/// params and options.
RunResult run(const Params& params, Field init, const StepOptions& opts);

/// Step-reusing driver for callers that iterate manually (keeps the kernel
/// table and scratch buffers across steps).
class Stepper {
public:
    Stepper(const Params& params, const Grid& grid, StepOptions opts);

    void step(SimState& state);

    const Grid& grid() const { return grid_; }
    const SegregationKernel& kernel() const { return kernel_; }

private:
    Params params_;
    Grid grid_;
    StepOptions opts_;
    SegregationKernel kernel_;
    HalfStepKernelTable table_;
    Field reprod_;
    Field next_;
};

}  // namespace spatsort
