#include "spatsort/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace spatsort {

Field apply_diffusion(const Field& field, const Grid& grid, XBoundary boundary) {
    if (field.nx != grid.nx() || field.ntheta != grid.ntheta())
        throw std::invalid_argument("apply_diffusion: field shape does not match grid");
    const std::size_t nx = field.nx;
    const std::size_t nt = field.ntheta;
    Field out(nx, nt);
    if (nx < 2) return out;
    const LaplacianStencil stencil = make_stencil(grid, boundary);

    for (std::size_t i = 0; i < nx; ++i) {
        const double* mid = field.row(i);
        const double* up = i + 1 < nx ? field.row(i + 1) : nullptr;
        const double* down = i > 0 ? field.row(i - 1) : nullptr;
        double* dst = out.row(i);
        for (std::size_t j = 0; j < nt; ++j) {
            const double lap = laplacian_at(stencil, down ? down[j] : 0.0, mid[j],
                                            up ? up[j] : 0.0, i == 0, i + 1 == nx);
            dst[j] = grid.thetas[j] * lap;
        }
    }
    return out;
}

SimState make_state(Field init, const Grid& grid) {
    SimState state;
    state.rho = population_size(init, grid);
    state.min_value = init.values.empty()
                          ? 0.0
                          : *std::min_element(init.values.begin(), init.values.end());
    state.field = std::move(init);
    return state;
}

namespace {

// Shared Euler update; reprod and next are caller-provided scratch with the
// field's shape, table matches (kernel, dtheta, ntheta).
void euler_step_impl(SimState& state, const Params& params, const Grid& grid,
                     const HalfStepKernelTable& table, const StepOptions& opts,
                     Field& reprod, Field& next) {
    const std::size_t nx = state.field.nx;
    const std::size_t nt = state.field.ntheta;

    if (opts.fast) {
        reproduce_fast_into(reprod, state.field, state.rho, table, opts.threads);
    } else {
        SegregationKernel kernel(params.lambda2);
        reprod = reproduce_bruteforce(state.field, state.rho, kernel, grid).values;
    }

    const LaplacianStencil stencil = make_stencil(grid, opts.boundary);
    const double dt = params.dt;
    const double r = params.r;
    const double inv_K = 1.0 / params.K;
    const long new_step = state.step_index + 1;

    double min_value = state.min_value;
    double rho_l;
    for (std::size_t i = 0; i < nx; ++i) {
        const double* mid = state.field.row(i);
        const double* up = i + 1 < nx ? state.field.row(i + 1) : nullptr;
        const double* down = i > 0 ? state.field.row(i - 1) : nullptr;
        const double* rep = reprod.row(i);
        double* dst = next.row(i);
        rho_l = state.rho[i];
        for (std::size_t j = 0; j < nt; ++j) {
            const double lap = nx > 1 ? laplacian_at(stencil, down ? down[j] : 0.0, mid[j],
                                                     up ? up[j] : 0.0, i == 0, i + 1 == nx)
                                      : 0.0;
            const double diffusion = grid.thetas[j] * lap;
            const double value =
                mid[j] + dt * (diffusion + r * (rep[j] - inv_K * rho_l * mid[j]));
            if (!std::isfinite(value)) {
                std::ostringstream msg;
                msg << "non-finite field entry at step " << new_step << " (t = "
                    << static_cast<double>(new_step) * dt << "), x index " << i
                    << ", theta index " << j;
                throw BlowUpError(new_step, i, j, msg.str());
            }
            if (value < min_value) min_value = value;
            dst[j] = value;
        }
    }

    std::swap(state.field.values, next.values);
    state.rho = population_size(state.field, grid);
    state.min_value = min_value;
    state.step_index = new_step;
    state.time = static_cast<double>(new_step) * dt;
}

long steps_for(double t, double dt) { return std::llround(t / dt); }

}  // namespace

void euler_step(SimState& state, const Params& params, const SegregationKernel& kernel,
                const Grid& grid, const StepOptions& opts) {
    HalfStepKernelTable table(kernel, grid.dtheta, grid.ntheta());
    Field reprod(state.field.nx, state.field.ntheta);
    Field next(state.field.nx, state.field.ntheta);
    euler_step_impl(state, params, grid, table, opts, reprod, next);
}

Stepper::Stepper(const Params& params, const Grid& grid, StepOptions opts)
    : params_(params),
      grid_(grid),
      opts_(opts),
      kernel_(params.lambda2),
      table_(kernel_, grid.dtheta, grid.ntheta()),
      reprod_(grid.nx(), grid.ntheta()),
      next_(grid.nx(), grid.ntheta()) {}

void Stepper::step(SimState& state) {
    euler_step_impl(state, params_, grid_, table_, opts_, reprod_, next_);
}

RunResult run(const Params& params, Field init, const StepOptions& opts) {
    Params checked = params;
    checked.validate();
    const Grid grid = build_grid_validated(checked);
    if (init.nx != grid.nx() || init.ntheta != grid.ntheta())
        throw std::invalid_argument("run: initial field shape does not match grid");

    const long n_end = steps_for(checked.t_end, checked.dt);
    const long rec_every = std::max<long>(1, steps_for(checked.record_dt, checked.dt));

    // Output times rounded to the nearest step; the final step is always a
    // snapshot. Exact-time interpolation is not performed.
    std::vector<long> snap_steps;
    for (double t : checked.output_times) {
        const long n = steps_for(t, checked.dt);
        if (n <= n_end) snap_steps.push_back(n);
    }
    snap_steps.push_back(n_end);
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

    RunResult result;
    Stepper stepper(checked, grid, opts);
    SimState state = make_state(std::move(init), grid);
    std::size_t next_snap = 0;

    auto emit = [&](SimState& s) {
        long snapshot_index = -1;
        if (next_snap < snap_steps.size() && snap_steps[next_snap] == s.step_index) {
            result.snapshots.push_back(Snapshot{s.time, s.field, s.rho});
            snapshot_index = static_cast<long>(result.snapshots.size()) - 1;
            ++next_snap;
        }
        const bool record_due =
            s.step_index % rec_every == 0 || s.step_index == n_end || snapshot_index >= 0;
        if (!record_due) return;
        DiagnosticRecord rec;
        rec.t = s.time;
        rec.min_field = s.min_value;
        rec.snapshot_index = snapshot_index;
        const FrontPoint front = front_position(s.rho, grid, checked.front_threshold);
        rec.x_num = front.x;
        rec.front_defined = front.defined;
        double row_mass = 0.0;
        const double* row = s.field.row(front.index);
        for (std::size_t j = 0; j < s.field.ntheta; ++j) row_mass += row[j];
        rec.theta_bar = front.defined && row_mass > 0.0
                            ? mean_trait_at(s.field, grid, front.index)
                            : std::numeric_limits<double>::quiet_NaN();
        rec.x_half = half_front(s.rho, grid)
                         .value_or(std::numeric_limits<double>::quiet_NaN());
        result.records.push_back(rec);
    };

    emit(state);
    for (long n = 0; n < n_end; ++n) {
        stepper.step(state);
        emit(state);
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace spatsort
