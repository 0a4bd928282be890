#include <cmath>
#include <random>

#include "doctest.h"
#include "spatsort/stepper.hpp"

using namespace spatsort;

namespace {

Params tiny_params() {
    Params p;
    p.dx = 1.0;
    p.x_max = 2.0;
    p.dtheta = 0.5;
    p.theta_max = 2.5;
    p.dt = 0.01;
    p.t_end = 0.01;
    p.output_times = {};
    return p;
}

Params smooth_params() {
    Params p;
    p.dx = 2.0;
    p.x_max = 40.0;
    p.dtheta = 0.5;
    p.theta_max = 9.0;
    p.dt = 0.02;
    p.t_end = 1.0;
    p.output_times = {};
    return p;
}

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Field f(g.nx(), g.ntheta());
    for (double& v : f.values) v = u(rng);
    return f;
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("diffusion of a constant field feels only the Dirichlet edge") {
    Params p = smooth_params();
    const Grid g = build_grid(p);
    Field f(g.nx(), g.ntheta());
    const double c = 1.75;
    for (double& v : f.values) v = c;

    const Field out = apply_diffusion(f, g, XBoundary::kNeumannDirichlet);
    const double dx2 = g.dx * g.dx;
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.ntheta(); ++j) {
            if (i + 1 == g.nx())
                CHECK(out(i, j) == doctest::Approx(-g.thetas[j] * c / dx2).epsilon(1e-14));
            else
                CHECK(out(i, j) == 0.0);
        }

    const Field all_n = apply_diffusion(f, g, XBoundary::kAllNeumann);
    for (double v : all_n.values) CHECK(v == 0.0);
}

TEST_CASE("diffusion annihilates affine profiles in the interior") {
    Params p = smooth_params();
    const Grid g = build_grid(p);
    Field f(g.nx(), g.ntheta());
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.ntheta(); ++j) f(i, j) = g.xs[i];
    const Field out = apply_diffusion(f, g);
    for (std::size_t i = 1; i + 1 < g.nx(); ++i)
        for (std::size_t j = 0; j < g.ntheta(); ++j)
            CHECK(std::abs(out(i, j)) < 1e-13);
}

TEST_CASE("diffusion of an interior spike is the three-point stencil") {
    Params p = smooth_params();
    const Grid g = build_grid(p);
    Field f(g.nx(), g.ntheta());
    const std::size_t i0 = 5, j0 = 3;
    const double m = 2.5;
    f(i0, j0) = m;
    const Field out = apply_diffusion(f, g);
    const double w = g.thetas[j0] / (g.dx * g.dx);
    CHECK(out(i0 - 1, j0) == doctest::Approx(m * w).epsilon(1e-15));
    CHECK(out(i0, j0) == doctest::Approx(-2.0 * m * w).epsilon(1e-15));
    CHECK(out(i0 + 1, j0) == doctest::Approx(m * w).epsilon(1e-15));
    CHECK(out(i0 + 2, j0) == 0.0);
    CHECK(out(i0, j0 + 1) == 0.0);
}

TEST_CASE("all-Neumann diffusion conserves column sums to machine precision") {
    Params p = smooth_params();
    const Grid g = build_grid(p);
    const Field f = random_field(g, 31);
    const Field out = apply_diffusion(f, g, XBoundary::kAllNeumann);
    for (std::size_t j = 0; j < g.ntheta(); ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i < g.nx(); ++i) colsum += out(i, j) / g.thetas[j];
        CHECK(std::abs(colsum) < 1e-12);
    }
}

TEST_CASE("apply_diffusion is linear") {
    Params p = smooth_params();
    const Grid g = build_grid(p);
    const Field f = random_field(g, 1);
    const Field h = random_field(g, 2);
    Field combo(g.nx(), g.ntheta());
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = 0.5 * f.values[i] - 2.0 * h.values[i];
    const Field df = apply_diffusion(f, g);
    const Field dh = apply_diffusion(h, g);
    const Field dc = apply_diffusion(combo, g);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        CHECK(dc.values[i] ==
              doctest::Approx(0.5 * df.values[i] - 2.0 * dh.values[i]).epsilon(1e-12));
}

TEST_CASE("euler_step keeps the zero field at zero") {
    Params p = tiny_params();
    const Grid g = build_grid(p);
    SegregationKernel kernel(p.lambda2);
    SimState state = make_state(Field(g.nx(), g.ntheta()), g);
    euler_step(state, p, kernel, g, StepOptions{});
    for (double v : state.field.values) CHECK(v == 0.0);
    CHECK(state.step_index == 1);
    CHECK(state.time == doctest::Approx(p.dt));
}

TEST_CASE("one euler step from the discrete Dirac (frozen oracle)") {
    Params p = tiny_params();  // 3 x-points, 4 trait points, dt = 0.01
    const Grid g = build_grid(p);
    SegregationKernel kernel(p.lambda2);
    SimState state = make_state(init_dirac(g), g);
    euler_step(state, p, kernel, g, StepOptions{});

    // Hand-computed update: m = 1/(dx dtheta) = 2, rho0 = m dtheta = 1,
    // B(0,k) = dtheta^2 m^2 G(theta_k - 1) / rho0 = G(theta_k - 1),
    // diffusion(0,j) = -theta_j f(0,j), diffusion(1,j) = theta_j f(0,j).
    CHECK(state.field(0, 0) == doctest::Approx(1.9656418958354775).epsilon(1e-15));
    CHECK(state.field(0, 1) == doctest::Approx(4.3939128946772245e-3).epsilon(1e-14));
    CHECK(state.field(0, 2) == doctest::Approx(2.0755374871029740e-3).epsilon(1e-14));
    CHECK(state.field(0, 3) == doctest::Approx(5.9465144611814684e-4).epsilon(1e-14));
    CHECK(state.field(1, 0) == doctest::Approx(0.02).epsilon(1e-15));
    // support is exactly the diffusion neighbor plus the reproduction column
    for (std::size_t k = 1; k < 4; ++k) CHECK(state.field(1, k) == 0.0);
    for (std::size_t k = 0; k < 4; ++k) CHECK(state.field(2, k) == 0.0);
    CHECK(state.field(1, 0) > 0.0);
}

TEST_CASE("carrying-capacity equilibrium holds rho for 10 steps") {
    Params p;
    p.dx = 4.0;
    p.x_max = 12.0;       // 4 x-points
    p.dtheta = 0.25;
    p.theta_max = 13.0;   // theta in [1,13]
    p.dt = 0.02;
    p.t_end = 0.2;
    p.output_times = {};
    const Grid g = build_grid(p);

    Field f(g.nx(), g.ntheta());
    double mass = 0.0;
    for (std::size_t j = 0; j < g.ntheta(); ++j) {
        const double d = g.thetas[j] - 7.0;
        mass += std::exp(-d * d / 2.0);
    }
    mass *= g.dtheta;
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.ntheta(); ++j) {
            const double d = g.thetas[j] - 7.0;
            f(i, j) = std::exp(-d * d / 2.0) / mass * p.K;  // rho = K exactly
        }

    SegregationKernel kernel(p.lambda2);
    SimState state = make_state(std::move(f), g);
    const StepOptions opts{.fast = true, .boundary = XBoundary::kAllNeumann, .threads = 1};
    for (int n = 0; n < 10; ++n) euler_step(state, p, kernel, g, opts);
    for (double r : state.rho) CHECK(std::abs(r - p.K) < 1e-6 * p.K);
}

TEST_CASE("run with t_end = 0 returns the initial state and one snapshot") {
    Params p = tiny_params();
    p.t_end = 0.0;
    const Grid g = build_grid(p);
    const Field init = init_gaussian(g);
    const RunResult res = run(p, init, StepOptions{});
    CHECK(res.final_state.step_index == 0);
    CHECK(res.snapshots.size() == 1);
    CHECK(res.snapshots[0].time == 0.0);
    CHECK(max_abs_diff(res.snapshots[0].field, init) == 0.0);
    REQUIRE(!res.records.empty());
    CHECK(res.records.front().snapshot_index == 0);
}

TEST_CASE("two identical runs are bit-identical") {
    Params p = smooth_params();
    p.t_end = 0.5;
    p.output_times = {0.25, 0.5};
    p.record_dt = 0.1;
    const Grid g = build_grid(p);
    const StepOptions opts{.fast = true, .boundary = XBoundary::kNeumannDirichlet,
                           .threads = 0};
    const RunResult a = run(p, init_gaussian(g), opts);
    const RunResult b = run(p, init_gaussian(g), opts);
    CHECK(max_abs_diff(a.final_state.field, b.final_state.field) == 0.0);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].t == b.records[i].t);
        CHECK(a.records[i].x_num == b.records[i].x_num);
        CHECK(a.records[i].theta_bar == b.records[i].theta_bar);
    }
    REQUIRE(a.snapshots.size() == 2);
    CHECK(a.snapshots[0].time == doctest::Approx(0.26).epsilon(1e-12));  // rounded to step
}

TEST_CASE("snapshot times round to the nearest step") {
    Params p = smooth_params();
    p.t_end = 0.2;
    p.dt = 0.02;
    p.output_times = {0.03, 0.1, 5.0};  // 5.0 is beyond t_end and dropped
    const Grid g = build_grid(p);
    const RunResult res = run(p, init_gaussian(g), StepOptions{});
    REQUIRE(res.snapshots.size() == 3);  // 0.04, 0.1, final 0.2
    CHECK(res.snapshots[0].time == doctest::Approx(0.04));
    CHECK(res.snapshots[1].time == doctest::Approx(0.10));
    CHECK(res.snapshots[2].time == doctest::Approx(0.20));
}

TEST_CASE("first-order consistency: halving dt halves the horizon defect") {
    Params p = smooth_params();
    const double T = 0.32;
    auto final_field = [&](double dt) {
        Params q = p;
        q.dt = dt;
        q.t_end = T;
        q.output_times = {};
        const Grid g = build_grid(q);
        return run(q, init_gaussian(g), StepOptions{}).final_state.field;
    };
    const Field f1 = final_field(0.04);
    const Field f2 = final_field(0.02);
    const Field f3 = final_field(0.01);
    const double d1 = max_abs_diff(f1, f2);
    const double d2 = max_abs_diff(f2, f3);
    REQUIRE(d2 > 0.0);
    const double ratio = d1 / d2;
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
}

TEST_CASE("fast and brute runs agree on rho at t = 1") {
    Params p = smooth_params();
    p.t_end = 1.0;
    const Grid g = build_grid(p);
    const RunResult fast = run(p, init_gaussian(g), StepOptions{.fast = true});
    const RunResult brute = run(p, init_gaussian(g), StepOptions{.fast = false});
    double max_rel = 0.0;
    double scale = 0.0;
    for (double r : fast.final_state.rho) scale = std::max(scale, std::abs(r));
    for (std::size_t i = 0; i < g.nx(); ++i)
        max_rel = std::max(max_rel,
                           std::abs(fast.final_state.rho[i] - brute.final_state.rho[i]) /
                               scale);
    CHECK(max_rel < 1e-8);
}

TEST_CASE("unstable dt blows up with a reported step index") {
    Params p = tiny_params();
    p.dt = 5.0;  // far beyond the stability bound; bypass validate on purpose
    const Grid g = build_grid_validated(p);
    SegregationKernel kernel(p.lambda2);
    SimState state = make_state(init_gaussian(g), g);
    bool thrown = false;
    try {
        for (int n = 0; n < 2000; ++n) euler_step(state, p, kernel, g, StepOptions{});
    } catch (const BlowUpError& e) {
        thrown = true;
        CHECK(e.step_index == state.step_index + 1);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
    CHECK(thrown);
}

TEST_CASE("negative overshoot is tracked, not clipped") {
    Params p = smooth_params();
    p.t_end = 1.0;
    const Grid g = build_grid(p);
    const RunResult res = run(p, init_gaussian(g), StepOptions{});
    // the explicit scheme undershoots slightly ahead of the front
    CHECK(res.final_state.min_value <= 0.0);
    CHECK(std::isfinite(res.final_state.min_value));
}
