#include "spatsort/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace spatsort {

FrontPoint front_position(const DensityVector& rho, const Grid& grid, double threshold) {
    if (rho.size() != grid.nx())
        throw std::invalid_argument("front_position: rho length does not match grid");
    FrontPoint fp;
    bool all_zero = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] != 0.0) all_zero = false;
        const double dev = std::abs(rho[i] - threshold);
        if (dev < best) {  // strict: ties keep the smallest index
            best = dev;
            fp.index = i;
        }
    }
    if (all_zero) {
        fp.x = 0.0;
        fp.index = 0;
        fp.defined = false;
        return fp;
    }
    fp.x = grid.xs[fp.index];
    return fp;
}

double mean_trait_at(const Field& field, const Grid& grid, std::size_t index) {
    if (index >= field.nx) throw std::out_of_range("mean_trait_at: index out of range");
    const double* row = field.row(index);
    double mass = 0.0;
    double first_moment = 0.0;
    for (std::size_t j = 0; j < field.ntheta; ++j) {
        mass += row[j];
        first_moment += grid.thetas[j] * row[j];
    }
    if (!(mass > 0.0))
        throw std::domain_error("mean_trait_at: zero local mass, mean trait undefined");
    return first_moment / mass;
}

std::optional<double> half_front(const DensityVector& rho, const Grid& grid) {
    if (rho.size() != grid.nx())
        throw std::invalid_argument("half_front: rho length does not match grid");
    const double level = 0.5;
    const std::size_t n = rho.size();
    for (std::size_t k = n; k-- > 0;) {
        if (rho[k] == level) return grid.xs[k];
        if (k + 1 < n) {
            const double a = rho[k] - level;
            const double b = rho[k + 1] - level;
            if (a * b < 0.0) {
                const double frac = a / (rho[k] - rho[k + 1]);
                return grid.xs[k] + frac * grid.dx;
            }
        }
    }
    return std::nullopt;
}

PowerLawFit loglog_fit(std::span<const double> ts, std::span<const double> ys,
                       double window_lo, double window_hi) {
    if (ts.size() != ys.size())
        throw std::invalid_argument("loglog_fit: series lengths differ");
    std::vector<double> lt, ly;
    std::vector<double> bad;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < window_lo || ts[i] > window_hi) continue;
        if (!(ys[i] > 0.0)) {
            bad.push_back(ts[i]);
            continue;
        }
        lt.push_back(std::log(ts[i]));
        ly.push_back(std::log(ys[i]));
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "loglog_fit: non-positive values at t =";
        for (double t : bad) msg << ' ' << t;
        throw std::invalid_argument(msg.str());
    }
    if (lt.size() < 3)
        throw std::invalid_argument("loglog_fit: fewer than 3 points in the window");

    const std::size_t n = lt.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lt[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lt[i] - mx) * (lt[i] - mx);
        sxy += (lt[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("loglog_fit: degenerate time window");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(my - fit.exponent * mx);
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.n_points = n;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = my + fit.exponent * (lt[i] - mx);
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - my) * (ly[i] - my);
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

double fixed_exponent_prefactor(std::span<const double> ts, std::span<const double> ys,
                                double window_lo, double window_hi, double exponent) {
    if (ts.size() != ys.size())
        throw std::invalid_argument("fixed_exponent_prefactor: series lengths differ");
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < window_lo || ts[i] > window_hi) continue;
        if (!(ys[i] > 0.0) || !(ts[i] > 0.0))
            throw std::invalid_argument("fixed_exponent_prefactor: non-positive data");
        acc += std::log(ys[i]) - exponent * std::log(ts[i]);
        ++n;
    }
    if (n == 0)
        throw std::invalid_argument("fixed_exponent_prefactor: empty window");
    return std::exp(acc / static_cast<double>(n));
}

std::vector<std::array<double, 2>> self_similar_profile(const DensityVector& rho,
                                                        const Grid& grid, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("self_similar_profile: t must be positive");
    if (rho.size() != grid.nx())
        throw std::invalid_argument("self_similar_profile: rho length does not match grid");
    const double scale = std::pow(t, -1.25);
    std::vector<std::array<double, 2>> out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = {grid.xs[i] * scale, rho[i]};
    return out;
}

AmplitudeProfile amplitude_profile(const Field& field, const Grid& grid, double t,
                                   double front_x) {
    if (!(t > 0.0)) throw std::invalid_argument("amplitude_profile: t must be positive");
    AmplitudeProfile profile;
    for (std::size_t i = 0; i < field.nx; ++i) {
        if (!(grid.xs[i] > front_x)) continue;
        const double* row = field.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < field.ntheta; ++j) mx = std::max(mx, row[j]);
        if (mx > 0.0)
            profile.points.push_back({grid.xs[i], std::log(mx)});
        else
            ++profile.dropped;
    }
    return profile;
}

std::optional<std::vector<std::array<double, 2>>> rescaled_shape(const DensityVector& rho,
                                                                 const Grid& grid, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("rescaled_shape: t must be positive");
    const std::optional<double> x_half = half_front(rho, grid);
    if (!x_half) return std::nullopt;
    const double scale = std::pow(t, -0.25);
    std::vector<std::array<double, 2>> out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
        out[i] = {(grid.xs[i] - *x_half) * scale, rho[i]};
    return out;
}

HopfColeField hopf_cole(const Field& field, const Grid& grid, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("hopf_cole: t must be positive");
    HopfColeField hc;
    hc.y.resize(grid.nx());
    hc.eta.resize(grid.ntheta());
    const double xscale = std::pow(t, -1.25);
    const double tscale = std::pow(t, -0.5);
    for (std::size_t i = 0; i < grid.nx(); ++i) hc.y[i] = grid.xs[i] * xscale;
    for (std::size_t j = 0; j < grid.ntheta(); ++j) hc.eta[j] = grid.thetas[j] * tscale;
    hc.u = Field(field.nx, field.ntheta);
    for (std::size_t i = 0; i < field.nx; ++i) {
        const double* row = field.row(i);
        double* dst = hc.u.row(i);
        for (std::size_t j = 0; j < field.ntheta; ++j) {
            if (row[j] > 0.0) {
                dst[j] = -std::log(row[j]) / t;
            } else {
                dst[j] = std::numeric_limits<double>::quiet_NaN();
                ++hc.masked;
            }
        }
    }
    return hc;
}

}  // namespace spatsort
