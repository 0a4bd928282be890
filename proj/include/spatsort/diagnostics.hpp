#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spatsort/field.hpp"
#include "spatsort/grid.hpp"

namespace spatsort {

/// Per-record-time scalars. theta_bar and x_half are NaN when undefined
/// (zero local mass, no 1/2 crossing); front_defined is false only for an
/// all-zero density profile. snapshot_index links to the run's snapshot
/// list when the record time coincides with an output time, else -1.
struct DiagnosticRecord {
    double t = 0.0;
    double x_num = 0.0;
    double theta_bar = 0.0;
    double x_half = 0.0;
    double min_field = 0.0;
    bool front_defined = true;
    long snapshot_index = -1;
};

struct FrontPoint {
    double x = 0.0;
    std::size_t index = 0;
    bool defined = true;
};

/// Front position: the mesh point minimizing |rho_i - threshold|, ties
/// broken by the smallest index. All-zero rho -> x = 0 flagged undefined.
FrontPoint front_position(const DensityVector& rho, const Grid& grid, double threshold);

/// Mean trait of the local distribution at one x index:
/// sum_j theta_j F[i][j] / sum_j F[i][j]. Throws std::domain_error when the
/// local mass is not positive.
double mean_trait_at(const Field& field, const Grid& grid, std::size_t index);

/// Half-density front X_{1/2} = sup{x : rho crosses 1/2}, linearly
/// interpolated between bracketing cells. nullopt when rho never crosses.
std::optional<double> half_front(const DensityVector& rho, const Grid& grid);

struct PowerLawFit {
    double prefactor = 0.0;   // C in y = C * t^p
    double exponent = 0.0;    // p
    double r_squared = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::size_t n_points = 0;
};

/// Ordinary least squares of log y on log t restricted to t in
/// [window_lo, window_hi]. Requires >= 3 points in the window and y > 0
/// there; throws std::invalid_argument listing offending times otherwise.
PowerLawFit loglog_fit(std::span<const double> ts, std::span<const double> ys,
                       double window_lo, double window_hi);

/// Least-squares prefactor with the exponent pinned:
/// log C = mean(log y - exponent * log t) over the window. Used to extract
/// the front coefficient of an assumed t^{5/4} law.
double fixed_exponent_prefactor(std::span<const double> ts, std::span<const double> ys,
                                double window_lo, double window_hi, double exponent);

/// Pairs (x_i * t^{-5/4}, rho_i): profile in the self-similar variable.
std::vector<std::array<double, 2>> self_similar_profile(const DensityVector& rho,
                                                        const Grid& grid, double t);

struct AmplitudeProfile {
    std::vector<std::array<double, 2>> points;  // (x_i, log max_theta f)
    std::size_t dropped = 0;                    // rows beyond front_x with max <= 0
};

/// log of the row maxima of f for positions strictly beyond front_x.
/// Non-positive maxima are omitted and counted, never floored.
AmplitudeProfile amplitude_profile(const Field& field, const Grid& grid, double t,
                                   double front_x);

/// Pairs ((x_i - X_{1/2}) * t^{-1/4}, rho_i); nullopt when X_{1/2} is undefined.
std::optional<std::vector<std::array<double, 2>>> rescaled_shape(const DensityVector& rho,
                                                                 const Grid& grid, double t);

/// Hopf-Cole transform u = -log(f)/t on the rescaled coordinates
/// y = x * t^{-5/4}, eta = theta * t^{-1/2}. Entries with f <= 0 are NaN
/// and counted in `masked`.
struct HopfColeField {
    std::vector<double> y;
    std::vector<double> eta;
    Field u;
    std::size_t masked = 0;
};

HopfColeField hopf_cole(const Field& field, const Grid& grid, double t);

}  // namespace spatsort
