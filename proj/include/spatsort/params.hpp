#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spatsort {

/// Thrown for invalid parameter values, malformed config files and
/// violated stability bounds. CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Physical and numerical constants of a run, in rescaled variables
/// (theta_min is 1 by construction). Defaults reproduce the reference
/// simulation setup: dt=0.02, dx=4, dtheta=2/3, x_max=3000, theta_max=201,
/// lambda2=1/2, r=K=1, t_end=200.
struct Params {
    double r = 1.0;                 // growth rate at low density
    double K = 1.0;                 // carrying capacity
    double lambda2 = 0.5;           // segregational variance, > 0
    double dt = 0.02;               // time step
    double dx = 4.0;                // space step
    double dtheta = 2.0 / 3.0;      // trait step
    double x_max = 3000.0;          // spatial domain [0, x_max]
    double theta_max = 201.0;       // trait domain [theta_min, theta_max]
    double theta_min = 1.0;         // fixed at 1 in rescaled variables
    double t_end = 200.0;           // final time
    double front_threshold = 0.01;  // density level defining X_num
    double record_dt = 1.0;         // diagnostic record cadence
    std::vector<double> output_times = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};

    /// Explicit-scheme stability bound for the trait-weighted diffusion:
    /// dt must not exceed dx^2 / (2 * theta_max).
    double cfl_bound() const { return dx * dx / (2.0 * theta_max); }

    /// Throws ConfigError on any violated invariant; sorts and dedupes
    /// output_times as a side effect.
    void validate();

    bool operator==(const Params&) const = default;
};

}  // namespace spatsort
