#include "spatsort/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spatsort {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

void Params::validate() {
    require(std::isfinite(r) && r > 0.0, "r must be positive");
    require(std::isfinite(K) && K > 0.0, "K must be positive");
    require(std::isfinite(lambda2) && lambda2 > 0.0, "lambda2 must be positive");
    require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    require(std::isfinite(dx) && dx > 0.0, "dx must be positive");
    require(std::isfinite(dtheta) && dtheta > 0.0, "dtheta must be positive");
    require(std::isfinite(x_max) && x_max > 0.0, "x_max must be positive");
    require(theta_min == 1.0, "theta_min is fixed to 1 in rescaled variables");
    require(std::isfinite(theta_max) && theta_max > theta_min,
            "theta_max must exceed theta_min");
    require(std::isfinite(t_end) && t_end >= 0.0, "t_end must be non-negative");
    require(std::isfinite(front_threshold) && front_threshold > 0.0,
            "front_threshold must be positive");
    require(std::isfinite(record_dt) && record_dt > 0.0, "record_dt must be positive");

    const double bound = cfl_bound();
    if (dt > bound) {
        std::ostringstream msg;
        msg << "dt = " << dt << " violates the explicit diffusion stability bound "
            << "dx^2/(2*theta_max) = " << bound;
        throw ConfigError(msg.str());
    }

    for (double t : output_times)
        require(std::isfinite(t) && t >= 0.0, "output_times entries must be non-negative");
    std::sort(output_times.begin(), output_times.end());
    output_times.erase(std::unique(output_times.begin(), output_times.end()),
                       output_times.end());
}

}  // namespace spatsort
