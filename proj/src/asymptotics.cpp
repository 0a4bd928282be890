#include "spatsort/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spatsort {
namespace asymptotics {

namespace {

void require_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("asymptotics: lambda must be positive");
}

void require_off_front(double y, double lambda) {
    if (y == critical_y(lambda))
        throw std::domain_error("asymptotics: a and b are not differentiable at y_c");
}

}  // namespace

double critical_y(double lambda) {
    require_lambda(lambda);
    return 4.0 * std::sqrt(lambda / 3.0);
}

double coef_a_minus(double lambda) { return std::pow(lambda, 0.8) * std::pow(6.0, 0.2); }

double coef_a_plus(double lambda) { return std::cbrt(1.5 * lambda * lambda); }

double coef_b(double lambda) {
    const double base = 3.0 / (16.0 * lambda);
    return std::cbrt(base * base);
}

double profile_a(double y, double lambda) {
    require_lambda(lambda);
    if (y < 0.0) throw std::invalid_argument("profile_a: y must be non-negative");
    return y <= critical_y(lambda) ? coef_a_minus(lambda) * std::pow(y, 0.4)
                                   : coef_a_plus(lambda) * std::pow(y, 2.0 / 3.0);
}

double profile_b(double y, double lambda) {
    require_lambda(lambda);
    if (y < 0.0) throw std::invalid_argument("profile_b: y must be non-negative");
    return y <= critical_y(lambda) ? 0.0
                                   : coef_b(lambda) * std::pow(y, 4.0 / 3.0) - 1.0;
}

double profile_a_prime(double y, double lambda) {
    require_lambda(lambda);
    if (!(y > 0.0)) throw std::invalid_argument("profile_a_prime: y must be positive");
    require_off_front(y, lambda);
    return y < critical_y(lambda)
               ? 0.4 * coef_a_minus(lambda) * std::pow(y, -0.6)
               : (2.0 / 3.0) * coef_a_plus(lambda) * std::pow(y, -1.0 / 3.0);
}

double profile_b_prime(double y, double lambda) {
    require_lambda(lambda);
    if (!(y > 0.0)) throw std::invalid_argument("profile_b_prime: y must be positive");
    require_off_front(y, lambda);
    return y < critical_y(lambda) ? 0.0 : (4.0 / 3.0) * coef_b(lambda) * std::cbrt(y);
}

FrontSolution::FrontSolution(double lambda_)
    : lambda(lambda_),
      y_c(critical_y(lambda_)),
      K_a_minus(coef_a_minus(lambda_)),
      K_a_plus(coef_a_plus(lambda_)),
      K_b(coef_b(lambda_)) {}

double FrontSolution::a(double y) const { return profile_a(y, lambda); }
double FrontSolution::b(double y) const { return profile_b(y, lambda); }
double FrontSolution::a_prime(double y) const { return profile_a_prime(y, lambda); }
double FrontSolution::b_prime(double y) const { return profile_b_prime(y, lambda); }

std::pair<double, double> residual_system(double y, double lambda) {
    require_lambda(lambda);
    if (!(y > 0.0)) throw std::invalid_argument("residual_system: y must be positive");
    require_off_front(y, lambda);
    const double a = profile_a(y, lambda);
    const double b = profile_b(y, lambda);
    const double ap = profile_a_prime(y, lambda);
    const double bp = profile_b_prime(y, lambda);
    const double indicator = y < critical_y(lambda) ? 1.0 : 0.0;
    const double res1 = -b + kAlpha * y * bp - a * bp * bp + indicator - 1.0;
    const double res2 = -kAlpha * y * ap + kBeta * a - 2.0 * lambda * lambda * bp * bp +
                        2.0 * a * bp * ap;
    return {res1, res2};
}

double g_eval(double y, double eta, double lambda) {
    require_lambda(lambda);
    if (!(y > 0.0)) throw std::invalid_argument("g_eval: y must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("g_eval: eta must be positive");
    require_off_front(y, lambda);
    const double a = profile_a(y, lambda);
    const double b = profile_b(y, lambda);
    const double ap = profile_a_prime(y, lambda);
    const double bp = profile_b_prime(y, lambda);
    const double l2 = lambda * lambda;
    const double d = eta - a;
    const double grad = bp - ap * d / (2.0 * l2);  // d/dy of u0 along the profile
    const double indicator = y < critical_y(lambda) ? 1.0 : 0.0;
    return -b - d * d / (4.0 * l2) + kAlpha * y * grad + kBeta * eta * d / (2.0 * l2) -
           eta * grad * grad + indicator;
}

double poly_p_behind(double x_ratio) {
    const double d = x_ratio - 1.0;
    return (6.0 / 25.0) * x_ratio * d * d;
}

double gamma_q_ahead(double lambda) {
    require_lambda(lambda);
    return std::pow(1.5, 5.0 / 3.0) / (9.0 * std::pow(lambda, 2.0 / 3.0));
}

double poly_q_ahead(double x_ratio, double lambda) {
    const double d = x_ratio - 1.0;
    return gamma_q_ahead(lambda) * d * d * (x_ratio - 2.0);
}

TraitWindow admissible_trait_window(double y, double lambda) {
    require_lambda(lambda);
    if (!(y > 0.0))
        throw std::invalid_argument("admissible_trait_window: y must be positive");
    require_off_front(y, lambda);
    const double a = profile_a(y, lambda);
    auto g_at_ratio = [&](double ratio) { return g_eval(y, a * ratio, lambda); };

    // g(y, a*X) > 0 holds on (0, X_hi): behind the front 1-g = (6/25) X (X-1)^2
    // stays below 1 until X_hi ~ 2.38; ahead 1-g < 0 on (0,2) and crosses 1
    // at some X_hi > 2 that shrinks as y grows.
    double lo = 1.0;
    double hi = 2.0;
    while (g_at_ratio(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12)
            throw std::runtime_error("admissible_trait_window: no upper g-root found");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g_at_ratio(mid) > 0.0 ? lo : hi) = mid;
    }
    return TraitWindow{0.0, lo};
}

double t_eval(double y, double eta, double lambda) {
    require_lambda(lambda);
    if (!(y > 0.0)) throw std::invalid_argument("t_eval: y must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("t_eval: eta must be positive");
    require_off_front(y, lambda);
    // 1 - g factors exactly through (X - 1)^2, X = eta/a(y). Evaluating
    // log g as log1p(-P(X)) keeps T(a(y)) = 0 exact; the displayed cubic
    // cancels only to rounding there, which the 2^k series would amplify.
    const double a = profile_a(y, lambda);
    const double x_ratio = eta / a;
    const double p = y < critical_y(lambda)
                         ? poly_p_behind(x_ratio)
                         : std::pow(y, 4.0 / 3.0) * poly_q_ahead(x_ratio, lambda);
    if (!(p < 1.0)) {
        const TraitWindow w = admissible_trait_window(y, lambda);
        std::ostringstream msg;
        msg << "t_eval: g(y=" << y << ", eta=" << eta << ") = " << 1.0 - p
            << " is not positive; admissible eta window is (" << w.ratio_lo * a << ", "
            << w.ratio_hi * a << ")";
        throw std::domain_error(msg.str());
    }
    return std::log1p(-p);
}

SeriesResult u1_series(double y, double eta, double lambda, int kmax, double tol) {
    if (kmax < 1) throw std::invalid_argument("u1_series: kmax must be at least 1");
    if (!(tol > 0.0)) throw std::invalid_argument("u1_series: tol must be positive");
    const double a = profile_a(y, lambda);
    double sum = 0.0;
    double scale = 1.0;   // 2^k
    double offset = eta - a;
    double last = 0.0;
    for (int k = 0; k < kmax; ++k) {
        const double term = scale * t_eval(y, a + offset, lambda);
        sum += term;
        last = term;
        if (std::abs(term) < tol) return SeriesResult{sum, k + 1};
        scale *= 2.0;
        offset *= 0.5;
    }
    std::ostringstream msg;
    msg << "u1_series: no convergence within " << kmax << " terms; last |term| = "
        << std::abs(last);
    throw std::runtime_error(msg.str());
}

double verify_limit_equation(double y, double eta, double lambda, int kmax, double tol) {
    const double a = profile_a(y, lambda);
    const double u_eta = u1_series(y, eta, lambda, kmax, tol).value;
    const double u_a = u1_series(y, a, lambda, kmax, tol).value;
    const double u_mid = u1_series(y, 0.5 * (eta + a), lambda, kmax, tol).value;
    return std::abs(u_eta + u_a - 2.0 * u_mid - t_eval(y, eta, lambda));
}

double front_position_theory(double t, double lambda, double r, double theta_min) {
    require_lambda(lambda);
    if (t < 0.0) throw std::invalid_argument("front_position_theory: t must be >= 0");
    return 4.0 * std::sqrt(lambda * theta_min / 3.0) * std::pow(r, 0.75) * std::pow(t, 1.25);
}

double mean_trait_theory(FrontRegion region, double x, double t, double lambda) {
    require_lambda(lambda);
    if (x < 0.0) throw std::invalid_argument("mean_trait_theory: x must be >= 0");
    if (region == FrontRegion::kBehind)
        return std::pow(lambda, 0.8) * std::pow(6.0 * x * x, 0.2);
    if (!(t > 0.0))
        throw std::invalid_argument("mean_trait_theory: t must be positive ahead of the front");
    return std::cbrt(3.0 * lambda * lambda * x * x / (2.0 * t));
}

double conjecture_prefactor_log(double t, double x, double lambda,
                                double prefactor_exponent) {
    const double front = critical_y(lambda) * std::pow(t, 1.25);
    if (x <= front) return 0.0;
    return (1.0 - std::pow(x / front, prefactor_exponent)) * t;
}

double conjecture_density(double t, double x, double theta, double lambda,
                          double prefactor_exponent) {
    require_lambda(lambda);
    if (!(t > 0.0)) throw std::invalid_argument("conjecture_density: t must be positive");
    if (x < 0.0) throw std::invalid_argument("conjecture_density: x must be >= 0");
    const double front = critical_y(lambda) * std::pow(t, 1.25);
    const bool behind = x <= front;
    const double mean = mean_trait_theory(behind ? FrontRegion::kBehind : FrontRegion::kAhead,
                                          x, t, lambda);
    const double d = theta - mean;
    double log_f = -d * d / (4.0 * lambda * lambda);
    if (!behind) log_f += (1.0 - std::pow(x / front, prefactor_exponent)) * t;
    return std::exp(log_f);
}

std::array<double, 3> DimensionalMap::to_rescaled(double t, double x, double theta) const {
    return {r * t, std::sqrt(r / theta_min) * x, theta / theta_min};
}

std::array<double, 3> DimensionalMap::to_dimensional(double t, double x, double theta) const {
    return {t / r, std::sqrt(theta_min / r) * x, theta * theta_min};
}

double DimensionalMap::front_coefficient(double lambda) const {
    return 4.0 * std::sqrt(lambda * theta_min / 3.0) * std::pow(r, 0.75);
}

}  // namespace asymptotics
}  // namespace spatsort
