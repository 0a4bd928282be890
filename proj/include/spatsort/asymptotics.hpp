#pragma once

#include <array>
#include <utility>

namespace spatsort {
namespace asymptotics {

// Scaling exponents of the large-time regime: space grows like t^alpha,
// traits like t^beta.
inline constexpr double kAlpha = 1.25;
inline constexpr double kBeta = 0.5;

/// Rescaled front position constant y_c = 4*sqrt(lambda/3); the front sits
/// at X(t) ~ y_c * t^{5/4}.
double critical_y(double lambda);

/// Piecewise-power coefficients of the explicit solution:
/// a(y) = K_a_minus * y^{2/5} (y <= y_c), K_a_plus * y^{2/3} (y > y_c);
/// b(y) = 0 (y <= y_c), K_b * y^{4/3} - 1 (y > y_c).
double coef_a_minus(double lambda);  // lambda^{4/5} * 6^{1/5}
double coef_a_plus(double lambda);   // (3*lambda^2/2)^{1/3}
double coef_b(double lambda);        // (3/(16*lambda))^{2/3}

double profile_a(double y, double lambda);
double profile_b(double y, double lambda);

/// Analytic one-sided derivatives (power rules); y > 0, y != y_c.
double profile_a_prime(double y, double lambda);
double profile_b_prime(double y, double lambda);

/// Convenience bundle of the explicit front solution for one lambda.
struct FrontSolution {
    double lambda;
    double y_c;
    double K_a_minus;
    double K_a_plus;
    double K_b;

    explicit FrontSolution(double lambda_);

    double a(double y) const;
    double b(double y) const;
    double a_prime(double y) const;
    double b_prime(double y) const;
};

/// Left-minus-right residuals of the two-equation system satisfied by
/// (a, b, y_c):
///   -b + alpha*y*b' - a*(b')^2 + 1_{y<y_c} - 1
///   -alpha*y*a' + beta*a - 2*lambda^2*(b')^2 + 2*a*b'*a'
/// Both vanish identically on each branch. Throws std::domain_error at the
/// non-differentiable point y = y_c.
std::pair<double, double> residual_system(double y, double lambda);

/// The cubic-in-eta expression whose log is the series seed:
/// g(y,eta) = -b - (eta-a)^2/(4 l^2) + alpha*y*[b' - a'(eta-a)/(2 l^2)]
///            + beta*eta*(eta-a)/(2 l^2) - eta*[b' - a'(eta-a)/(2 l^2)]^2
///            + 1_{y<y_c}.
/// Satisfies g(y, a(y)) = 1 and d/deta g(y, a(y)) = 0.
double g_eval(double y, double eta, double lambda);

/// Normalized forms of 1 - g as polynomials in X = eta/a(y):
/// behind the front 1-g = (6/25) * X * (X-1)^2 (lambda-independent);
/// ahead 1-g = gamma_q(lambda) * y^{4/3} * (X-1)^2 * (X-2).
double poly_p_behind(double x_ratio);
double gamma_q_ahead(double lambda);  // (3/2)^{5/3} / (9 * lambda^{2/3})
double poly_q_ahead(double x_ratio, double lambda);

/// Open interval of trait ratios X = eta/a(y) around 1 on which
/// g(y, a(y)*X) > 0, located by bisection on the upper edge (the lower edge
/// is 0 behind the front and the window contains (0,2] ahead).
struct TraitWindow {
    double ratio_lo = 0.0;
    double ratio_hi = 0.0;
};

TraitWindow admissible_trait_window(double y, double lambda);

/// T_y(eta) = log g(y,eta); throws std::domain_error (reporting the
/// admissible window) where g <= 0. Evaluated through the polynomial
/// factorization of 1 - g, so T_y(a(y)) is exactly zero.
double t_eval(double y, double eta, double lambda);

struct SeriesResult {
    double value = 0.0;
    int terms = 0;
};

/// Corrector series u1(y,eta) = sum_k 2^k T_y[a + (eta-a) 2^{-k}].
/// T_y vanishes to second order at a(y), so terms decay geometrically
/// (ratio 1/2). Stops when |term| < tol; throws std::runtime_error with the
/// last term magnitude if kmax terms do not reach tol.
SeriesResult u1_series(double y, double eta, double lambda, int kmax = 64,
                       double tol = 1e-12);

/// Residual of the telescoping identity the series solves:
/// |u1(eta) + u1(a) - 2*u1((eta+a)/2) - T_y(eta)|. Expected below ~10*tol.
double verify_limit_equation(double y, double eta, double lambda, int kmax = 64,
                             double tol = 1e-12);

/// Dimensional front position 4*sqrt(lambda*theta_min/3) * r^{3/4} * t^{5/4};
/// reduces to y_c * t^{5/4} when r = theta_min = 1. `lambda` is the rescaled
/// segregational deviation.
double front_position_theory(double t, double lambda, double r = 1.0,
                             double theta_min = 1.0);

enum class FrontRegion { kBehind, kAhead };

/// Mean dispersive trait: lambda^{4/5} (6 x^2)^{1/5} behind the front,
/// (3 lambda^2 x^2 / (2t))^{1/3} ahead. The two agree at x = y_c t^{5/4}.
double mean_trait_theory(FrontRegion region, double x, double t, double lambda);

/// Leading-order density of the explicit large-time approximation: a unit
/// Gaussian in theta around the regional mean trait, multiplied ahead of the
/// front by the amplitude exp[(1 - (x/(y_c t^{5/4}))^q) t]. The exponent q
/// defaults to 4/3 (the displayed formula, consistent with b(y)); 1/3
/// matches a prose variant and is selectable for comparison.
double conjecture_density(double t, double x, double theta, double lambda,
                          double prefactor_exponent = 4.0 / 3.0);

/// log of the ahead-of-front amplitude; 0 for x <= y_c t^{5/4}.
double conjecture_prefactor_log(double t, double x, double lambda,
                                double prefactor_exponent = 4.0 / 3.0);

/// Coordinate and amplitude maps between dimensional and rescaled variables:
/// t_r = r t, x_r = sqrt(r/theta_min) x, theta_r = theta/theta_min,
/// f_r = (theta_min/K) f.
struct DimensionalMap {
    double r = 1.0;
    double K = 1.0;
    double theta_min = 1.0;

    std::array<double, 3> to_rescaled(double t, double x, double theta) const;
    std::array<double, 3> to_dimensional(double t, double x, double theta) const;
    double density_to_rescaled(double f) const { return theta_min / K * f; }
    double density_to_dimensional(double f) const { return K / theta_min * f; }

    /// Dimensional front coefficient 4*sqrt(lambda_dim/3) * r^{3/4} with
    /// lambda_dim = lambda * theta_min.
    double front_coefficient(double lambda) const;
};

/// Evaluator bundle mirroring the CLI defaults.
struct AsymptoticParams {
    double lambda = 0.7071067811865476;  // sqrt(1/2)
    double r = 1.0;
    double K = 1.0;
    double theta_min = 1.0;
    int series_kmax = 64;
    double series_tol = 1e-12;
    double j_halfwidth = 0.05;  // trait window J = [1-h, 1+h] in ratio units
};

}  // namespace asymptotics
}  // namespace spatsort
