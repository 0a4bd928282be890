#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spatsort/field.hpp"
#include "spatsort/grid.hpp"

namespace spatsort {

/// Normalized Gaussian segregation density with variance lambda2:
/// G(d) = (2*pi*lambda2)^{-1/2} * exp(-d^2 / (2*lambda2)).
struct SegregationKernel {
    double lambda2;

    explicit SegregationKernel(double lambda2_);

    double operator()(double d) const;

    double norm() const { return norm_; }

private:
    double norm_;      // (2*pi*lambda2)^{-1/2}
    double inv_2l2_;   // 1 / (2*lambda2)
};

/// G(theta - (theta1+theta2)/2): density of an offspring trait theta given
/// parental traits theta1, theta2 under the infinitesimal model.
double kernel_eval(const SegregationKernel& kernel, double theta, double theta1, double theta2);

enum class ReproductionMethod { kBruteForce, kFast };

struct ReproductionOutput {
    Field values;
    ReproductionMethod method;
};

/// Mixing operator B[f] per spatial row, as the literal triple sum
///   V_{k,l} = dtheta^2 * sum_{i,j} F_{l,i} G[theta_k - (theta_i+theta_j)/2] F_{l,j},
/// divided by rho_l where rho_l > 0, zero rows elsewhere. O(Ntheta^3) per row;
/// reference implementation used by tests and oracle checks.
ReproductionOutput reproduce_bruteforce(const Field& field, const DensityVector& rho,
                                        const SegregationKernel& kernel, const Grid& grid);

/// Discrete self-convolution c[m] = sum_{i+j=m} row[i]*row[j],
/// m = 0 .. 2n-2 for an input of length n.
std::vector<double> self_convolution(std::span<const double> row);

/// 1-D kernel table over the half-step lattice: g[p] = G(p * dtheta / 2),
/// p = 0 .. 2*ntheta-2. The regrouped reproduction sum only evaluates the
/// kernel at theta_k - (theta_i+theta_j)/2 = (2k - i - j) * dtheta/2, so this
/// table replaces the Ntheta^3 hypermatrix of kernel values.
///
/// `support` is the first index whose entry underflows to exactly 0.0;
/// entries beyond it contribute nothing to any sum and are skipped. The
/// cutoff is exact, not a tolerance: no small nonzero value is ever dropped.
struct HalfStepKernelTable {
    std::vector<double> g;
    std::size_t support = 0;
    double dtheta = 0.0;

    HalfStepKernelTable(const SegregationKernel& kernel, double dtheta_, std::size_t ntheta);
};

/// Same operator as reproduce_bruteforce, regrouped by the parental trait sum
/// s = theta_i + theta_j:
///   V_{k,l} = dtheta^2 * sum_m c_l[m] * G[(2k - m) * dtheta/2],
/// with c_l the self-convolution of row l restricted to its nonzero support.
/// O(w^2 + Ntheta*min(w, kernel width)) per row, w = support width.
///
/// Row-parallel over `threads` workers (0 = hardware concurrency); the
/// per-row summation order is fixed, so results do not depend on the
/// worker count. Results match the brute force up to accumulation
/// round-off (<= 1e-10 relative).
ReproductionOutput reproduce_fast(const Field& field, const DensityVector& rho,
                                  const SegregationKernel& kernel, const Grid& grid,
                                  int threads = 1);

/// Workspace-reusing core of reproduce_fast; `out` must already have the
/// field's shape and `table` must match (kernel, dtheta, ntheta).
void reproduce_fast_into(Field& out, const Field& field, const DensityVector& rho,
                         const HalfStepKernelTable& table, int threads);

}  // namespace spatsort
