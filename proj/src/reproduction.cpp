#include "spatsort/reproduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace spatsort {

SegregationKernel::SegregationKernel(double lambda2_) : lambda2(lambda2_) {
    if (!(lambda2 > 0.0) || !std::isfinite(lambda2))
        throw std::invalid_argument("SegregationKernel: lambda2 must be positive");
    norm_ = 1.0 / std::sqrt(2.0 * std::numbers::pi * lambda2);
    inv_2l2_ = 1.0 / (2.0 * lambda2);
}

double SegregationKernel::operator()(double d) const {
    return norm_ * std::exp(-d * d * inv_2l2_);
}

double kernel_eval(const SegregationKernel& kernel, double theta, double theta1,
                   double theta2) {
    return kernel(theta - 0.5 * (theta1 + theta2));
}

namespace {

void check_shapes(const Field& field, const DensityVector& rho, const Grid& grid,
                  const char* who) {
    if (field.nx != grid.nx() || field.ntheta != grid.ntheta())
        throw std::invalid_argument(std::string(who) + ": field shape does not match grid");
    if (rho.size() != field.nx)
        throw std::invalid_argument(std::string(who) + ": rho length does not match field");
}

}  // namespace

ReproductionOutput reproduce_bruteforce(const Field& field, const DensityVector& rho,
                                        const SegregationKernel& kernel, const Grid& grid) {
    check_shapes(field, rho, grid, "reproduce_bruteforce");
    const std::size_t nt = field.ntheta;
    const double dth2 = grid.dtheta * grid.dtheta;
    ReproductionOutput out{Field(field.nx, nt), ReproductionMethod::kBruteForce};
    for (std::size_t l = 0; l < field.nx; ++l) {
        if (!(rho[l] > 0.0)) continue;  // zero row, also guards negative overshoot
        const double* row = field.row(l);
        double* dst = out.values.row(l);
        for (std::size_t k = 0; k < nt; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < nt; ++i) {
                const double fi = row[i];
                if (fi == 0.0) continue;
                for (std::size_t j = 0; j < nt; ++j) {
                    acc += fi * kernel_eval(kernel, grid.thetas[k], grid.thetas[i],
                                            grid.thetas[j]) *
                           row[j];
                }
            }
            dst[k] = dth2 * acc / rho[l];
        }
    }
    return out;
}

std::vector<double> self_convolution(std::span<const double> row) {
    const std::size_t n = row.size();
    if (n == 0) return {};
    std::vector<double> c(2 * n - 1, 0.0);
    for (std::size_t m = 0; m < c.size(); ++m) {
        const std::size_t i0 = m >= n ? m - n + 1 : 0;
        const std::size_t i1 = std::min(m, n - 1);
        double acc = 0.0;
        for (std::size_t i = i0; i <= i1; ++i) acc += row[i] * row[m - i];
        c[m] = acc;
    }
    return c;
}

HalfStepKernelTable::HalfStepKernelTable(const SegregationKernel& kernel, double dtheta_,
                                         std::size_t ntheta)
    : dtheta(dtheta_) {
    const std::size_t len = ntheta == 0 ? 0 : 2 * ntheta - 1;
    g.resize(len);
    for (std::size_t p = 0; p < len; ++p)
        g[p] = kernel(static_cast<double>(p) * dtheta / 2.0);
    // First index beyond the last exactly-zero-free entry; the Gaussian
    // underflows monotonically, so everything at or past `support` is 0.0.
    support = len;
    while (support > 0 && g[support - 1] == 0.0) --support;
}

namespace {

// Symmetric view g[|d|] for d in [-(S-1), S-1], laid out so the hot loop
// walks it contiguously.
std::vector<double> symmetric_table(const HalfStepKernelTable& table) {
    const std::size_t s = table.support;
    if (s == 0) return {};
    std::vector<double> sym(2 * s - 1);
    for (std::size_t d = 0; d < s; ++d) {
        sym[s - 1 + d] = table.g[d];
        sym[s - 1 - d] = table.g[d];
    }
    return sym;
}

void fast_rows(Field& out, const Field& field, const DensityVector& rho,
               const HalfStepKernelTable& table, const std::vector<double>& sym,
               double dtheta, std::size_t l_begin, std::size_t l_end) {
    const std::size_t nt = field.ntheta;
    const long s = static_cast<long>(table.support);
    const double dth2 = dtheta * dtheta;
    std::vector<double> c;
    c.reserve(nt == 0 ? 0 : 2 * nt - 1);

    for (std::size_t l = l_begin; l < l_end; ++l) {
        double* dst = out.row(l);
        std::fill(dst, dst + nt, 0.0);
        if (!(rho[l] > 0.0) || s == 0) continue;

        const double* row = field.row(l);
        // Nonzero support of the row; entries outside contribute exact zeros.
        std::size_t lo = 0;
        while (lo < nt && row[lo] == 0.0) ++lo;
        if (lo == nt) continue;
        std::size_t hi = nt - 1;
        while (row[hi] == 0.0) --hi;
        const std::size_t w = hi - lo + 1;

        c.assign(2 * w - 1, 0.0);
        for (std::size_t m = 0; m < c.size(); ++m) {
            const std::size_t i0 = m >= w ? m - w + 1 : 0;
            const std::size_t i1 = std::min(m, w - 1);
            double acc = 0.0;
            const double* a = row + lo;
            for (std::size_t i = i0; i <= i1; ++i) acc += a[i] * a[m - i];
            c[m] = acc;
        }

        // (acc * dth2) / rho stays finite for denormal-scale rows; a
        // precomputed dth2/rho would overflow where rho underflows.
        const double rho_l = rho[l];
        const long m_first = 2 * static_cast<long>(lo);
        const long m_last = 2 * static_cast<long>(hi);
        for (std::size_t k = 0; k < nt; ++k) {
            const long kk = 2 * static_cast<long>(k);
            const long m0 = std::max(m_first, kk - (s - 1));
            const long m1 = std::min(m_last, kk + (s - 1));
            if (m0 > m1) continue;
            const double* cp = c.data() + (m0 - m_first);
            // sym index (s-1) + kk - m decreases by one per m.
            const double* gp = sym.data() + (s - 1 + kk - m0);
            double acc = 0.0;
            const long n = m1 - m0 + 1;
            for (long t = 0; t < n; ++t) acc += cp[t] * gp[-t];
            dst[k] = acc * dth2 / rho_l;
        }
    }
}

}  // namespace

void reproduce_fast_into(Field& out, const Field& field, const DensityVector& rho,
                         const HalfStepKernelTable& table, int threads) {
    if (out.nx != field.nx || out.ntheta != field.ntheta)
        throw std::invalid_argument("reproduce_fast_into: output shape mismatch");
    if (rho.size() != field.nx)
        throw std::invalid_argument("reproduce_fast_into: rho length mismatch");
    if (table.g.size() != (field.ntheta == 0 ? 0 : 2 * field.ntheta - 1))
        throw std::invalid_argument("reproduce_fast_into: kernel table size mismatch");

    const std::vector<double> sym = symmetric_table(table);
    const double dtheta = table.dtheta;

    std::size_t nworkers = threads <= 0 ? std::thread::hardware_concurrency()
                                        : static_cast<std::size_t>(threads);
    if (nworkers == 0) nworkers = 1;
    nworkers = std::min<std::size_t>(nworkers, field.nx == 0 ? 1 : field.nx);

    if (nworkers <= 1) {
        fast_rows(out, field, rho, table, sym, dtheta, 0, field.nx);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    const std::size_t chunk = (field.nx + nworkers - 1) / nworkers;
    for (std::size_t wi = 0; wi < nworkers; ++wi) {
        const std::size_t b = wi * chunk;
        const std::size_t e = std::min(field.nx, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e] { fast_rows(out, field, rho, table, sym, dtheta, b, e); });
    }
    for (auto& th : pool) th.join();
}

ReproductionOutput reproduce_fast(const Field& field, const DensityVector& rho,
                                  const SegregationKernel& kernel, const Grid& grid,
                                  int threads) {
    check_shapes(field, rho, grid, "reproduce_fast");
    HalfStepKernelTable table(kernel, grid.dtheta, grid.ntheta());
    ReproductionOutput out{Field(field.nx, field.ntheta), ReproductionMethod::kFast};
    reproduce_fast_into(out.values, field, rho, table, threads);
    return out;
}

}  // namespace spatsort
