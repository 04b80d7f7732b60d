// optimize.hpp: derivative-free 1-D minimization.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

struct MinimizeResult {
    double argmin;
    double value;
    int iterations;
};

struct MinimizeOptions {
    double abs_tol = 1e-9;
    int max_iterations = 200;
    std::size_t scan_points = 512;  // log-spaced samples used to locate the basin
    bool polish = true;             // central-difference Newton steps after bracketing
};

/// Golden-section search on [lo, hi]. Assumes f is unimodal on the bracket.
template <typename F>
MinimizeResult golden_section(F&& f, double lo, double hi, double abs_tol, int max_iterations) {
    constexpr double inv_phi = 0.61803398874989484820;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    int it = 0;
    while (b - a > abs_tol) {
        if (++it > max_iterations) {
            throw NumericError("golden-section search did not converge within " +
                               std::to_string(max_iterations) + " iterations (bracket width " +
                               std::to_string(b - a) + ")");
        }
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x), it};
}

namespace detail {

// Newton steps using central differences. Golden-section alone resolves
// flat minima only to ~sqrt(machine eps) in x.
template <typename F>
MinimizeResult polish_minimum(F& f, MinimizeResult r, double lo, double hi, double scale) {
    double h = 1e-4 * scale;
    for (int step = 0; step < 3; ++step) {
        const double x = r.argmin;
        if (x - h <= lo || x + h >= hi) break;
        const double fm = f(x - h), f0 = f(x), fp = f(x + h);
        const double curvature = fm - 2.0 * f0 + fp;
        if (!(curvature > 0.0)) break;
        const double next = x - 0.5 * h * (fp - fm) / curvature;
        if (!(next > lo && next < hi) || std::abs(next - x) > h) break;
        const double fn = f(next);
        if (fn > f0 + 1e-14 * std::abs(f0)) break;
        r = {next, fn, r.iterations + 1};
        h *= 0.1;
    }
    return r;
}

}  // namespace detail

/// Global minimum of f on (lo, hi]: log-spaced scan to find the best basin,
/// golden-section inside the neighbouring cells, optional Newton polish.
/// Throws NumericError when the best sample sits on the bracket edge (no
/// interior minimum) or the function is not finite anywhere.
template <typename F>
MinimizeResult minimize_on_bracket(F&& f, double lo, double hi, const MinimizeOptions& opt = {}) {
    if (!(lo > 0.0 && hi > lo)) throw DomainError("minimizer needs 0 < lo < hi");
    const std::size_t n = opt.scan_points < 3 ? 3 : opt.scan_points;
    const double log_lo = std::log(lo), log_hi = std::log(hi);
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                        static_cast<double>(n - 1));
    }
    grid.front() = lo;
    grid.back() = hi;

    std::size_t best = n;
    double best_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f(grid[i]);
        if (std::isfinite(v) && (best == n || v < best_value)) {
            best = i;
            best_value = v;
        }
    }
    if (best == n) throw NumericError("objective is not finite anywhere on the bracket");
    if (best == 0 || best == n - 1) {
        throw NumericError("minimum lies on the bracket edge t = " + std::to_string(grid[best]) +
                           "; no interior optimum");
    }
    const double a = grid[best - 1], b = grid[best + 1];
    MinimizeResult r = golden_section(f, a, b, opt.abs_tol, opt.max_iterations);
    if (opt.polish) r = detail::polish_minimum(f, r, a, b, b - a);
    return r;
}

}  // namespace zeno
