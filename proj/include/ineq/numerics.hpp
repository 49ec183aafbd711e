#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ineq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Fn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace detail {

inline double simpson(const Fn&, double a, double b,
                      double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const Fn& f, double a, double b,
                            double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m  = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left  = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson on [a, b] with absolute tolerance.
inline double integrate(const Fn& f, double a, double b,
                        double abs_tol = 1e-12, int max_depth = 48) {
    if (!(a < b)) return 0.0;
    // Split at a few interior points first; integrands here are often peaked.
    const int pieces = 8;
    double total = 0.0;
    const double h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == pieces) ? b : x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), fm = f(xm), f1 = f(x1);
        const double whole = detail::simpson(f, x0, x1, f0, fm, f1);
        total += detail::adaptive_step(f, x0, x1, f0, fm, f1, whole,
                                       abs_tol / pieces, max_depth);
    }
    return total;
}

// Adaptive Simpson with a relative tolerance: a fixed-grid pass estimates the
// magnitude, then the adaptive pass runs with a scaled absolute tolerance.
// Use for integrands whose scale varies by many orders across calls.
inline double integrate_rel(const Fn& f, double a, double b,
                            double rel_tol = 1e-10, double floor_tol = 1e-13) {
    if (!(a < b)) return 0.0;
    const int n = 512;   // magnitude estimate only
    const double h = (b - a) / n;
    double coarse = 0.5 * (std::abs(f(a)) + std::abs(f(b)));
    for (int i = 1; i < n; ++i) coarse += std::abs(f(a + i * h));
    coarse *= h;
    const double tol = std::max(floor_tol, rel_tol * coarse);
    return integrate(f, a, b, tol);
}

// ---------------------------------------------------------------------------
// Root bracketing / bisection
// ---------------------------------------------------------------------------

// Smallest x in [lo, hi] with g(x) >= target, for non-decreasing g.
// Relative tolerance on x.
inline double bisect_increasing(const Fn& g, double target,
                                double lo, double hi,
                                double rel_tol = 1e-12, int max_iter = 200) {
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= target)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= rel_tol * (std::abs(hi) + 1e-300)) break;
    }
    return hi;
}

// Find x with g(x) = target for continuous increasing g, bracket grown
// geometrically from seed. Throws if no bracket within huge range.
inline double solve_increasing(const Fn& g, double target,
                               double seed = 1.0, double rel_tol = 1e-12) {
    if (!(target > 0)) return 0.0;
    double hi = seed;
    int guard = 0;
    while (g(hi) < target) {
        hi *= 2.0;
        if (++guard > 4200) throw std::runtime_error("solve_increasing: no upper bracket");
    }
    double lo = hi;
    guard = 0;
    while (lo > 0 && g(lo) >= target) {
        lo *= 0.5;
        if (++guard > 4200) { lo = 0.0; break; }
    }
    return bisect_increasing(g, target, lo, hi, rel_tol);
}

// ---------------------------------------------------------------------------
// One-dimensional maximization
// ---------------------------------------------------------------------------

// Golden-section refinement of a maximum bracketed by [a, b].
inline double golden_max(const Fn& f, double a, double b,
                         double rel_tol = 1e-10, int max_iter = 200) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b) + 1.0); ++i) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

struct GridMax {
    double value = -kInf;
    double arg = 0.0;
    std::size_t index = 0;
};

inline GridMax grid_max(const Fn& f, const std::vector<double>& xs) {
    GridMax best;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = f(xs[i]);
        if (v > best.value) { best.value = v; best.arg = xs[i]; best.index = i; }
    }
    return best;
}

// Log-spaced grid over [lo, hi] with n points per decade.
inline std::vector<double> log_grid(double lo, double hi, int per_decade = 512) {
    std::vector<double> xs;
    const double llo = std::log10(lo), lhi = std::log10(hi);
    const int n = static_cast<int>(std::ceil((lhi - llo) * per_decade)) + 1;
    xs.reserve(n);
    for (int i = 0; i < n; ++i)
        xs.push_back(std::pow(10.0, llo + (lhi - llo) * i / (n - 1)));
    return xs;
}

// Geometric grid from a to b with n points.
inline std::vector<double> geom_grid(double a, double b, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return xs;
}

// Max over a log grid with one golden refinement pass around the argmax.
// Returns +inf if the sup keeps growing when the range is enlarged twice.
inline double sup_over_positive_reals(const Fn& f,
                                      double lo = 1e-6, double hi = 1e6,
                                      int per_decade = 512) {
    GridMax base = grid_max(f, log_grid(lo, hi, per_decade));
    GridMax wide = grid_max(f, log_grid(lo * 1e-3, hi * 1e3, per_decade / 4));
    if (wide.value > base.value * (1.0 + 1e-2) + 1e-300) {
        GridMax wider = grid_max(f, log_grid(lo * 1e-6, hi * 1e6, per_decade / 8));
        if (wider.value > wide.value * (1.0 + 1e-2) + 1e-300)
            return kInf;
        base = wider;
    } else if (wide.value > base.value) {
        base = wide;
    }
    const double xa = base.arg / 1.1, xb = base.arg * 1.1;
    const double xstar = golden_max(f, xa, xb);
    return std::max(base.value, f(xstar));
}

} // namespace ineq
