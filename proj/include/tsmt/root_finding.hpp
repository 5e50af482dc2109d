#ifndef TSMT_ROOT_FINDING_HPP
#define TSMT_ROOT_FINDING_HPP

#include <cmath>
#include <limits>
#include <utility>

namespace tsmt {

/// Root of a monotone function on [lo, hi] by bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them be zero).
/// Stops once the bracket is narrower than `xtol`, or after `max_iter` halvings.
template <typename F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 400)
{
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    const bool increasing = flo < 0.0;
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

/// Root of an increasing function inside the bracket [lo, hi] using Newton
/// steps, falling back to bisection whenever a step leaves the bracket.
///
/// `fdf(x)` returns {f(x), f'(x)}. Requires f(lo) <= 0 <= f(hi).
template <typename FdF>
double safeguarded_newton(FdF&& fdf, double lo, double hi, double x0, double rel_tol = 1e-15,
                          int max_iter = 300)
{
    double x = (x0 > lo && x0 < hi) ? x0 : lo + 0.5 * (hi - lo);
    for (int it = 0; it < max_iter; ++it) {
        const auto [fx, dfx] = fdf(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double next = x - fx / dfx;
        const bool newton_ok = std::isfinite(next) && dfx > 0.0 && next > lo && next < hi;
        if (!newton_ok) next = lo + 0.5 * (hi - lo);
        const double scale = std::fabs(next) > std::numeric_limits<double>::min() ? std::fabs(next) : 1.0;
        if (std::fabs(next - x) <= rel_tol * scale || hi - lo <= rel_tol * scale) return next;
        x = next;
    }
    return x;
}

/// Minimiser of a unimodal function on [lo, hi] by golden-section search.
/// Returns {argmin, min value}; the bracket is shrunk until narrower than `xtol`.
template <typename F>
std::pair<double, double> golden_section_minimize(F&& f, double lo, double hi, double xtol)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > xtol) {
        if (fc <= fd) {
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
    // the end points are candidates too: the minimum may sit on the boundary
    double best_x = 0.5 * (a + b);
    double best_f = f(best_x);
    for (double x : {lo, hi}) {
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    return {best_x, best_f};
}

}  // namespace tsmt

#endif  // TSMT_ROOT_FINDING_HPP
