#ifndef TSMT_SPECIAL_FUNCTIONS_HPP
#define TSMT_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <limits>
#include <utility>

#include "tsmt/error.hpp"

// Regularized incomplete gamma and beta functions, series / continued-fraction
// switching at the conventional crossover points (x < a + 1 for gamma,
// x < (a + 1) / (a + b + 2) for beta).

namespace tsmt::special {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = 1e-300;
inline constexpr int kMaxIter = 100000;

/// log Gamma(a) for a > 0 without touching the global signgam.
inline double log_gamma(double a)
{
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(a, &sign);
#else
    return std::lgamma(a);
#endif
}

/// log of x^a e^{-x} / Gamma(a), the common prefactor of P(a,x) and Q(a,x).
inline double log_gamma_prefactor(double a, double x)
{
    return a * std::log(x) - x - log_gamma(a);
}

namespace detail {

// sum_{k>=0} x^k / (a (a+1) ... (a+k)); P(a,x) = prefactor * series
inline double gamma_series(double a, double x)
{
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum;
}

// modified Lentz continued fraction; Q(a,x) = prefactor * cf
inline double gamma_continued_fraction(double a, double x)
{
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

inline double beta_continued_fraction(double a, double b, double x)
{
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace detail

/// Regularized lower and upper incomplete gamma {P(a,x), Q(a,x)}.
/// The smaller of the two is computed directly, the other as its complement.
inline std::pair<double, double> incomplete_gamma(double a, double x)
{
    if (!(a > 0.0)) throw domain_error("incomplete_gamma: a must be positive");
    if (std::isnan(x)) throw domain_error("incomplete_gamma: x is NaN");
    if (x <= 0.0) return {0.0, 1.0};
    if (std::isinf(x)) return {1.0, 0.0};
    const double log_pre = log_gamma_prefactor(a, x);
    if (x < a + 1.0) {
        const double p = std::exp(log_pre) * detail::gamma_series(a, x);
        return {p, 1.0 - p};
    }
    const double q = std::exp(log_pre) * detail::gamma_continued_fraction(a, x);
    return {1.0 - q, q};
}

/// log Q(a,x), accurate deep into the upper tail where Q itself underflows.
inline double log_upper_incomplete_gamma(double a, double x)
{
    if (!(a > 0.0)) throw domain_error("log_upper_incomplete_gamma: a must be positive");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    const double log_pre = log_gamma_prefactor(a, x);
    if (x < a + 1.0) return std::log1p(-std::exp(log_pre) * detail::gamma_series(a, x));
    return log_pre + std::log(detail::gamma_continued_fraction(a, x));
}

/// Regularized incomplete beta {I_x(a,b), 1 - I_x(a,b)} given x and y = 1 - x
/// (y is passed separately so callers can supply it without cancellation).
inline std::pair<double, double> incomplete_beta(double a, double b, double x, double y)
{
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("incomplete_beta: a and b must be positive");
    if (x <= 0.0) return {0.0, 1.0};
    if (y <= 0.0) return {1.0, 0.0};
    const double log_bt = log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log(y);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double v = bt * detail::beta_continued_fraction(a, b, x) / a;
        return {v, 1.0 - v};
    }
    const double w = bt * detail::beta_continued_fraction(b, a, y) / b;
    return {1.0 - w, w};
}

}  // namespace tsmt::special

#endif  // TSMT_SPECIAL_FUNCTIONS_HPP
