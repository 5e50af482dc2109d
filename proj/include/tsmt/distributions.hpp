#ifndef TSMT_DISTRIBUTIONS_HPP
#define TSMT_DISTRIBUTIONS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "tsmt/error.hpp"
#include "tsmt/root_finding.hpp"
#include "tsmt/special_functions.hpp"

namespace tsmt {

enum class Family { normal, chi_square, student_t };

/// A null distribution: N(0,1), chi-square with df degrees of freedom, or Student t with df.
struct DistSpec {
    Family family = Family::normal;
    int df = 0;

    static DistSpec normal() { return {Family::normal, 0}; }
    static DistSpec chi_square(int df) { return {Family::chi_square, df}; }
    static DistSpec student_t(int df) { return {Family::student_t, df}; }
};

/// Closed interval [lower, upper] known to contain a quantile.
struct QuantileBracket {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double x) const { return lower <= x && x <= upper; }
};

namespace detail {

inline void check_df(const DistSpec& dist)
{
    if (dist.family != Family::normal && dist.df < 1) {
        throw config_error("distribution requires df >= 1, got " + std::to_string(dist.df));
    }
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// upper tail of t_df at x >= 0: 0.5 * I_{df/(df+x^2)}(df/2, 1/2)
inline std::pair<double, double> t_tail_pair(int df, double x)
{
    const double nu = df;
    const double x2 = x * x;
    if (std::isinf(x2)) return {0.0, 1.0};
    const auto [ib, ib_c] = special::incomplete_beta(0.5 * nu, 0.5, nu / (nu + x2), x2 / (nu + x2));
    // {P(T > x), P(T <= x)}
    return {0.5 * ib, 0.5 + 0.5 * ib_c};
}

inline double t_pdf(int df, double x)
{
    const double nu = df;
    const double log_c = special::log_gamma(0.5 * (nu + 1.0)) - special::log_gamma(0.5 * nu) -
                         0.5 * std::log(nu * std::numbers::pi);
    return std::exp(log_c - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

inline double chi2_log_pdf(int df, double x)
{
    const double k = 0.5 * df;
    return (k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - special::log_gamma(k);
}

}  // namespace detail

/// P(X <= x).
inline double cdf(const DistSpec& dist, double x)
{
    detail::check_df(dist);
    if (std::isnan(x)) throw domain_error("cdf: x is NaN");
    switch (dist.family) {
    case Family::normal:
        return detail::normal_cdf(x);
    case Family::chi_square:
        return special::incomplete_gamma(0.5 * dist.df, 0.5 * x).first;
    case Family::student_t:
        if (x >= 0.0) return detail::t_tail_pair(dist.df, x).second;
        return detail::t_tail_pair(dist.df, -x).first;
    }
    return 0.0;
}

/// P(X > x), computed directly (no 1 - cdf cancellation in the upper tail).
inline double sf(const DistSpec& dist, double x)
{
    detail::check_df(dist);
    if (std::isnan(x)) throw domain_error("sf: x is NaN");
    switch (dist.family) {
    case Family::normal:
        return detail::normal_sf(x);
    case Family::chi_square:
        return special::incomplete_gamma(0.5 * dist.df, 0.5 * x).second;
    case Family::student_t:
        if (x >= 0.0) return detail::t_tail_pair(dist.df, x).first;
        return detail::t_tail_pair(dist.df, -x).second;
    }
    return 0.0;
}

inline double pdf(const DistSpec& dist, double x)
{
    detail::check_df(dist);
    switch (dist.family) {
    case Family::normal:
        return detail::normal_pdf(x);
    case Family::chi_square:
        if (x <= 0.0) return (dist.df == 2 && x == 0.0) ? 0.5 : 0.0;
        return std::exp(detail::chi2_log_pdf(dist.df, x));
    case Family::student_t:
        return detail::t_pdf(dist.df, x);
    }
    return 0.0;
}

/// log P(X > x) for chi-square; stays finite where P(X > x) underflows.
inline double chi2_log_sf(int df, double x)
{
    detail::check_df(DistSpec::chi_square(df));
    return special::log_upper_incomplete_gamma(0.5 * df, 0.5 * x);
}

/// Two-sided p-value of a t statistic with df degrees of freedom: 2 P(T > |t|), capped at 1.
inline double t_two_sided_p(int df, double t)
{
    if (std::isnan(t)) throw domain_error("t_two_sided_p: t is NaN");
    const double p = 2.0 * sf(DistSpec::student_t(df), std::fabs(t));
    return p > 1.0 ? 1.0 : p;
}

/// x with log P(X > x) = -log_inv_q for X ~ chi-square(df); usable for q far below DBL_MIN.
inline double chi2_upper_quantile_log(int df, double log_inv_q)
{
    detail::check_df(DistSpec::chi_square(df));
    if (!(log_inv_q > 0.0)) throw domain_error("chi2_upper_quantile_log: need q in (0,1)");
    const double n = df;
    // Laurent-Massart upper bound brackets the root from above
    double hi = n + 2.0 * log_inv_q + 2.0 * std::sqrt(n * log_inv_q) + 1.0;
    while (-chi2_log_sf(df, hi) < log_inv_q) hi *= 2.0;
    auto fdf = [&](double x) -> std::pair<double, double> {
        if (x <= 0.0) return {-log_inv_q, 0.0};
        const double lsf = chi2_log_sf(df, x);
        const double hazard = std::exp(detail::chi2_log_pdf(df, x) - lsf);
        return {-lsf - log_inv_q, hazard};
    };
    return safeguarded_newton(fdf, 0.0, hi, std::fmax(n, 0.5 * hi));
}

namespace detail {

// x >= centre with sf(x) = q, q in (0, 0.5]
inline double upper_tail_solve(const DistSpec& dist, double q, double centre)
{
    double hi = centre + 1.0;
    while (sf(dist, hi) > q) hi = centre + 2.0 * (hi - centre);
    auto fdf = [&](double x) -> std::pair<double, double> { return {q - sf(dist, x), pdf(dist, x)}; };
    return safeguarded_newton(fdf, centre, hi, 0.5 * (centre + hi));
}

// x with cdf(x) = p, chi-square only (symmetric families reflect instead)
inline double chi2_lower_solve(int df, double p)
{
    const DistSpec dist = DistSpec::chi_square(df);
    double hi = df;
    while (cdf(dist, hi) < p) hi *= 2.0;
    auto fdf = [&](double x) -> std::pair<double, double> { return {cdf(dist, x) - p, pdf(dist, x)}; };
    return safeguarded_newton(fdf, 0.0, hi, 0.5 * hi);
}

}  // namespace detail

/// x with P(X > x) = q, accurate for small q (uses the survival function, not 1 - q).
inline double upper_quantile(const DistSpec& dist, double q)
{
    detail::check_df(dist);
    if (!(q > 0.0 && q < 1.0)) throw domain_error("upper_quantile: q must lie in (0,1)");
    switch (dist.family) {
    case Family::normal:
    case Family::student_t:
        if (q == 0.5) return 0.0;
        if (q < 0.5) return detail::upper_tail_solve(dist, q, 0.0);
        return -detail::upper_tail_solve(dist, 1.0 - q, 0.0);
    case Family::chi_square:
        if (q < 0.5) return chi2_upper_quantile_log(dist.df, -std::log(q));
        return detail::chi2_lower_solve(dist.df, 1.0 - q);
    }
    return 0.0;
}

/// x with P(X <= x) = p.
inline double quantile(const DistSpec& dist, double p)
{
    detail::check_df(dist);
    if (!(p > 0.0 && p < 1.0)) throw domain_error("quantile: p must lie in (0,1)");
    switch (dist.family) {
    case Family::normal:
    case Family::student_t:
        if (p == 0.5) return 0.0;
        if (p < 0.5) return -detail::upper_tail_solve(dist, p, 0.0);
        return detail::upper_tail_solve(dist, 1.0 - p, 0.0);
    case Family::chi_square:
        if (p <= 0.5) return detail::chi2_lower_solve(dist.df, p);
        return chi2_upper_quantile_log(dist.df, -std::log1p(-p));
    }
    return 0.0;
}

/// n + 2 log(1/beta) + c sqrt(n log(1/beta)), written in terms of L = log(1/beta).
///
/// c = 2 is the Laurent-Massart upper bound on the chi-square (1 - beta) quantile,
/// c = 1/4 is Inglot's lower bound (n >= 17, beta in [e^{-560n}, 1/17]).
inline double chi2_quantile_bound_log(int n, double log_inv_beta, double c)
{
    if (n < 1) throw config_error("chi2_quantile_bound: n must be >= 1");
    if (!(log_inv_beta >= 0.0)) throw domain_error("chi2_quantile_bound: beta must lie in (0,1]");
    if (!(c > 0.0)) throw domain_error("chi2_quantile_bound: c must be positive");
    return n + 2.0 * log_inv_beta + c * std::sqrt(n * log_inv_beta);
}

inline double chi2_quantile_bound(int n, double beta, double c)
{
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("chi2_quantile_bound: beta must lie in (0,1]");
    return chi2_quantile_bound_log(n, -std::log(beta), c);
}

/// Fujikoshi-Mukaihata bracket for the t_n quantile x_n(u) solving F_n(x) = Phi(u):
/// [sqrt(n (e^{u^2/n} - 1)), sqrt(n (e^{u^2/(n - 0.5)} - 1))].
inline QuantileBracket t_quantile_bracket(int n, double u)
{
    if (n < 1) throw config_error("t_quantile_bracket: n must be >= 1");
    if (!(u > 0.0)) throw domain_error("t_quantile_bracket: u must be positive");
    const double nn = n;
    return {std::sqrt(nn * std::expm1(u * u / nn)), std::sqrt(nn * std::expm1(u * u / (nn - 0.5)))};
}

/// [sqrt((1 - delta) 2 log m), sqrt(2 log m)], which contains z_{1 - alpha/m} once m is large enough.
/// alpha only matters for the validity range; the bracket is a pure formula.
inline QuantileBracket normal_tail_bracket(double m, double alpha, double delta)
{
    if (!(m > 1.0)) throw config_error("normal_tail_bracket: m must exceed 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("normal_tail_bracket: alpha must lie in (0,1)");
    if (!(delta >= 0.0 && delta < 1.0)) throw domain_error("normal_tail_bracket: delta must lie in [0,1)");
    const double two_log_m = 2.0 * std::log(m);
    return {std::sqrt((1.0 - delta) * two_log_m), std::sqrt(two_log_m)};
}

}  // namespace tsmt

#endif  // TSMT_DISTRIBUTIONS_HPP
