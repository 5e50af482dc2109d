#ifndef TSMT_ASYMPTOTICS_HPP
#define TSMT_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>

#include "tsmt/error.hpp"
#include "tsmt/root_finding.hpp"

// Asymptotic detection boundaries for mu^2 under log(m)/n -> d.

namespace tsmt::asymptotics {

/// g(x) = (e^x - 1 - x) / x^2, with g(0) = 1/2. Increasing on [0, inf).
inline double g(double x)
{
    if (!(x >= 0.0)) throw domain_error("g: x must be >= 0");
    if (x < 0.1) {
        // sum_k x^k / (k+2)!
        double term = 0.5;
        double sum = 0.5;
        for (int k = 1; k < 30; ++k) {
            term *= x / (k + 2);
            sum += term;
        }
        return sum;
    }
    return (std::expm1(x) - x) / (x * x);
}

/// Unique x >= 0 with g(x) = y.
inline double g_inverse(double y)
{
    if (!(y >= 0.5)) throw domain_error("g_inverse: y must be >= 1/2");
    if (y == 0.5) return 0.0;
    double hi = 1.0;
    while (g(hi) < y) {
        hi *= 2.0;
        if (hi > 709.0) throw domain_error("g_inverse: y too large");
    }
    return bisect([y](double x) { return g(x) - y; }, 0.0, hi, 1e-14 * hi);
}

/// a(c) = [g^{-1}(2/c^2) / c]^2 on (0, 2), extended by a(c) = 0 for c >= 2. Decreasing.
inline double a(double c)
{
    if (!(c > 0.0)) throw domain_error("a: c must be positive");
    if (c >= 2.0) return 0.0;
    const double x = g_inverse(2.0 / (c * c));
    return (x / c) * (x / c);
}

/// Solution c* in (0, 2] of a(c) = (1 - gamma) d; c* = 2 when (1 - gamma) d = 0.
inline double c_star(double gamma, double d)
{
    if (!(d >= 0.0)) throw domain_error("c_star: d must be >= 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw config_error("c_star: gamma must lie in (0,1]");
    const double target = (1.0 - gamma) * d;
    if (target == 0.0) return 2.0;
    double lo = 1.0;
    while (a(lo) <= target) lo *= 0.5;
    return bisect([target](double c) { return a(c) - target; }, lo, 2.0, 1e-14);
}

enum class ThresholdMethod { two_stage, bonferroni_t, bonferroni_z, split_sample };

inline std::string_view to_string(ThresholdMethod m)
{
    switch (m) {
    case ThresholdMethod::two_stage: return "two_stage";
    case ThresholdMethod::bonferroni_t: return "bonferroni_t";
    case ThresholdMethod::bonferroni_z: return "bonferroni_z";
    case ThresholdMethod::split_sample: return "split_sample";
    }
    return "?";
}

struct AsymptoticRegime {
    double d = 0.0;
    double gamma = 1.0;
    std::optional<double> r;  // split fraction n1/n, split_sample only
    double epsilon = 1.0;     // sparsity exponent; does not enter the boundaries
};

struct ThresholdReport {
    ThresholdMethod method = ThresholdMethod::two_stage;
    double mu_squared_threshold = 0.0;
    // two_stage only: e^{2 gamma d} - 1 and 2(1-gamma)d + c* sqrt((1-gamma)d)
    double detection_branch = 0.0;
    double selection_branch = 0.0;
};

/// Squared-mean boundary above which a false null is rejected with probability -> 1.
/// The boundary value itself is reported without a decision claim.
inline ThresholdReport detection_threshold(ThresholdMethod method, const AsymptoticRegime& regime)
{
    const double d = regime.d;
    if (!(d >= 0.0)) throw domain_error("detection_threshold: d must be >= 0");
    ThresholdReport rep;
    rep.method = method;
    switch (method) {
    case ThresholdMethod::two_stage: {
        const double gamma = regime.gamma;
        if (!(gamma > 0.0 && gamma <= 1.0)) throw config_error("detection_threshold: gamma must lie in (0,1]");
        const double s = (1.0 - gamma) * d;
        rep.detection_branch = std::expm1(2.0 * gamma * d);
        rep.selection_branch = 2.0 * s + c_star(gamma, d) * std::sqrt(s);
        rep.mu_squared_threshold = std::max(rep.detection_branch, rep.selection_branch);
        break;
    }
    case ThresholdMethod::bonferroni_t:
        rep.mu_squared_threshold = std::expm1(2.0 * d);
        break;
    case ThresholdMethod::bonferroni_z:
        rep.mu_squared_threshold = 2.0 * d;
        break;
    case ThresholdMethod::split_sample: {
        if (!regime.r) throw config_error("detection_threshold: split_sample needs the split fraction r");
        const double r = *regime.r;
        const double gamma = regime.gamma;
        if (!(r > 0.0 && r < 1.0)) throw config_error("detection_threshold: r must lie in (0,1)");
        if (!(gamma > 0.0 && gamma <= 1.0)) throw config_error("detection_threshold: gamma must lie in (0,1]");
        rep.mu_squared_threshold =
            std::max(std::exp(2.0 * (1.0 - gamma) * d / r), std::exp(2.0 * gamma * d / (1.0 - r))) - 1.0;
        break;
    }
    }
    return rep;
}

inline constexpr double kGammaSearchLo = 0.01;
inline constexpr double kGammaSearchHi = 1.0;

struct OptimalGamma {
    double gamma_star = 1.0;
    double threshold = 0.0;
};

/// gamma minimising the two-stage boundary over [0.01, 1] by golden-section search.
/// d = 0 has threshold 0 for every gamma; gamma* = 1 by convention.
inline OptimalGamma optimal_gamma(double d, double gamma_tol = 1e-4)
{
    if (!(d >= 0.0)) throw domain_error("optimal_gamma: d must be >= 0");
    if (d == 0.0) return {1.0, 0.0};
    auto threshold = [d](double gamma) {
        return detection_threshold(ThresholdMethod::two_stage, {d, gamma, std::nullopt, 1.0}).mu_squared_threshold;
    };
    const auto [gamma, value] = golden_section_minimize(threshold, kGammaSearchLo, kGammaSearchHi, gamma_tol);
    return {gamma, value};
}

/// Plug-in d = log(m) / n for a finite problem.
inline double d_from_dimensions(std::size_t m, std::size_t n)
{
    if (n == 0) throw config_error("d_from_dimensions: n must be positive");
    return std::log(static_cast<double>(m)) / static_cast<double>(n);
}

}  // namespace tsmt::asymptotics

#endif  // TSMT_ASYMPTOTICS_HPP
