#ifndef TSMT_PROCEDURES_HPP
#define TSMT_PROCEDURES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsmt/dataset.hpp"
#include "tsmt/distributions.hpp"
#include "tsmt/error.hpp"

namespace tsmt {

/// Per-hypothesis statistics: S = sum of squares (selection), T = one-sample t (test),
/// and the two-sided p-value of T on n - 1 degrees of freedom.
struct HypothesisStats {
    std::size_t index = 0;
    double s_stat = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
};

enum class SigmaMode { known_unit, estimated };
enum class Sigma2Estimator { mean, median };

/// How stage one picks hypotheses. The threshold is chi2_n(1 - m^{gamma-1}), scaled by the pooled
/// variance estimate in `estimated` mode; `fixed_threshold` bypasses the rule entirely.
struct SelectionRule {
    double gamma = 0.5;
    SigmaMode sigma_mode = SigmaMode::known_unit;
    Sigma2Estimator estimator = Sigma2Estimator::mean;
    std::optional<double> fixed_threshold;
};

/// Units of HypothesisDecision::critical_value.
enum class CriticalScale { t_statistic, p_value };

struct HypothesisDecision {
    std::size_t index = 0;
    bool selected = false;
    bool rejected = false;
    double p_value = 1.0;
    double critical_value = std::numeric_limits<double>::quiet_NaN();  // NaN when not tested
};

struct ProcedureResult {
    std::vector<std::size_t> selected;  // ascending
    std::vector<std::size_t> rejected;  // ascending
    std::vector<HypothesisDecision> per_hypothesis;
    double selection_threshold = 0.0;
    std::optional<double> sigma2_hat;
    CriticalScale scale = CriticalScale::t_statistic;
};

namespace detail {

inline void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("alpha must lie in (0,1)");
}

inline void check_gamma(double gamma)
{
    if (!(gamma > 0.0 && gamma <= 1.0)) throw config_error("gamma must lie in (0,1]");
}

inline double row_mean(std::span<const double> row)
{
    return std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
}

// unbiased; exactly zero for a constant row
inline double row_variance(std::span<const double> row, double mean)
{
    if (std::all_of(row.begin(), row.end(), [&](double v) { return v == row.front(); })) return 0.0;
    double ss = 0.0;
    for (double v : row) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(row.size() - 1);
}

inline HypothesisStats row_stats(std::span<const double> row, std::size_t index)
{
    HypothesisStats h;
    h.index = index;
    for (double v : row) h.s_stat += v * v;
    const double mean = row_mean(row);
    const double var = row_variance(row, mean);
    const int df = static_cast<int>(row.size()) - 1;
    if (var == 0.0) {
        if (mean == 0.0) {
            h.t_stat = 0.0;
            h.p_value = 1.0;
        } else {
            h.t_stat = std::copysign(std::numeric_limits<double>::infinity(), mean);
            h.p_value = 0.0;
        }
        return h;
    }
    h.t_stat = std::sqrt(static_cast<double>(row.size())) * mean / std::sqrt(var);
    h.p_value = t_two_sided_p(df, h.t_stat);
    return h;
}

inline void check_sample_size(const Dataset& data)
{
    if (data.cols() < 2) {
        throw config_error("need at least 2 observations per sample, got " + std::to_string(data.cols()));
    }
}

// ascending order of p, ties broken by index
inline std::vector<std::size_t> order_by_p(std::span<const double> p)
{
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    return order;
}

inline void fill_index_sets(ProcedureResult& r)
{
    r.selected.clear();
    r.rejected.clear();
    for (const auto& d : r.per_hypothesis) {
        if (d.selected) r.selected.push_back(d.index);
        if (d.rejected) r.rejected.push_back(d.index);
    }
}

}  // namespace detail

/// S, T and two-sided p for every row. Rows with zero sample variance get T = +-inf and p = 0
/// (nonzero mean) or T = 0 and p = 1 (zero mean).
inline std::vector<HypothesisStats> summary_stats(const Dataset& data)
{
    detail::check_sample_size(data);
    std::vector<HypothesisStats> out;
    out.reserve(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) out.push_back(detail::row_stats(data.row(i), i));
    return out;
}

/// Pooled variance: mean (default) or median of the m unbiased per-row variances.
inline double estimate_sigma2(const Dataset& data, Sigma2Estimator estimator = Sigma2Estimator::mean)
{
    detail::check_sample_size(data);
    if (data.empty()) return 0.0;
    std::vector<double> vars(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const auto row = data.row(i);
        vars[i] = detail::row_variance(row, detail::row_mean(row));
    }
    if (estimator == Sigma2Estimator::mean) {
        return std::accumulate(vars.begin(), vars.end(), 0.0) / static_cast<double>(vars.size());
    }
    const std::size_t mid = vars.size() / 2;
    std::nth_element(vars.begin(), vars.begin() + mid, vars.end());
    const double upper = vars[mid];
    if (vars.size() % 2 == 1) return upper;
    const double lower = *std::max_element(vars.begin(), vars.begin() + mid);
    return 0.5 * (lower + upper);
}

/// chi2_n(1 - beta) with beta = m^{gamma - 1}, times sigma2_hat in estimated mode.
/// gamma = 1 (beta = 1) selects everything: the threshold is 0.
inline double selection_threshold(int n, std::size_t m, double gamma, SigmaMode mode, double sigma2_hat = 1.0)
{
    detail::check_gamma(gamma);
    if (n < 1) throw config_error("selection_threshold: n must be >= 1");
    if (mode == SigmaMode::estimated && !(sigma2_hat >= 0.0)) {
        throw config_error("selection_threshold: sigma2_hat must be >= 0");
    }
    const double log_inv_beta = (1.0 - gamma) * std::log(static_cast<double>(m));
    if (!(log_inv_beta > 0.0)) return 0.0;
    const double u = chi2_upper_quantile_log(n, log_inv_beta);
    return mode == SigmaMode::estimated ? sigma2_hat * u : u;
}

/// Indices with S strictly above the threshold.
inline std::vector<std::size_t> select_hypotheses(std::span<const HypothesisStats> stats, double threshold)
{
    std::vector<std::size_t> out;
    for (const auto& h : stats) {
        if (h.s_stat > threshold) out.push_back(h.index);
    }
    return out;
}

/// Stage two Bonferroni on precomputed statistics: among {S > threshold}, reject when
/// |T| >= t_{n-1}(1 - alpha / (2 |selected|)).
inline ProcedureResult two_stage_bonferroni(std::span<const HypothesisStats> stats, int n, double alpha,
                                            double threshold)
{
    detail::check_alpha(alpha);
    ProcedureResult r;
    r.selection_threshold = threshold;
    r.scale = CriticalScale::t_statistic;
    r.per_hypothesis.reserve(stats.size());
    std::size_t k = 0;
    for (const auto& h : stats) k += h.s_stat > threshold ? 1 : 0;
    const double crit = k > 0 ? upper_quantile(DistSpec::student_t(n - 1), alpha / (2.0 * static_cast<double>(k)))
                              : std::numeric_limits<double>::quiet_NaN();
    for (const auto& h : stats) {
        HypothesisDecision d;
        d.index = h.index;
        d.p_value = h.p_value;
        d.selected = h.s_stat > threshold;
        if (d.selected) {
            d.critical_value = crit;
            d.rejected = std::fabs(h.t_stat) >= crit;
        }
        r.per_hypothesis.push_back(d);
    }
    detail::fill_index_sets(r);
    return r;
}

/// Holm step-down over the selected p-values. Unselected hypotheses carry p~ = 1 and sort
/// after every selected one; the j-th smallest selected p is compared with alpha / (k - j + 1).
inline ProcedureResult two_stage_holm(std::span<const HypothesisStats> stats, double alpha, double threshold)
{
    detail::check_alpha(alpha);
    ProcedureResult r;
    r.selection_threshold = threshold;
    r.scale = CriticalScale::p_value;
    r.per_hypothesis.resize(stats.size());
    std::vector<std::size_t> order(stats.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto p_tilde = [&](std::size_t i) { return stats[i].s_stat > threshold ? stats[i].p_value : 1.0; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const bool sa = stats[a].s_stat > threshold;
        const bool sb = stats[b].s_stat > threshold;
        if (p_tilde(a) != p_tilde(b)) return p_tilde(a) < p_tilde(b);
        return sa && !sb;
    });
    std::size_t k = 0;
    for (const auto& h : stats) k += h.s_stat > threshold ? 1 : 0;
    bool still_rejecting = true;
    for (std::size_t j = 0; j < order.size(); ++j) {
        const std::size_t i = order[j];
        auto& d = r.per_hypothesis[i];
        d.index = stats[i].index;
        d.p_value = stats[i].p_value;
        d.selected = j < k;
        if (!d.selected) continue;
        d.critical_value = alpha / static_cast<double>(k - j);
        still_rejecting = still_rejecting && p_tilde(i) <= d.critical_value;
        d.rejected = still_rejecting;
    }
    detail::fill_index_sets(r);
    return r;
}

namespace detail {

inline double resolve_threshold(const Dataset& data, const SelectionRule& rule, ProcedureResult& r)
{
    if (rule.sigma_mode == SigmaMode::estimated) r.sigma2_hat = estimate_sigma2(data, rule.estimator);
    if (rule.fixed_threshold) return *rule.fixed_threshold;
    return selection_threshold(static_cast<int>(data.cols()), data.rows(), rule.gamma, rule.sigma_mode,
                               r.sigma2_hat.value_or(1.0));
}

}  // namespace detail

inline ProcedureResult two_stage_bonferroni(const Dataset& data, double alpha, const SelectionRule& rule)
{
    detail::check_alpha(alpha);
    const auto stats = summary_stats(data);
    ProcedureResult tmp;
    const double u = detail::resolve_threshold(data, rule, tmp);
    auto r = two_stage_bonferroni(stats, static_cast<int>(data.cols()), alpha, u);
    r.sigma2_hat = tmp.sigma2_hat;
    return r;
}

inline ProcedureResult two_stage_holm(const Dataset& data, double alpha, const SelectionRule& rule)
{
    detail::check_alpha(alpha);
    const auto stats = summary_stats(data);
    ProcedureResult tmp;
    const double u = detail::resolve_threshold(data, rule, tmp);
    auto r = two_stage_holm(stats, alpha, u);
    r.sigma2_hat = tmp.sigma2_hat;
    return r;
}

enum class ClassicMethod { bonferroni, holm, hochberg, benjamini_hochberg };

/// Single-stage procedures on k p-values; returns rejected positions in ascending order.
///   bonferroni: p <= alpha / k
///   holm:       step-down, p_(j) <= alpha / (k - j + 1) for all steps so far
///   hochberg:   step-up with the Holm constants
///   benjamini_hochberg: step-up, p_(j) <= j alpha / k
inline std::vector<std::size_t> classic_procedure(std::span<const double> p, double alpha, ClassicMethod method)
{
    detail::check_alpha(alpha);
    const std::size_t k = p.size();
    std::vector<std::size_t> out;
    if (k == 0) return out;
    const double kd = static_cast<double>(k);
    if (method == ClassicMethod::bonferroni) {
        for (std::size_t i = 0; i < k; ++i) {
            if (p[i] <= alpha / kd) out.push_back(i);
        }
        return out;
    }
    const auto order = detail::order_by_p(p);
    std::size_t n_reject = 0;
    switch (method) {
    case ClassicMethod::holm:
        while (n_reject < k && p[order[n_reject]] <= alpha / static_cast<double>(k - n_reject)) ++n_reject;
        break;
    case ClassicMethod::hochberg:
        for (std::size_t j = k; j > 0; --j) {
            if (p[order[j - 1]] <= alpha / static_cast<double>(k - j + 1)) {
                n_reject = j;
                break;
            }
        }
        break;
    case ClassicMethod::benjamini_hochberg:
        for (std::size_t j = k; j > 0; --j) {
            if (p[order[j - 1]] <= static_cast<double>(j) * alpha / kd) {
                n_reject = j;
                break;
            }
        }
        break;
    case ClassicMethod::bonferroni:
        break;
    }
    out.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_reject));
    std::sort(out.begin(), out.end());
    return out;
}

/// Simes global test: reject iff min_i k p_(i) / i <= alpha. Empty input never rejects.
inline bool simes_global(std::span<const double> p, double alpha)
{
    detail::check_alpha(alpha);
    if (p.empty()) return false;
    std::vector<double> sorted(p.begin(), p.end());
    std::sort(sorted.begin(), sorted.end());
    const double k = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (k * sorted[i] / static_cast<double>(i + 1) <= alpha) return true;
    }
    return false;
}

/// HC* = max over i <= floor(m/2) of sqrt(m) (i/m - p_(i)) / sqrt(p_(i) (1 - p_(i))).
/// A zero p-value makes the statistic +inf; terms with p_(i) = 1 are skipped.
inline double higher_criticism_statistic(std::span<const double> p)
{
    std::vector<double> sorted(p.begin(), p.end());
    const std::size_t m = sorted.size();
    const std::size_t upto = m / 2;
    double best = -std::numeric_limits<double>::infinity();
    if (upto == 0) return best;
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(upto), sorted.end());
    const double md = static_cast<double>(m);
    const double root_m = std::sqrt(md);
    for (std::size_t i = 0; i < upto; ++i) {
        const double pi = sorted[i];
        if (pi <= 0.0) return std::numeric_limits<double>::infinity();
        if (pi >= 1.0) continue;
        const double hc = root_m * (static_cast<double>(i + 1) / md - pi) / std::sqrt(pi * (1.0 - pi));
        best = std::max(best, hc);
    }
    return best;
}

enum class SplitCutoff {
    gamma_rule,      // |T1| > t_{n1-1}(1 - m^{gamma-1} / 2)
    constant_level,  // |T1| > t_{n1}(level), the fixed-level variant
};

struct SplitOptions {
    double r = 0.5;
    double gamma = 0.5;
    SplitCutoff cutoff = SplitCutoff::gamma_rule;
    double level = 0.75;
};

/// Sample splitting: the first floor(r n) columns select via |T1| > u, the remaining columns
/// test the selected hypotheses with Bonferroni over |selected| on t_{n2-1}.
/// Reported p-values and critical values refer to the second subsample.
inline ProcedureResult split_sample_procedure(const Dataset& data, double alpha, const SplitOptions& opt)
{
    detail::check_alpha(alpha);
    detail::check_gamma(opt.gamma);
    if (!(opt.r > 0.0 && opt.r < 1.0)) throw config_error("split fraction r must lie in (0,1)");
    const std::size_t n = data.cols();
    const auto n1 = static_cast<std::size_t>(std::floor(opt.r * static_cast<double>(n)));
    const std::size_t n2 = n - n1;
    if (n1 < 2 || n2 < 2) {
        throw config_error("split sample needs both subsamples of size >= 2 (n1=" + std::to_string(n1) +
                           ", n2=" + std::to_string(n2) + ")");
    }
    const std::size_t m = data.rows();
    double u = 0.0;
    if (opt.cutoff == SplitCutoff::gamma_rule) {
        const double q = 0.5 * std::pow(static_cast<double>(m), opt.gamma - 1.0);
        u = q >= 0.5 ? 0.0 : upper_quantile(DistSpec::student_t(static_cast<int>(n1) - 1), q);
    } else {
        if (!(opt.level > 0.0 && opt.level < 1.0)) throw config_error("split cutoff level must lie in (0,1)");
        u = quantile(DistSpec::student_t(static_cast<int>(n1)), opt.level);
    }

    std::vector<HypothesisStats> first(m);
    std::vector<HypothesisStats> second(m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = data.row(i);
        first[i] = detail::row_stats(row.first(n1), i);
        second[i] = detail::row_stats(row.subspan(n1), i);
        k += std::fabs(first[i].t_stat) > u ? 1 : 0;
    }
    const double crit = k > 0 ? upper_quantile(DistSpec::student_t(static_cast<int>(n2) - 1),
                                               alpha / (2.0 * static_cast<double>(k)))
                              : std::numeric_limits<double>::quiet_NaN();
    ProcedureResult r;
    r.selection_threshold = u;
    r.scale = CriticalScale::t_statistic;
    r.per_hypothesis.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        HypothesisDecision d;
        d.index = i;
        d.p_value = second[i].p_value;
        d.selected = std::fabs(first[i].t_stat) > u;
        if (d.selected) {
            d.critical_value = crit;
            d.rejected = std::fabs(second[i].t_stat) >= crit;
        }
        r.per_hypothesis.push_back(d);
    }
    detail::fill_index_sets(r);
    return r;
}

}  // namespace tsmt

#endif  // TSMT_PROCEDURES_HPP
