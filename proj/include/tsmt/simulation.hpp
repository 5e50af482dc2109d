#ifndef TSMT_SIMULATION_HPP
#define TSMT_SIMULATION_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "tsmt/dataset.hpp"
#include "tsmt/error.hpp"
#include "tsmt/hc_calibration.hpp"
#include "tsmt/procedures.hpp"
#include "tsmt/rng.hpp"

namespace tsmt::sim {

enum class Dependence { independent, equal_correlation, block };

enum class VarianceKind { unit, common_uniform, per_hypothesis_uniform };

/// sigma^2 per replication: 1, one U(lo, hi) draw shared by all rows, or one draw per row.
struct VarianceMode {
    VarianceKind kind = VarianceKind::unit;
    double lo = 1.0;
    double hi = 1.0;
};

enum class MeanKind { uniform_pm1, constant };

/// Nonzero means of the signal rows: U(-1, 1) or a constant. Redrawn every replication unless
/// `redraw` is false, in which case one set of means is drawn from the base seed and reused.
struct MeanMode {
    MeanKind kind = MeanKind::uniform_pm1;
    double value = 1.0;
    bool redraw = true;
};

enum class Method { ts_bonf, ts_holm, bonferroni, holm, hochberg, bh, simes, hc, ss_bonf };

inline constexpr Method kAllMethods[] = {Method::ts_bonf,  Method::ts_holm, Method::bonferroni,
                                         Method::holm,     Method::hochberg, Method::bh,
                                         Method::simes,    Method::hc,       Method::ss_bonf};

/// Flag spelling used on the command line.
inline std::string_view method_name(Method m)
{
    switch (m) {
    case Method::ts_bonf: return "ts-bonf";
    case Method::ts_holm: return "ts-holm";
    case Method::bonferroni: return "bonferroni";
    case Method::holm: return "holm";
    case Method::hochberg: return "hochberg";
    case Method::bh: return "bh";
    case Method::simes: return "simes";
    case Method::hc: return "hc";
    case Method::ss_bonf: return "ss-bonf";
    }
    return "?";
}

/// Legend label used in plot data.
inline std::string_view method_label(Method m)
{
    switch (m) {
    case Method::ts_bonf: return "TS Bonf.";
    case Method::ts_holm: return "TS Holm";
    case Method::bonferroni: return "Bonf.";
    case Method::holm: return "Holm";
    case Method::hochberg: return "Hoch.";
    case Method::bh: return "BH";
    case Method::simes: return "Simes";
    case Method::hc: return "HC";
    case Method::ss_bonf: return "SS Bonf.";
    }
    return "?";
}

inline std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : kAllMethods) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

/// Global tests decide only the intersection null; they have no per-hypothesis rejections.
inline bool is_global_only(Method m) { return m == Method::simes || m == Method::hc; }

inline bool has_selection_stage(Method m)
{
    return m == Method::ts_bonf || m == Method::ts_holm || m == Method::ss_bonf;
}

struct ProcedureSpec {
    std::vector<Method> methods = {Method::ts_bonf};
    double alpha = 0.05;
    double gamma = 0.5;
    SigmaMode sigma_mode = SigmaMode::estimated;
    Sigma2Estimator estimator = Sigma2Estimator::mean;
    SplitOptions split{};  // carries its own gamma for the selection cutoff
    std::size_t hc_replications = kDefaultHcReplications;
};

/// Everything needed to simulate one cell: generative model, procedures, replication count, seed.
struct ScenarioConfig {
    std::string id;
    std::string figure;
    std::string panel;
    std::string x_name;
    double x = 0.0;

    std::size_t m = 100;
    std::size_t n = 15;
    Dependence dependence = Dependence::independent;
    double rho = 0.0;
    std::size_t block_size = 1;
    VarianceMode variance{};
    MeanMode mean{};
    std::size_t signal_count = 0;

    ProcedureSpec procedure{};
    std::size_t replications = 2000;
    std::uint64_t base_seed = 1;

    void validate() const
    {
        if (m == 0) throw config_error("scenario: m must be positive");
        if (n < 2) throw config_error("scenario: n must be >= 2");
        if (!(rho >= 0.0 && rho < 1.0)) throw config_error("scenario: rho must lie in [0,1)");
        if (dependence == Dependence::block && (block_size == 0 || block_size > m)) {
            throw config_error("scenario: block size must lie in [1, m]");
        }
        if (signal_count > m) throw config_error("scenario: signal_count exceeds m");
        if (variance.kind != VarianceKind::unit && !(variance.lo > 0.0 && variance.lo <= variance.hi)) {
            throw config_error("scenario: variance range must satisfy 0 < lo <= hi");
        }
        if (replications == 0) throw config_error("scenario: replications must be >= 1");
        if (procedure.methods.empty()) throw config_error("scenario: no methods");
        if (!(procedure.alpha > 0.0 && procedure.alpha < 1.0)) throw config_error("scenario: alpha must lie in (0,1)");
        if (!(procedure.gamma > 0.0 && procedure.gamma <= 1.0)) throw config_error("scenario: gamma must lie in (0,1]");
    }
};

struct GeneratedData {
    Dataset data;
    std::vector<bool> is_signal;  // true where mu_i != 0
    std::vector<double> means;
};

inline constexpr std::uint64_t kFixedMeansTag = 0x4d45'414e'5346'4958ull;

namespace detail {

inline double draw_mean(const MeanMode& mode, RandomStream& rng)
{
    return mode.kind == MeanKind::constant ? mode.value : rng.uniform(-1.0, 1.0);
}

}  // namespace detail

/// X_ij = mu_i + sigma_i (sqrt(rho) W_j + sqrt(1 - rho) Z_ij), W shared by every row
/// (equal correlation) or by the rows of one block; the first signal_count rows carry the signals.
/// Deterministic in (base_seed, replication_index).
inline GeneratedData generate_dataset(const ScenarioConfig& cfg, std::size_t replication_index)
{
    cfg.validate();
    RandomStream rng(cfg.base_seed, replication_index);
    GeneratedData out;
    out.means.assign(cfg.m, 0.0);
    out.is_signal.assign(cfg.m, false);
    if (cfg.mean.redraw) {
        for (std::size_t i = 0; i < cfg.signal_count; ++i) out.means[i] = detail::draw_mean(cfg.mean, rng);
    } else {
        RandomStream fixed(derive_seed(cfg.base_seed, kFixedMeansTag), 0);
        for (std::size_t i = 0; i < cfg.signal_count; ++i) out.means[i] = detail::draw_mean(cfg.mean, fixed);
    }
    for (std::size_t i = 0; i < cfg.signal_count; ++i) out.is_signal[i] = out.means[i] != 0.0;

    std::vector<double> sigma(cfg.m, 1.0);
    switch (cfg.variance.kind) {
    case VarianceKind::unit:
        break;
    case VarianceKind::common_uniform:
        std::fill(sigma.begin(), sigma.end(), std::sqrt(rng.uniform(cfg.variance.lo, cfg.variance.hi)));
        break;
    case VarianceKind::per_hypothesis_uniform:
        for (auto& s : sigma) s = std::sqrt(rng.uniform(cfg.variance.lo, cfg.variance.hi));
        break;
    }

    const bool shared = cfg.dependence != Dependence::independent;
    const double load = shared ? std::sqrt(cfg.rho) : 0.0;
    const double idio = shared ? std::sqrt(1.0 - cfg.rho) : 1.0;
    const std::size_t n_factors =
        cfg.dependence == Dependence::block ? (cfg.m + cfg.block_size - 1) / cfg.block_size
                                            : (cfg.dependence == Dependence::equal_correlation ? 1 : 0);
    std::vector<double> factor(n_factors);
    out.data = Dataset(cfg.m, cfg.n);
    for (std::size_t j = 0; j < cfg.n; ++j) {
        for (auto& w : factor) w = rng.normal();
        for (std::size_t i = 0; i < cfg.m; ++i) {
            const double common = n_factors == 0 ? 0.0 : factor[n_factors == 1 ? 0 : i / cfg.block_size];
            out.data(i, j) = out.means[i] + sigma[i] * (load * common + idio * rng.normal());
        }
    }
    return out;
}

struct MethodOutcome {
    Method method = Method::ts_bonf;
    std::size_t rejections = 0;
    std::size_t false_rejections = 0;  // true nulls rejected
    std::size_t true_rejections = 0;   // false nulls rejected
    std::optional<std::size_t> selected;
    bool global_reject = false;
};

struct ReplicationOutcome {
    std::size_t replication = 0;
    std::size_t signal_count = 0;
    std::vector<MethodOutcome> methods;
};

namespace detail {

inline void score(const std::vector<std::size_t>& rejected, const GeneratedData& g, MethodOutcome& o)
{
    o.rejections = rejected.size();
    for (std::size_t i : rejected) {
        if (g.is_signal[i]) {
            ++o.true_rejections;
        } else {
            ++o.false_rejections;
        }
    }
    o.global_reject = !rejected.empty();
}

}  // namespace detail

/// Simulates one dataset and applies every configured method to it (common random numbers).
inline ReplicationOutcome run_replication(const ScenarioConfig& cfg, std::size_t replication_index)
{
    const GeneratedData g = generate_dataset(cfg, replication_index);
    const auto& proc = cfg.procedure;
    const auto stats = summary_stats(g.data);
    std::vector<double> p(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) p[i] = stats[i].p_value;

    std::optional<double> threshold;
    auto two_stage_threshold = [&]() {
        if (!threshold) {
            const double s2 = proc.sigma_mode == SigmaMode::estimated ? estimate_sigma2(g.data, proc.estimator) : 1.0;
            threshold = selection_threshold(static_cast<int>(cfg.n), cfg.m, proc.gamma, proc.sigma_mode, s2);
        }
        return *threshold;
    };

    ReplicationOutcome out;
    out.replication = replication_index;
    out.signal_count = static_cast<std::size_t>(std::count(g.is_signal.begin(), g.is_signal.end(), true));
    for (Method method : proc.methods) {
        MethodOutcome o;
        o.method = method;
        switch (method) {
        case Method::ts_bonf: {
            const auto r = two_stage_bonferroni(stats, static_cast<int>(cfg.n), proc.alpha, two_stage_threshold());
            detail::score(r.rejected, g, o);
            o.selected = r.selected.size();
            break;
        }
        case Method::ts_holm: {
            const auto r = two_stage_holm(stats, proc.alpha, two_stage_threshold());
            detail::score(r.rejected, g, o);
            o.selected = r.selected.size();
            break;
        }
        case Method::bonferroni:
            detail::score(classic_procedure(p, proc.alpha, ClassicMethod::bonferroni), g, o);
            break;
        case Method::holm:
            detail::score(classic_procedure(p, proc.alpha, ClassicMethod::holm), g, o);
            break;
        case Method::hochberg:
            detail::score(classic_procedure(p, proc.alpha, ClassicMethod::hochberg), g, o);
            break;
        case Method::bh:
            detail::score(classic_procedure(p, proc.alpha, ClassicMethod::benjamini_hochberg), g, o);
            break;
        case Method::simes:
            o.global_reject = simes_global(p, proc.alpha);
            break;
        case Method::hc: {
            const double crit = cached_hc_critical_value(cfg.m, proc.alpha, cfg.base_seed, proc.hc_replications);
            o.global_reject = higher_criticism_statistic(p) > crit;
            break;
        }
        case Method::ss_bonf: {
            const auto r = split_sample_procedure(g.data, proc.alpha, proc.split);
            detail::score(r.rejected, g, o);
            o.selected = r.selected.size();
            break;
        }
        }
        out.methods.push_back(o);
    }
    return out;
}

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/// Monte Carlo estimates for one method; absent entries are undefined for the cell
/// (e.g. average power with no false nulls, FWER for a global-only test).
struct MethodMetrics {
    Method method = Method::ts_bonf;
    std::optional<Estimate> fwer;
    std::optional<Estimate> type1_global;
    std::optional<Estimate> avg_power;
    std::optional<Estimate> global_power;
    std::optional<Estimate> mean_selected;
    std::size_t replications_used = 0;
};

struct MetricsReport {
    ScenarioConfig config;
    std::vector<MethodMetrics> methods;

    const MethodMetrics& at(Method m) const
    {
        for (const auto& mm : methods) {
            if (mm.method == m) return mm;
        }
        throw config_error("MetricsReport: method not in scenario: " + std::string(method_name(m)));
    }
};

/// Worker count: TSMT_THREADS if set and positive, else the hardware concurrency.
inline unsigned default_thread_count()
{
    if (const char* env = std::getenv("TSMT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs all replications (in parallel when threads > 1) and aggregates in replication order,
/// so the report is bitwise independent of the thread count.
inline std::vector<ReplicationOutcome> run_replications(const ScenarioConfig& cfg, unsigned threads = 0)
{
    cfg.validate();
    if (threads == 0) threads = default_thread_count();
    for (Method m : cfg.procedure.methods) {
        if (m == Method::hc) {
            cached_hc_critical_value(cfg.m, cfg.procedure.alpha, cfg.base_seed, cfg.procedure.hc_replications);
        }
    }
    std::vector<ReplicationOutcome> outcomes(cfg.replications);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t r = next.fetch_add(1);
            if (r >= cfg.replications) return;
            try {
                outcomes[r] = run_replication(cfg, r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cfg.replications;
                return;
            }
        }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.replications));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return outcomes;
}

namespace detail {

inline Estimate proportion(std::size_t hits, std::size_t reps)
{
    const double p = static_cast<double>(hits) / static_cast<double>(reps);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(reps))};
}

inline Estimate sample_mean(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace detail

inline MetricsReport aggregate(const ScenarioConfig& cfg, const std::vector<ReplicationOutcome>& outcomes)
{
    MetricsReport rep;
    rep.config = cfg;
    const std::size_t reps = outcomes.size();
    for (std::size_t k = 0; k < cfg.procedure.methods.size(); ++k) {
        MethodMetrics mm;
        mm.method = cfg.procedure.methods[k];
        mm.replications_used = reps;
        std::size_t any_false = 0;
        std::size_t global = 0;
        std::vector<double> power;
        std::vector<double> selected;
        for (const auto& o : outcomes) {
            const auto& mo = o.methods[k];
            any_false += mo.false_rejections > 0 ? 1 : 0;
            global += mo.global_reject ? 1 : 0;
            if (o.signal_count > 0) power.push_back(static_cast<double>(mo.true_rejections) / o.signal_count);
            if (mo.selected) selected.push_back(static_cast<double>(*mo.selected));
        }
        const bool multiple = !is_global_only(mm.method);
        if (multiple && cfg.signal_count < cfg.m) mm.fwer = detail::proportion(any_false, reps);
        if (cfg.signal_count == 0) {
            mm.type1_global = detail::proportion(global, reps);
        } else {
            mm.global_power = detail::proportion(global, reps);
            if (multiple && power.size() == reps) mm.avg_power = detail::sample_mean(power);
        }
        if (!selected.empty()) mm.mean_selected = detail::sample_mean(selected);
        rep.methods.push_back(mm);
    }
    return rep;
}

/// FWER, global type-1 rate, average and global power (with standard errors) for one scenario.
inline MetricsReport estimate_metrics(const ScenarioConfig& cfg, unsigned threads = 0)
{
    return aggregate(cfg, run_replications(cfg, threads));
}

}  // namespace tsmt::sim

#endif  // TSMT_SIMULATION_HPP
