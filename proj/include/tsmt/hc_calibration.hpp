#ifndef TSMT_HC_CALIBRATION_HPP
#define TSMT_HC_CALIBRATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tsmt/error.hpp"
#include "tsmt/procedures.hpp"
#include "tsmt/rng.hpp"

namespace tsmt {

inline constexpr std::uint64_t kHigherCriticismTag = 0x4843'4341'4c49'4252ull;
inline constexpr std::size_t kDefaultHcReplications = 10000;

/// Empirical (1 - alpha) quantile of HC* over `replications` draws of m iid U(0,1) p-values:
/// the ceil((1 - alpha) R)-th order statistic.
inline double simulate_hc_critical_value(std::size_t m, double alpha, std::uint64_t seed,
                                         std::size_t replications = kDefaultHcReplications)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("HC calibration: alpha must lie in (0,1)");
    if (m == 0 || replications == 0) throw config_error("HC calibration: m and replications must be positive");
    const std::uint64_t stream_seed = derive_seed(seed, kHigherCriticismTag);
    std::vector<double> hc(replications);
    std::vector<double> p(m);
    for (std::size_t r = 0; r < replications; ++r) {
        RandomStream rng(stream_seed, r);
        for (auto& v : p) v = rng.uniform();
        hc[r] = higher_criticism_statistic(p);
    }
    std::sort(hc.begin(), hc.end());
    const auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(replications)));
    return hc[std::clamp<std::size_t>(rank, 1, replications) - 1];
}

/// Level-alpha critical values for HC*, keyed by (m, alpha).
class HCCalibration {
public:
    HCCalibration() = default;

    /// Calibrates by simulation for one (m, alpha).
    static HCCalibration simulate(std::size_t m, double alpha, std::uint64_t seed,
                                  std::size_t replications = kDefaultHcReplications)
    {
        HCCalibration c;
        c.set(m, alpha, simulate_hc_critical_value(m, alpha, seed, replications));
        return c;
    }

    void set(std::size_t m, double alpha, double critical_value) { values_[{m, alpha}] = critical_value; }

    bool has(std::size_t m, double alpha) const { return values_.count({m, alpha}) > 0; }

    double critical_value(std::size_t m, double alpha) const
    {
        const auto it = values_.find({m, alpha});
        if (it == values_.end()) {
            throw config_error("no Higher Criticism calibration for m=" + std::to_string(m) +
                               ", alpha=" + std::to_string(alpha));
        }
        return it->second;
    }

private:
    std::map<std::pair<std::size_t, double>, double> values_;
};

/// Process-wide memo of simulated critical values keyed by (m, alpha, seed, replications).
inline double cached_hc_critical_value(std::size_t m, double alpha, std::uint64_t seed,
                                       std::size_t replications = kDefaultHcReplications)
{
    static std::mutex mutex;
    static std::map<std::tuple<std::size_t, double, std::uint64_t, std::size_t>, double> cache;
    const auto key = std::make_tuple(m, alpha, seed, replications);
    {
        std::lock_guard<std::mutex> lock(mutex);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double value = simulate_hc_critical_value(m, alpha, seed, replications);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, value);
    return value;
}

/// Reject the global null iff HC* exceeds the calibrated critical value for (m, alpha).
inline bool higher_criticism_global(std::span<const double> p, double alpha, const HCCalibration& calibration)
{
    const double crit = calibration.critical_value(p.size(), alpha);
    return higher_criticism_statistic(p) > crit;
}

}  // namespace tsmt

#endif  // TSMT_HC_CALIBRATION_HPP
