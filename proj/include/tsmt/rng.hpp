#ifndef TSMT_RNG_HPP
#define TSMT_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace tsmt {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
/// Output is a pure function of (counter, key), so any stream position is addressable directly.
struct Philox4x32 {
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static constexpr counter_type round(const counter_type& ctr, const key_type& key)
    {
        const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }

    static constexpr counter_type encrypt(counter_type ctr, key_type key)
    {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            ctr = round(ctr, key);
        }
        return ctr;
    }
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent seed for a named sub-purpose of a run (fixed effects, calibration, ...).
inline constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t tag)
{
    return splitmix64(base_seed ^ splitmix64(tag));
}

/// One reproducible random stream, addressed by (seed, stream id).
///
/// The key is derived from the seed and the stream id occupies the upper counter words, so streams
/// never overlap and stream r is the same no matter which thread draws it or in what order.
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream)
    {
        const std::uint64_t k = splitmix64(seed);
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
        stream_hi_ = static_cast<std::uint32_t>(stream >> 32);
        stream_lo_ = static_cast<std::uint32_t>(stream);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        if (lane_ == 2) refill();
        const std::uint64_t v = (std::uint64_t{block_[2 * lane_ + 1]} << 32) | block_[2 * lane_];
        ++lane_;
        return v;
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    void refill()
    {
        const Philox4x32::counter_type ctr = {static_cast<std::uint32_t>(position_),
                                              static_cast<std::uint32_t>(position_ >> 32), stream_lo_, stream_hi_};
        block_ = Philox4x32::encrypt(ctr, key_);
        ++position_;
        lane_ = 0;
    }

    Philox4x32::key_type key_{};
    std::uint32_t stream_hi_ = 0;
    std::uint32_t stream_lo_ = 0;
    std::uint64_t position_ = 0;
    Philox4x32::counter_type block_{};
    int lane_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tsmt

#endif  // TSMT_RNG_HPP
