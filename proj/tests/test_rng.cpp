#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "tsmt/rng.hpp"

using tsmt::Philox4x32;
using tsmt::RandomStream;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswers)
{
    using C = Philox4x32::counter_type;
    using K = Philox4x32::key_type;
    EXPECT_EQ(Philox4x32::encrypt(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::encrypt(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::encrypt(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, SameAddressSameSequence)
{
    RandomStream a(7, 123), b(7, 123);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
    RandomStream c(7, 123), d(7, 123);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(RandomStream, DistinctStreamsAndSeeds)
{
    std::set<std::uint64_t> first;
    for (std::uint64_t s = 0; s < 1000; ++s) first.insert(RandomStream(1, s)());
    for (std::uint64_t seed = 0; seed < 1000; ++seed) first.insert(RandomStream(seed + 2, 0)());
    EXPECT_EQ(first.size(), 2000u);
    // stream ids above 2^32 address different counters
    EXPECT_NE(RandomStream(1, 1)(), RandomStream(1, (1ull << 32) + 1)());
}

TEST(RandomStream, UniformMoments)
{
    RandomStream r(99, 0);
    const int n = 200000;
    double sum = 0, sum2 = 0, lo = 1, hi = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sum2 += u * u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sum2 / n - (sum / n) * (sum / n), 1.0 / 12, 2e-3);
}

TEST(RandomStream, NormalMomentsAndTails)
{
    RandomStream r(2024, 5);
    const int n = 400000;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    int beyond = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
        s4 += z * z * z * z;
        beyond += std::fabs(z) > 1.959964 ? 1 : 0;
    }
    EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(s3 / n, 0.0, 4.0 * std::sqrt(15.0 / n));
    EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
    EXPECT_NEAR(beyond / double(n), 0.05, 4.0 * std::sqrt(0.05 * 0.95 / n));
}

TEST(RandomStream, DeriveSeedSeparatesTags)
{
    EXPECT_NE(tsmt::derive_seed(1, 1), tsmt::derive_seed(1, 2));
    EXPECT_NE(tsmt::derive_seed(1, 1), tsmt::derive_seed(2, 1));
    EXPECT_EQ(tsmt::derive_seed(5, 9), tsmt::derive_seed(5, 9));
}
