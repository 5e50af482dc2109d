#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "tsmt/asymptotics.hpp"
#include "tsmt/error.hpp"

using namespace tsmt;
using namespace tsmt::asymptotics;

namespace {

// root of e^x - 1 - x = y x^2 on (0, 50) by plain bisection
double g_inverse_oracle(double y)
{
    double lo = 1e-6, hi = 50.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::exp(mid) - 1.0 - mid < y * mid * mid ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> d_grid()
{
    std::vector<double> out;
    for (int k = 1; k <= 10; ++k) out.push_back(0.1 * k);
    return out;
}

}  // namespace

TEST(G, Values)
{
    EXPECT_DOUBLE_EQ(g(0.0), 0.5);
    EXPECT_NEAR(g(1e-9), 0.5, 1e-9);
    EXPECT_NEAR(g(1.0), std::numbers::e - 2.0, 1e-15);
    EXPECT_GT(g(2.0), g(1.0));
    // series and closed form agree across the switch point
    EXPECT_NEAR(g(0.0999999), g(0.1000001), 1e-7);
    EXPECT_THROW(g(-0.1), domain_error);
}

TEST(G, Increasing)
{
    double prev = g(0.0);
    for (double x = 0.01; x < 30.0; x += 0.01) {
        const double v = g(x);
        ASSERT_GT(v, prev) << x;
        prev = v;
    }
}

TEST(GInverse, Values)
{
    EXPECT_DOUBLE_EQ(g_inverse(0.5), 0.0);
    EXPECT_NEAR(g_inverse(std::numbers::e - 2.0), 1.0, 1e-12);
    EXPECT_NEAR(g_inverse(2.0), 3.21356, 1e-5);
    EXPECT_NEAR(g_inverse(2.0), g_inverse_oracle(2.0), 1e-10);
    for (double y : {0.6, 1.0, 5.0, 40.0}) EXPECT_NEAR(g(g_inverse(y)), y, 1e-12 * y);
    EXPECT_THROW(g_inverse(0.4), domain_error);
}

TEST(A, Values)
{
    EXPECT_DOUBLE_EQ(a(2.0), 0.0);
    EXPECT_DOUBLE_EQ(a(3.0), 0.0);
    const double ginv2 = g_inverse_oracle(2.0);
    EXPECT_NEAR(a(1.0), ginv2 * ginv2, 1e-9);
    EXPECT_NEAR(a(1.0), 10.327, 1e-3);
    EXPECT_GT(a(0.5), a(1.0));
    EXPECT_THROW(a(0.0), domain_error);
}

TEST(A, Decreasing)
{
    double prev = a(0.05);
    for (double c = 0.06; c < 2.0; c += 0.01) {
        const double v = a(c);
        ASSERT_LT(v, prev) << c;
        prev = v;
    }
}

TEST(CStar, Values)
{
    EXPECT_DOUBLE_EQ(c_star(1.0, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(c_star(0.5, 0.0), 2.0);
    EXPECT_NEAR(c_star(0.999999, 1e-3), 2.0, 1e-2);
    // (1 - gamma) d = a(1)
    EXPECT_NEAR(c_star(0.5, 2.0 * a(1.0)), 1.0, 1e-10);
    EXPECT_THROW(c_star(0.0, 1.0), config_error);
    EXPECT_THROW(c_star(0.5, -1.0), domain_error);
}

TEST(CStar, InvertsAAndDecreases)
{
    double prev = 2.0;
    for (double s = 0.01; s < 5.0; s *= 1.3) {
        const double c = c_star(0.5, 2.0 * s);
        EXPECT_NEAR(a(c), s, 1e-9 * (1.0 + s));
        ASSERT_LT(c, prev);
        prev = c;
    }
}

TEST(Thresholds, ClosedForms)
{
    EXPECT_DOUBLE_EQ(detection_threshold(ThresholdMethod::bonferroni_t, {0.0, 1.0, {}, 1.0}).mu_squared_threshold, 0.0);
    EXPECT_NEAR(detection_threshold(ThresholdMethod::bonferroni_t, {0.5, 1.0, {}, 1.0}).mu_squared_threshold,
                std::numbers::e - 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(detection_threshold(ThresholdMethod::bonferroni_z, {0.7, 1.0, {}, 1.0}).mu_squared_threshold, 1.4);
    for (double d : d_grid()) {
        for (double r : {0.3, 0.5, 0.8}) {
            const auto split = detection_threshold(ThresholdMethod::split_sample, {d, 1.0 - r, r, 1.0});
            EXPECT_NEAR(split.mu_squared_threshold, std::expm1(2.0 * d), 1e-12);
        }
    }
    EXPECT_THROW(detection_threshold(ThresholdMethod::split_sample, {0.5, 0.5, {}, 1.0}), config_error);
    EXPECT_THROW(detection_threshold(ThresholdMethod::two_stage, {-0.1, 0.5, {}, 1.0}), domain_error);
}

TEST(Thresholds, TwoStageBranches)
{
    const auto rep = detection_threshold(ThresholdMethod::two_stage, {0.5, 0.6, {}, 1.0});
    EXPECT_NEAR(rep.detection_branch, std::expm1(0.6), 1e-15);
    const double s = 0.4 * 0.5;
    EXPECT_NEAR(rep.selection_branch, 2 * s + c_star(0.6, 0.5) * std::sqrt(s), 1e-14);
    EXPECT_DOUBLE_EQ(rep.mu_squared_threshold, std::max(rep.detection_branch, rep.selection_branch));
    // gamma = 1 reduces to Bonferroni
    EXPECT_NEAR(detection_threshold(ThresholdMethod::two_stage, {0.5, 1.0, {}, 1.0}).mu_squared_threshold,
                std::expm1(1.0), 1e-15);
}

TEST(OptimalGamma, ReferenceValue)
{
    const auto opt = optimal_gamma(0.5);
    EXPECT_GE(opt.gamma_star, 0.65);
    EXPECT_LE(opt.gamma_star, 0.75);
    EXPECT_NEAR(opt.gamma_star, 0.7, 0.05);
    // the selected count m^{gamma*} for m = 20000 is on the order of a thousand
    EXPECT_NEAR(std::pow(20000.0, 0.7), 1025, 1.0);
    const double selected = std::pow(20000.0, opt.gamma_star);
    EXPECT_GT(selected, 900);
    EXPECT_LT(selected, 1100);
}

TEST(OptimalGamma, BeatsGridAndIsNonincreasing)
{
    double prev = 2.0;
    for (double d : d_grid()) {
        const auto opt = optimal_gamma(d);
        for (double g = 0.01; g <= 1.0; g += 0.01) {
            ASSERT_LE(opt.threshold,
                      detection_threshold(ThresholdMethod::two_stage, {d, g, {}, 1.0}).mu_squared_threshold + 1e-6)
                << d << ' ' << g;
        }
        ASSERT_LE(opt.gamma_star, prev + 1e-4) << d;
        prev = opt.gamma_star;
        ASSERT_LT(opt.threshold, std::expm1(2.0 * d)) << d;
    }
}

TEST(OptimalGamma, SlopeNearTwo)
{
    const auto ds = d_grid();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double d : ds) {
        const double y = optimal_gamma(d).threshold;
        sx += d;
        sy += y;
        sxx += d * d;
        sxy += d * y;
    }
    const double k = static_cast<double>(ds.size());
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    EXPECT_GE(slope, 1.9);
    EXPECT_LE(slope, 2.1);
}

TEST(OptimalGamma, Edges)
{
    const auto z = optimal_gamma(0.0);
    EXPECT_DOUBLE_EQ(z.gamma_star, 1.0);
    EXPECT_DOUBLE_EQ(z.threshold, 0.0);
    EXPECT_THROW(optimal_gamma(-0.5), domain_error);
}

TEST(Dimensions, PlugInD)
{
    EXPECT_NEAR(d_from_dimensions(1000, 15), std::log(1000.0) / 15.0, 1e-15);
    EXPECT_THROW(d_from_dimensions(10, 0), config_error);
}
