#ifndef TSMT_PRESETS_HPP
#define TSMT_PRESETS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsmt/csv.hpp"
#include "tsmt/error.hpp"
#include "tsmt/simulation.hpp"

// Parameter grids reproducing the published figures at desk scale.

namespace tsmt::sim {

enum class PresetName { fig4_1, fig8_1, fig8_2, fig8_3, fig8_4 };

inline std::optional<PresetName> parse_preset(std::string_view s)
{
    if (s == "fig4_1") return PresetName::fig4_1;
    if (s == "fig8_1") return PresetName::fig8_1;
    if (s == "fig8_2") return PresetName::fig8_2;
    if (s == "fig8_3") return PresetName::fig8_3;
    if (s == "fig8_4") return PresetName::fig8_4;
    return std::nullopt;
}

inline std::string_view preset_name(PresetName p)
{
    switch (p) {
    case PresetName::fig4_1: return "fig4_1";
    case PresetName::fig8_1: return "fig8_1";
    case PresetName::fig8_2: return "fig8_2";
    case PresetName::fig8_3: return "fig8_3";
    case PresetName::fig8_4: return "fig8_4";
    }
    return "?";
}

struct PresetOptions {
    std::size_t replications = 2000;
    std::uint64_t seed = 20170225;
    // Fig 8.3/8.4 signal means: the caption's constant 1 by default, or U(-1, 1) draws as in the text.
    MeanKind fwer_figure_means = MeanKind::constant;
    // Fig 8.3/8.4 split-sample cutoff: t_{n1-1}(1 - m^{gamma-1}/2), or the fixed t_{n1}(0.75).
    SplitCutoff fwer_figure_split_cutoff = SplitCutoff::gamma_rule;
};

/// Either simulation cells, or (fig4_1) a grid of d values for the threshold calculators.
struct Preset {
    PresetName name = PresetName::fig4_1;
    std::vector<ScenarioConfig> scenarios;
    std::vector<double> d_grid;
};

/// {from, from + step, ..., to}, built from integer multiples so endpoints are exact.
inline std::vector<double> grid(double from, double to, double step)
{
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(std::round((from + step * static_cast<double>(k)) * 1e10) / 1e10);
    return out;
}

/// floor(m^{1-eps}), guarded against pow() landing just under an integer.
inline std::size_t sparse_signal_count(std::size_t m, double epsilon)
{
    return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(m), 1.0 - epsilon) + 1e-9));
}

/// floor(pi1 m), same guard.
inline std::size_t proportion_signal_count(std::size_t m, double pi1)
{
    return static_cast<std::size_t>(std::floor(pi1 * static_cast<double>(m) + 1e-9));
}

/// gamma such that m^{gamma-1} = beta.
inline double gamma_for_beta(std::size_t m, double beta)
{
    return 1.0 + std::log(beta) / std::log(static_cast<double>(m));
}

namespace detail {

inline std::string cell_id(const ScenarioConfig& c)
{
    return c.figure + "/" + c.panel + "/" + c.x_name + "=" + csv::format_double(c.x);
}

inline ScenarioConfig global_test_base(const PresetOptions& opt)
{
    ScenarioConfig c;
    c.m = 1000;
    c.n = 15;
    c.variance = {VarianceKind::common_uniform, 0.5, 1.5};
    c.mean = {MeanKind::uniform_pm1, 1.0, true};
    c.procedure.methods = {Method::ts_bonf, Method::bonferroni, Method::simes, Method::ss_bonf, Method::hc};
    c.procedure.alpha = 0.05;
    c.procedure.gamma = 0.5;
    c.procedure.sigma_mode = SigmaMode::estimated;
    c.procedure.split = {0.5, 0.5, SplitCutoff::gamma_rule, 0.75};
    c.replications = opt.replications;
    c.base_seed = opt.seed;
    return c;
}

inline ScenarioConfig fwer_base(const PresetOptions& opt)
{
    ScenarioConfig c;
    c.m = 100;
    c.n = 15;
    c.dependence = Dependence::equal_correlation;
    c.variance = {VarianceKind::common_uniform, 0.5, 1.5};
    c.mean = {opt.fwer_figure_means, 1.0, true};
    c.procedure.methods = {Method::ts_bonf, Method::bonferroni, Method::hochberg, Method::ss_bonf};
    c.procedure.alpha = 0.05;
    // selection at sigma2_hat * chi2_n(0.5): about half of the m hypotheses
    c.procedure.gamma = gamma_for_beta(c.m, 0.5);
    c.procedure.sigma_mode = SigmaMode::estimated;
    c.procedure.split = {0.5, c.procedure.gamma, opt.fwer_figure_split_cutoff, 0.75};
    c.replications = opt.replications;
    c.base_seed = opt.seed;
    return c;
}

}  // namespace detail

inline constexpr double kFig81PowerEpsilon = 0.7;

inline Preset scenario_preset(PresetName name, const PresetOptions& opt = {})
{
    Preset p;
    p.name = name;
    auto push = [&](ScenarioConfig c) {
        c.figure = std::string(preset_name(name));
        c.id = detail::cell_id(c);
        p.scenarios.push_back(std::move(c));
    };
    switch (name) {
    case PresetName::fig4_1:
        p.d_grid = grid(0.05, 1.0, 0.05);
        break;
    case PresetName::fig8_1:
        for (const char* panel : {"type1", "power"}) {
            for (double rho : grid(0.0, 0.95, 0.05)) {
                auto c = detail::global_test_base(opt);
                c.dependence = Dependence::equal_correlation;
                c.rho = rho;
                c.panel = panel;
                c.x_name = "rho";
                c.x = rho;
                c.signal_count = std::string_view(panel) == "power" ? sparse_signal_count(c.m, kFig81PowerEpsilon) : 0;
                push(c);
            }
        }
        break;
    case PresetName::fig8_2: {
        struct Panel {
            const char* name;
            VarianceMode variance;
        };
        const Panel panels[] = {
            {"equal_var_0.5_1.5", {VarianceKind::common_uniform, 0.5, 1.5}},
            {"unequal_var_0.8_1.2", {VarianceKind::per_hypothesis_uniform, 0.8, 1.2}},
            {"unequal_var_0.5_1.5", {VarianceKind::per_hypothesis_uniform, 0.5, 1.5}},
        };
        for (const auto& panel : panels) {
            for (double eps : grid(0.5, 1.0, 0.1)) {
                auto c = detail::global_test_base(opt);
                c.dependence = Dependence::independent;
                c.variance = panel.variance;
                c.panel = panel.name;
                c.x_name = "epsilon";
                c.x = eps;
                c.signal_count = sparse_signal_count(c.m, eps);
                push(c);
            }
        }
        break;
    }
    case PresetName::fig8_3:
        for (double rho : {0.0, 0.5}) {
            for (double pi1 : grid(0.0, 0.5, 0.05)) {
                auto c = detail::fwer_base(opt);
                c.rho = rho;
                c.panel = "rho=" + csv::format_double(rho);
                c.x_name = "pi1";
                c.x = pi1;
                c.signal_count = proportion_signal_count(c.m, pi1);
                push(c);
            }
        }
        break;
    case PresetName::fig8_4:
        for (double rho : grid(0.0, 0.95, 0.05)) {
            auto c = detail::fwer_base(opt);
            c.rho = rho;
            c.panel = "pi1=0.2";
            c.x_name = "rho";
            c.x = rho;
            c.signal_count = proportion_signal_count(c.m, 0.2);
            push(c);
        }
        break;
    }
    return p;
}

}  // namespace tsmt::sim

#endif  // TSMT_PRESETS_HPP
