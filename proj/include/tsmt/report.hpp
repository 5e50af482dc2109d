#ifndef TSMT_REPORT_HPP
#define TSMT_REPORT_HPP

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tsmt/asymptotics.hpp"
#include "tsmt/csv.hpp"
#include "tsmt/error.hpp"
#include "tsmt/simulation.hpp"

// CSV writers for simulation and threshold results, and the long-format plot-data converter.

namespace tsmt::report {

inline constexpr std::string_view kMetricsHeader =
    "scenario,figure,panel,x_name,x,m,n,dependence,rho,block_size,signal_count,variance_mode,mean_mode,"
    "alpha,gamma,method,estimate,value,se,replications";

inline constexpr std::string_view kThresholdHeader =
    "scenario,d,gamma,r,method,mu2_threshold,detection_branch,selection_branch";

inline constexpr std::string_view kPlotHeader = "figure,panel,x,series,y,se";

inline std::string_view to_string(sim::Dependence d)
{
    switch (d) {
    case sim::Dependence::independent: return "independent";
    case sim::Dependence::equal_correlation: return "equal_correlation";
    case sim::Dependence::block: return "block";
    }
    return "?";
}

inline std::string describe(const sim::VarianceMode& v)
{
    switch (v.kind) {
    case sim::VarianceKind::unit: return "unit";
    case sim::VarianceKind::common_uniform:
        return "common_uniform(" + csv::format_double(v.lo) + ";" + csv::format_double(v.hi) + ")";
    case sim::VarianceKind::per_hypothesis_uniform:
        return "per_hypothesis_uniform(" + csv::format_double(v.lo) + ";" + csv::format_double(v.hi) + ")";
    }
    return "?";
}

inline std::string describe(const sim::MeanMode& mm)
{
    std::string s = mm.kind == sim::MeanKind::uniform_pm1 ? "uniform_pm1" : "constant(" + csv::format_double(mm.value) + ")";
    return mm.redraw ? s : s + "_fixed";
}

/// One row per (method, defined estimate), in method order then
/// fwer, type1_global, avg_power, global_power, mean_selected.
inline void write_metrics_rows(std::ostream& out, const sim::MetricsReport& rep)
{
    const auto& c = rep.config;
    const std::string prefix = c.id + "," + c.figure + "," + c.panel + "," + c.x_name + "," + csv::format_double(c.x) +
                               "," + std::to_string(c.m) + "," + std::to_string(c.n) + "," +
                               std::string(to_string(c.dependence)) + "," + csv::format_double(c.rho) + "," +
                               std::to_string(c.block_size) + "," + std::to_string(c.signal_count) + "," +
                               describe(c.variance) + "," + describe(c.mean) + "," +
                               csv::format_double(c.procedure.alpha) + "," + csv::format_double(c.procedure.gamma);
    for (const auto& mm : rep.methods) {
        const std::tuple<std::string_view, const std::optional<sim::Estimate>*> estimates[] = {
            {"fwer", &mm.fwer},
            {"type1_global", &mm.type1_global},
            {"avg_power", &mm.avg_power},
            {"global_power", &mm.global_power},
            {"mean_selected", &mm.mean_selected},
        };
        for (const auto& [name, est] : estimates) {
            if (!*est) continue;
            out << prefix << ',' << sim::method_name(mm.method) << ',' << name << ','
                << csv::format_double((*est)->value) << ',' << csv::format_double((*est)->se) << ','
                << mm.replications_used << '\n';
        }
    }
}

struct ThresholdRow {
    std::string scenario;
    double d = 0.0;
    std::optional<double> gamma;
    std::optional<double> r;
    asymptotics::ThresholdReport report;
};

inline void write_threshold_row(std::ostream& out, const ThresholdRow& row)
{
    const bool two_stage = row.report.method == asymptotics::ThresholdMethod::two_stage;
    out << row.scenario << ',' << csv::format_double(row.d) << ','
        << (row.gamma ? csv::format_double(*row.gamma) : "") << ',' << (row.r ? csv::format_double(*row.r) : "")
        << ',' << asymptotics::to_string(row.report.method) << ','
        << csv::format_double(row.report.mu_squared_threshold) << ','
        << (two_stage ? csv::format_double(row.report.detection_branch) : "") << ','
        << (two_stage ? csv::format_double(row.report.selection_branch) : "") << '\n';
}

/// Rows for one d on the Figure 4.1 grid: gamma*, the two-stage boundary at gamma*, and the
/// Bonferroni boundary.
inline std::vector<ThresholdRow> optimal_threshold_rows(const std::string& scenario, double d)
{
    using asymptotics::ThresholdMethod;
    const auto opt = asymptotics::optimal_gamma(d);
    std::vector<ThresholdRow> rows;
    rows.push_back({scenario, d, opt.gamma_star, std::nullopt,
                    asymptotics::detection_threshold(ThresholdMethod::two_stage, {d, opt.gamma_star, std::nullopt, 1.0})});
    rows.push_back({scenario, d, std::nullopt, std::nullopt,
                    asymptotics::detection_threshold(ThresholdMethod::bonferroni_t, {d, 1.0, std::nullopt, 1.0})});
    return rows;
}

struct PlotPoint {
    std::string figure;
    std::string panel;
    double x = 0.0;
    std::string series;
    double y = 0.0;
    std::optional<double> se;
};

namespace detail {

inline double cell_double(const std::string& s, std::size_t row, const char* col)
{
    double v = 0.0;
    if (!csv::parse_double(s, v)) {
        throw data_error("results row " + std::to_string(row + 1) + ": column '" + col + "' is not a number: '" + s + "'");
    }
    return v;
}

inline std::string threshold_series(std::string_view method)
{
    if (method == "two_stage") return "TS Bonf.";
    if (method == "bonferroni_t") return "Bonf.";
    if (method == "bonferroni_z") return "Bonf. (z)";
    if (method == "split_sample") return "SS Bonf.";
    return std::string(method);
}

inline bool header_is(const csv::Table& t, std::string_view header)
{
    std::vector<std::string> expected;
    for (auto f : csv::split_line(header)) expected.emplace_back(f);
    return t.header == expected;
}

}  // namespace detail

/// Converts a simulate or thresholds results table to long-format plot points, sorted by
/// (figure, panel, series, x). Throws data_error for any other schema.
inline std::vector<PlotPoint> plot_points(const csv::Table& t)
{
    std::vector<PlotPoint> pts;
    if (t.header.empty()) return pts;
    if (detail::header_is(t, kMetricsHeader)) {
        const int c_fig = t.column("figure"), c_panel = t.column("panel"), c_x = t.column("x"),
                  c_method = t.column("method"), c_est = t.column("estimate"), c_val = t.column("value"),
                  c_se = t.column("se");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& r = t.rows[i];
            const auto method = sim::parse_method(r[c_method]);
            PlotPoint p;
            p.figure = r[c_fig];
            p.panel = r[c_panel] + ":" + r[c_est];
            p.x = detail::cell_double(r[c_x], i, "x");
            p.series = method ? std::string(sim::method_label(*method)) : r[c_method];
            p.y = detail::cell_double(r[c_val], i, "value");
            p.se = detail::cell_double(r[c_se], i, "se");
            pts.push_back(std::move(p));
        }
    } else if (detail::header_is(t, kThresholdHeader)) {
        const int c_sc = t.column("scenario"), c_d = t.column("d"), c_g = t.column("gamma"),
                  c_method = t.column("method"), c_mu = t.column("mu2_threshold");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& r = t.rows[i];
            const double d = detail::cell_double(r[c_d], i, "d");
            const std::string series = detail::threshold_series(r[c_method]);
            if (r[c_method] == "two_stage" && !r[c_g].empty()) {
                pts.push_back({r[c_sc], "gamma_star", d, series, detail::cell_double(r[c_g], i, "gamma"), std::nullopt});
            }
            pts.push_back({r[c_sc], "mu2_threshold", d, series, detail::cell_double(r[c_mu], i, "mu2_threshold"),
                           std::nullopt});
        }
    } else {
        throw data_error("unrecognized results schema (header: '" +
                         (t.header.empty() ? std::string() : t.header.front()) + ",...')");
    }
    std::stable_sort(pts.begin(), pts.end(), [](const PlotPoint& a, const PlotPoint& b) {
        return std::tie(a.figure, a.panel, a.series, a.x) < std::tie(b.figure, b.panel, b.series, b.x);
    });
    return pts;
}

inline void write_plot_data(std::ostream& out, const std::vector<PlotPoint>& pts)
{
    out << kPlotHeader << '\n';
    for (const auto& p : pts) {
        out << p.figure << ',' << p.panel << ',' << csv::format_double(p.x) << ',' << p.series << ','
            << csv::format_double(p.y) << ',' << (p.se ? csv::format_double(*p.se) : "") << '\n';
    }
}

/// Reads a results CSV and writes its plot data; an empty input yields the header only.
inline void emit_plot_data(std::istream& in, std::ostream& out)
{
    write_plot_data(out, plot_points(csv::read_table(in)));
}

}  // namespace tsmt::report

#endif  // TSMT_REPORT_HPP
