// tsmt: command-line front end for two-stage multiple testing.
//
//   tsmt run --data X.csv --method ts-bonf --alpha 0.05 --gamma 0.5 --sigma estimated
//   tsmt thresholds --d 0.5 --optimize
//   tsmt simulate --preset fig8_1 --reps 50 --seed 7 --out results.csv
//   tsmt plot-data --data results.csv --out plot.csv
//
// Exit status: 0 success, 1 data error, 2 usage or configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsmt/tsmt.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string data;
    std::string out;
    std::vector<std::string> methods;
    double alpha = 0.05;
    double gamma = 0.5;
    std::string sigma = "estimated";
    double split_r = 0.5;
    std::string split_cutoff = "gamma";
    bool skip_header = false;

    std::string preset;
    std::size_t reps = 2000;
    std::uint64_t seed = 20170225;
    std::size_t m = 1000;
    std::size_t n = 15;
    std::string dependence = "independent";
    double rho = 0.0;
    std::size_t block_size = 1;
    std::size_t signals = 0;
    std::string variance = "unit";
    double var_lo = 0.5;
    double var_hi = 1.5;
    std::string means = "uniform";
    double mean_value = 1.0;

    std::vector<double> d;
    bool optimize = false;
};

const std::vector<std::string> kMethodNames = {"ts-bonf", "ts-holm", "bonferroni", "holm", "hochberg",
                                               "bh",      "simes",   "hc",         "ss-bonf"};

/// Output sink: the --out file, or stdout.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw tsmt::data_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

tsmt::SigmaMode sigma_mode(const Options& o)
{
    return o.sigma == "known" ? tsmt::SigmaMode::known_unit : tsmt::SigmaMode::estimated;
}

tsmt::SplitOptions split_options(const Options& o)
{
    tsmt::SplitOptions s;
    s.r = o.split_r;
    s.gamma = o.gamma;
    s.cutoff = o.split_cutoff == "constant" ? tsmt::SplitCutoff::constant_level : tsmt::SplitCutoff::gamma_rule;
    return s;
}

std::string bool_cell(bool b) { return b ? "1" : "0"; }

// ---- run ----

int cmd_run(const Options& o)
{
    using tsmt::csv::format_double;
    if (o.methods.size() != 1) throw tsmt::config_error("run: exactly one --method is required");
    const auto method = *tsmt::sim::parse_method(o.methods.front());
    const auto data = tsmt::csv::read_dataset_file(o.data, o.skip_header);
    if (data.rows() == 0) throw tsmt::data_error("'" + o.data + "' contains no rows");
    const auto stats = tsmt::summary_stats(data);
    const std::size_t m = data.rows();

    std::vector<double> p(m);
    for (std::size_t i = 0; i < m; ++i) p[i] = stats[i].p_value;

    std::vector<bool> selected(m, true);
    std::vector<bool> rejected(m, false);
    std::optional<double> sigma2_hat;
    std::optional<bool> global;

    using tsmt::sim::Method;
    auto apply = [&](const tsmt::ProcedureResult& r) {
        for (const auto& d : r.per_hypothesis) {
            selected[d.index] = d.selected;
            rejected[d.index] = d.rejected;
        }
        sigma2_hat = r.sigma2_hat;
    };
    auto mark = [&](const std::vector<std::size_t>& idx) {
        for (std::size_t i : idx) rejected[i] = true;
    };
    const tsmt::SelectionRule rule{o.gamma, sigma_mode(o), tsmt::Sigma2Estimator::mean, std::nullopt};
    switch (method) {
    case Method::ts_bonf: apply(tsmt::two_stage_bonferroni(data, o.alpha, rule)); break;
    case Method::ts_holm: apply(tsmt::two_stage_holm(data, o.alpha, rule)); break;
    case Method::ss_bonf: apply(tsmt::split_sample_procedure(data, o.alpha, split_options(o))); break;
    case Method::bonferroni: mark(tsmt::classic_procedure(p, o.alpha, tsmt::ClassicMethod::bonferroni)); break;
    case Method::holm: mark(tsmt::classic_procedure(p, o.alpha, tsmt::ClassicMethod::holm)); break;
    case Method::hochberg: mark(tsmt::classic_procedure(p, o.alpha, tsmt::ClassicMethod::hochberg)); break;
    case Method::bh: mark(tsmt::classic_procedure(p, o.alpha, tsmt::ClassicMethod::benjamini_hochberg)); break;
    case Method::simes: global = tsmt::simes_global(p, o.alpha); break;
    case Method::hc: {
        const auto cal = tsmt::HCCalibration::simulate(m, o.alpha, o.seed, tsmt::kDefaultHcReplications);
        global = tsmt::higher_criticism_global(p, o.alpha, cal);
        break;
    }
    }

    Sink sink(o.out);
    auto& out = sink.stream();
    out << "index,S,T,p,selected,rejected\n";
    std::size_t n_sel = 0;
    std::size_t n_rej = 0;
    for (std::size_t i = 0; i < m; ++i) {
        n_sel += selected[i] ? 1 : 0;
        n_rej += rejected[i] ? 1 : 0;
        out << i << ',' << format_double(stats[i].s_stat) << ',' << format_double(stats[i].t_stat) << ','
            << format_double(stats[i].p_value) << ',' << bool_cell(selected[i]) << ',' << bool_cell(rejected[i])
            << '\n';
    }
    out.flush();

    std::cerr << "summary,method=" << tsmt::sim::method_name(method) << ",m=" << m << ",selected=" << n_sel
              << ",rejections=" << n_rej;
    if (sigma2_hat) std::cerr << ",sigma2_hat=" << format_double(*sigma2_hat);
    if (global) std::cerr << ",global_reject=" << bool_cell(*global);
    std::cerr << '\n';
    return 0;
}

// ---- thresholds ----

void write_thresholds(std::ostream& out, const std::string& scenario, const std::vector<double>& ds,
                      const Options& o, bool optimize)
{
    using tsmt::asymptotics::ThresholdMethod;
    out << tsmt::report::kThresholdHeader << '\n';
    for (double d : ds) {
        if (optimize) {
            for (const auto& row : tsmt::report::optimal_threshold_rows(scenario, d)) {
                tsmt::report::write_threshold_row(out, row);
            }
            continue;
        }
        const tsmt::asymptotics::AsymptoticRegime regime{d, o.gamma, o.split_r, 1.0};
        const auto ts = tsmt::asymptotics::detection_threshold(ThresholdMethod::two_stage, regime);
        tsmt::report::write_threshold_row(out, {scenario, d, o.gamma, std::nullopt, ts});
        for (auto mth : {ThresholdMethod::bonferroni_t, ThresholdMethod::bonferroni_z}) {
            tsmt::report::write_threshold_row(
                out, {scenario, d, std::nullopt, std::nullopt, tsmt::asymptotics::detection_threshold(mth, regime)});
        }
        tsmt::report::write_threshold_row(
            out, {scenario, d, o.gamma, o.split_r,
                  tsmt::asymptotics::detection_threshold(ThresholdMethod::split_sample, regime)});
    }
}

int cmd_thresholds(const Options& o)
{
    std::vector<double> ds = o.d;
    std::string scenario = "custom";
    bool optimize = o.optimize;
    if (!o.preset.empty()) {
        const auto name = tsmt::sim::parse_preset(o.preset);
        if (name != tsmt::sim::PresetName::fig4_1) {
            throw tsmt::config_error("thresholds: only the fig4_1 preset describes a threshold grid");
        }
        ds = tsmt::sim::scenario_preset(*name).d_grid;
        scenario = "fig4_1";
        optimize = true;
    }
    if (ds.empty()) throw tsmt::config_error("thresholds: give at least one --d or --preset fig4_1");
    Sink sink(o.out);
    write_thresholds(sink.stream(), scenario, ds, o, optimize);
    return 0;
}

// ---- simulate ----

tsmt::sim::ScenarioConfig explicit_scenario(const Options& o)
{
    using namespace tsmt::sim;
    ScenarioConfig c;
    c.id = "custom";
    c.figure = "custom";
    c.panel = "custom";
    c.x_name = "rho";
    c.m = o.m;
    c.n = o.n;
    c.dependence = o.dependence == "equal" ? Dependence::equal_correlation
                   : o.dependence == "block" ? Dependence::block
                                             : Dependence::independent;
    c.rho = o.rho;
    c.x = o.rho;
    c.block_size = o.block_size;
    c.signal_count = o.signals;
    if (o.variance == "common") c.variance = {VarianceKind::common_uniform, o.var_lo, o.var_hi};
    if (o.variance == "per-hypothesis") c.variance = {VarianceKind::per_hypothesis_uniform, o.var_lo, o.var_hi};
    c.mean = {o.means == "constant" ? MeanKind::constant : MeanKind::uniform_pm1, o.mean_value, true};
    c.procedure.methods.clear();
    for (const auto& name : o.methods) c.procedure.methods.push_back(*parse_method(name));
    if (c.procedure.methods.empty()) c.procedure.methods = {Method::ts_bonf, Method::bonferroni};
    c.procedure.alpha = o.alpha;
    c.procedure.gamma = o.gamma;
    c.procedure.sigma_mode = sigma_mode(o);
    c.procedure.split = split_options(o);
    c.replications = o.reps;
    c.base_seed = o.seed;
    return c;
}

int cmd_simulate(const Options& o)
{
    std::vector<tsmt::sim::ScenarioConfig> cells;
    if (!o.preset.empty()) {
        const auto name = *tsmt::sim::parse_preset(o.preset);
        if (name == tsmt::sim::PresetName::fig4_1) {
            Sink sink(o.out);
            write_thresholds(sink.stream(), "fig4_1", tsmt::sim::scenario_preset(name).d_grid, o, true);
            return 0;
        }
        tsmt::sim::PresetOptions popt;
        popt.replications = o.reps;
        popt.seed = o.seed;
        popt.fwer_figure_means = o.means == "uniform" ? tsmt::sim::MeanKind::uniform_pm1 : tsmt::sim::MeanKind::constant;
        popt.fwer_figure_split_cutoff =
            o.split_cutoff == "constant" ? tsmt::SplitCutoff::constant_level : tsmt::SplitCutoff::gamma_rule;
        cells = tsmt::sim::scenario_preset(name, popt).scenarios;
    } else {
        cells.push_back(explicit_scenario(o));
    }
    for (const auto& c : cells) c.validate();

    Sink sink(o.out);
    auto& out = sink.stream();
    out << tsmt::report::kMetricsHeader << '\n';
    for (const auto& c : cells) {
        tsmt::report::write_metrics_rows(out, tsmt::sim::estimate_metrics(c));
        out.flush();
    }
    return 0;
}

// ---- plot-data ----

int cmd_plot_data(const Options& o)
{
    Sink sink(o.out);
    if (o.data.empty() || o.data == "-") {
        tsmt::report::emit_plot_data(std::cin, sink.stream());
    } else {
        std::ifstream in(o.data);
        if (!in) throw tsmt::data_error("cannot open '" + o.data + "'");
        tsmt::report::emit_plot_data(in, sink.stream());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    Options o;
    CLI::App app{"Two-stage multiple testing with independence filtering"};
    app.require_subcommand(1);

    const std::vector<std::string> presets = {"fig4_1", "fig8_1", "fig8_2", "fig8_3", "fig8_4"};

    auto* run = app.add_subcommand("run", "apply a procedure to a CSV data matrix (rows = hypotheses)");
    run->add_option("--data", o.data, "input CSV, one row per hypothesis")->required()->check(CLI::ExistingFile);
    run->add_option("--method", o.methods, "procedure")->required()->check(CLI::IsMember(kMethodNames));
    run->add_option("--alpha", o.alpha, "level")->check(CLI::Range(0.0, 1.0));
    run->add_option("--gamma", o.gamma, "selection exponent in (0,1]");
    run->add_option("--sigma", o.sigma, "variance handling")->check(CLI::IsMember({"known", "estimated"}));
    run->add_option("--split-r", o.split_r, "split-sample selection fraction");
    run->add_option("--split-cutoff", o.split_cutoff, "split-sample cutoff rule")
        ->check(CLI::IsMember({"gamma", "constant"}));
    run->add_option("--seed", o.seed, "seed for Higher Criticism calibration");
    run->add_flag("--skip-header", o.skip_header, "ignore the first line of the input");
    run->add_option("--out", o.out, "decisions CSV (default stdout)");

    auto* thr = app.add_subcommand("thresholds", "asymptotic detection boundaries for mu^2");
    thr->add_option("--d", o.d, "log(m)/n limit; repeatable")->delimiter(',');
    thr->add_option("--gamma", o.gamma, "selection exponent in (0,1]");
    thr->add_option("--split-r", o.split_r, "split fraction for the split-sample boundary");
    thr->add_flag("--optimize", o.optimize, "report gamma* and the boundary at gamma*");
    thr->add_option("--preset", o.preset, "threshold grid preset")->check(CLI::IsMember({"fig4_1"}));
    thr->add_option("--out", o.out, "threshold CSV (default stdout)");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo FWER and power");
    sim->add_option("--preset", o.preset, "figure preset")->check(CLI::IsMember(presets));
    sim->add_option("--reps", o.reps, "replications per cell")->check(CLI::PositiveNumber);
    sim->add_option("--seed", o.seed, "base seed");
    sim->add_option("--method", o.methods, "procedures (explicit scenario)")
        ->delimiter(',')
        ->check(CLI::IsMember(kMethodNames));
    sim->add_option("--alpha", o.alpha, "level")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--gamma", o.gamma, "selection exponent in (0,1]");
    sim->add_option("--sigma", o.sigma, "variance handling")->check(CLI::IsMember({"known", "estimated"}));
    sim->add_option("--split-r", o.split_r, "split-sample selection fraction");
    sim->add_option("--split-cutoff", o.split_cutoff, "split-sample cutoff rule")
        ->check(CLI::IsMember({"gamma", "constant"}));
    sim->add_option("--m", o.m, "number of hypotheses");
    sim->add_option("--n", o.n, "observations per hypothesis");
    sim->add_option("--dependence", o.dependence, "noise dependence")
        ->check(CLI::IsMember({"independent", "equal", "block"}));
    sim->add_option("--rho", o.rho, "correlation");
    sim->add_option("--block-size", o.block_size, "block size for block dependence");
    sim->add_option("--signals", o.signals, "number of false nulls");
    sim->add_option("--variance", o.variance, "noise variance model")
        ->check(CLI::IsMember({"unit", "common", "per-hypothesis"}));
    sim->add_option("--var-lo", o.var_lo, "variance range lower end");
    sim->add_option("--var-hi", o.var_hi, "variance range upper end");
    sim->add_option("--means", o.means, "signal means: U(-1,1) or a constant")
        ->check(CLI::IsMember({"uniform", "constant"}));
    sim->add_option("--mean-value", o.mean_value, "constant signal mean");
    sim->add_option("--out", o.out, "results CSV (default stdout)");

    auto* plot = app.add_subcommand("plot-data", "convert a results CSV to long-format plot data");
    plot->add_option("--data", o.data, "results CSV from simulate or thresholds (default stdin)");
    plot->add_option("--out", o.out, "plot CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) return cmd_run(o);
        if (*thr) return cmd_thresholds(o);
        if (*sim) return cmd_simulate(o);
        if (*plot) return cmd_plot_data(o);
    } catch (const tsmt::data_error& e) {
        std::cerr << "tsmt: data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "tsmt: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "tsmt: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "tsmt: error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitConfig;
}
