// commands.cpp - Orchestration of library calls and file output

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <cqed/errors.hpp>
#include <cqed/format.hpp>
#include <cqed/oracle.hpp>
#include <cqed/scattering.hpp>

namespace cqed::app {

namespace {

using nlohmann::json;

struct ValidationBreach : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const SystemSpec& need_system(const RunConfig& cfg) {
    if (!cfg.system) throw ConfigError(std::string(to_string(cfg.mode)) + " needs a 'system' section");
    return *cfg.system;
}

ScatteringModel model_for(const SystemSpec& s, std::size_t n) {
    if (s.identical) return reduced_model(s.identical_for(n), s.params.unit);
    return ScatteringModel(s.params_for(n));
}

// Output file per N when sweeping: "out.csv" -> "out_N4.csv".
std::filesystem::path path_for(const RunConfig& cfg, std::size_t n, bool sweep) {
    if (!sweep || cfg.out_path.empty()) return cfg.out_path;
    std::filesystem::path p = cfg.out_path;
    p.replace_filename(p.stem().string() + "_N" + std::to_string(n) + p.extension().string());
    return p;
}

void emit(const RunConfig& cfg, const std::filesystem::path& path, const std::string& text, std::ostream& out,
          const std::string& label = {}) {
    if (path.empty()) {
        if (!label.empty()) out << "# " << label << '\n';
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + path.string() + "'");
    f << text;
    if (!f) throw ConfigError("failed writing output file '" + path.string() + "'");
    (void)cfg;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string row(std::initializer_list<double> values) {
    std::string s;
    bool first = true;
    for (double v : values) {
        if (!first) s += ',';
        s += format_double(v);
        first = false;
    }
    return s;
}

std::vector<double> grid_of(const RunConfig& cfg) {
    return linspace(cfg.grid.omega_min, cfg.grid.omega_max, cfg.grid.points);
}

} // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    const SystemSpec& sys = need_system(cfg);
    const auto grid = grid_of(cfg);
    const bool sweep = sys.n_values.size() > 1;
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (std::size_t n : sys.n_values) {
        const ScatteringModel model = model_for(sys, n);
        const Spectrum sp = model.spectrum(grid, cfg.threads);
        std::vector<G2Zero> contrib;
        if (cfg.contributions)
            for (double w : grid) contrib.push_back(model.g2_zero(w));
        std::string text;
        if (cfg.format == Format::csv) {
            std::ostringstream s;
            s << "omega_L,T,g2_0";
            if (cfg.contributions && !contrib.empty())
                for (const auto& c : contrib.front().contributions)
                    s << ",gamma" << c.index << "_abs,gamma" << c.index << "_arg";
            s << '\n';
            for (std::size_t k = 0; k < grid.size(); ++k) {
                s << row({grid[k], sp.t[k], sp.g2zero[k]});
                if (cfg.contributions)
                    for (const auto& c : contrib[k].contributions)
                        s << ',' << format_double(c.magnitude) << ',' << format_double(c.phase);
                s << '\n';
            }
            text = s.str();
        } else {
            json j{{"n", n}, {"omega_L", grid}, {"T", sp.t}, {"g2_0", sp.g2zero}};
            if (cfg.contributions) {
                json cols = json::array();
                for (const auto& c : contrib) {
                    json pts = json::array();
                    for (const auto& d : c.contributions)
                        pts.push_back({{"index", d.index}, {"abs", d.magnitude}, {"arg", d.phase}});
                    cols.push_back(std::move(pts));
                }
                j["contributions"] = std::move(cols);
            }
            text = dump(j);
        }
        files.emplace_back(path_for(cfg, n, sweep), std::move(text));
    }
    for (std::size_t k = 0; k < files.size(); ++k)
        emit(cfg, files[k].first, files[k].second, out, sweep ? "N = " + std::to_string(sys.n_values[k]) : "");
    return kExitOk;
}

int cmd_g2tau(const RunConfig& cfg, std::ostream& out) {
    const SystemSpec& sys = need_system(cfg);
    if (!cfg.tau) throw ConfigError("g2tau needs a 'tau' section");
    const auto taus = linspace(0.0, cfg.tau->tau_max, cfg.tau->points);
    const bool sweep = sys.n_values.size() > 1;
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    std::ostringstream summary;
    for (std::size_t n : sys.n_values) {
        const G2Trace tr = model_for(sys, n).g2_tau(cfg.tau->omega_L, taus);
        const double settle = settling_time(tr);
        summary << "N=" << n << " settling_time=" << format_double(settle) << '\n';
        std::string text;
        if (cfg.format == Format::csv) {
            std::ostringstream s;
            s << "tau,g2\n";
            for (std::size_t k = 0; k < taus.size(); ++k) s << row({taus[k], tr.g2[k]}) << '\n';
            text = s.str();
        } else {
            text = dump(json{{"n", n}, {"omega_L", tr.omega_L}, {"tau", tr.taus}, {"g2", tr.g2},
                             {"settling_time", settle}, {"settling_tolerance", 0.05}});
        }
        files.emplace_back(path_for(cfg, n, sweep), std::move(text));
    }
    for (std::size_t k = 0; k < files.size(); ++k)
        emit(cfg, files[k].first, files[k].second, out, sweep ? "N = " + std::to_string(sys.n_values[k]) : "");
    if (!cfg.out_path.empty()) out << summary.str();
    return kExitOk;
}

namespace {

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

template <class Vec>
json complex_list(const Vec& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(complex_json(z));
    return a;
}

} // namespace

int cmd_identical_limits(const RunConfig& cfg, std::ostream& out) {
    const SystemSpec& sys = need_system(cfg);
    if (!sys.identical) throw ConfigError("identical-limits needs system.identical");
    const auto grid = grid_of(cfg);
    const bool sweep = sys.n_values.size() > 1;
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (std::size_t n : sys.n_values) {
        const IdenticalParams ip = sys.identical_for(n);
        const ScatteringModel model = reduced_model(ip, sys.params.unit);
        const Spectrum sp = model.spectrum(grid, cfg.threads);
        const double n2 = static_cast<double>(n) * static_cast<double>(n);
        std::vector<double> n2t(grid.size()), n2t_lim(grid.size()), g2_lim(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            n2t[k] = n2 * sp.t[k];
            n2t_lim[k] = limit_transmission(ip, grid[k]);
            g2_lim[k] = limit_g2(ip, grid[k]);
        }
        std::string text;
        if (cfg.format == Format::csv) {
            std::ostringstream s;
            s << "omega_L,N2T,N2T_limit,g2_0,g2_limit\n";
            for (std::size_t k = 0; k < grid.size(); ++k)
                s << row({grid[k], n2t[k], n2t_lim[k], sp.g2zero[k], g2_lim[k]}) << '\n';
            text = s.str();
        } else {
            const BrightEigen1 b1 = bright_single_eigen(ip);
            const BrightEigen2 b2 = bright_two_eigen(ip);
            const AsymptoticEigen as = asymptotic_eigen(ip);
            text = dump(json{
                {"n", n},
                {"omega_L", grid},
                {"N2T", n2t},
                {"N2T_limit", n2t_lim},
                {"g2_0", sp.g2zero},
                {"g2_limit", g2_lim},
                {"bright_single", {{"lambdas", complex_list(std::vector{b1.lambda_minus, b1.lambda_plus})},
                                   {"subradiant_multiplicity", b1.subradiant_multiplicity},
                                   {"subradiant_lambda", complex_json(b1.subradiant_lambda)}}},
                {"bright_two", {{"lambdas", complex_list(b2.lambdas3)},
                                {"pair_lambdas", complex_list(b2.pair_lambdas)},
                                {"pair_multiplicity", b2.pair_multiplicity},
                                {"deep_subradiant_multiplicity", b2.deep_subradiant_multiplicity},
                                {"deep_subradiant_lambda", complex_json(b2.deep_subradiant_lambda)}}},
                {"asymptotic", {{"lambda1", complex_list(std::vector{as.lambda1_minus, as.lambda1_plus})},
                                {"lambda2", complex_list(std::vector{as.lambda2_minus, as.lambda2_zero, as.lambda2_plus})}}}});
        }
        files.emplace_back(path_for(cfg, n, sweep), std::move(text));
    }
    for (std::size_t k = 0; k < files.size(); ++k)
        emit(cfg, files[k].first, files[k].second, out, sweep ? "N = " + std::to_string(sys.n_values[k]) : "");
    return kExitOk;
}

int cmd_mc(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.mc) throw ConfigError("mc needs an 'mc' section");
    MCConfig mc = *cfg.mc;
    if (cfg.seed) mc.seed = *cfg.seed;
    if (cfg.threads) mc.threads = cfg.threads;
    const MCResult result = run_mc(mc);
    const std::string text = cfg.format == Format::json ? dump(to_json(result)) : histograms_csv(result);
    emit(cfg, cfg.out_path, text, out);
    if (!cfg.out_path.empty())
        out << "runs=" << mc.runs << " failed=" << result.failures << " config_hash=" << result.config_hash << '\n';
    return kExitOk;
}

int cmd_validate(const RunConfig& cfg, const Hooks& hooks, std::ostream& out) {
    const SystemSpec& sys = need_system(cfg);
    const SystemParams params = sys.params_for(sys.n_values.front());
    SystemParams scattered = params;
    scattered.kappa_c *= hooks.corrupt_kappa_c;
    const ScatteringModel model(scattered);
    const auto grid = grid_of(cfg);
    OracleOptions opt;
    opt.check_convergence = cfg.oracle.check_convergence;

    std::vector<double> t_or(grid.size()), g_or(grid.size()), t_sc(grid.size()), g_sc(grid.size());
    double worst_t = 0.0, worst_g = 0.0, worst_tau = 0.0;
    double at_t = grid.front(), at_g = grid.front();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const DriveConfig drive = DriveConfig::weak(params, grid[k], cfg.oracle.omega_over_kappa, cfg.oracle.n_max);
        const OracleObservables o = steady_state_observables(params, drive, opt);
        t_or[k] = o.transmission;
        g_or[k] = o.g2zero;
        t_sc[k] = model.transmission(grid[k]);
        g_sc[k] = model.g2_zero(grid[k]).value;
        const double dt = std::abs(t_sc[k] - t_or[k]) / std::max(std::abs(t_or[k]), 1e-300);
        const double dg = std::abs(g_sc[k] - g_or[k]) / std::max(std::abs(g_or[k]), 1e-300);
        if (dt > worst_t) worst_t = dt, at_t = grid[k];
        if (dg > worst_g) worst_g = dg, at_g = grid[k];
    }
    json report{{"n", params.size()},
                {"max_rel_dev_T", worst_t},
                {"omega_L_worst_T", at_t},
                {"max_rel_dev_g2_0", worst_g},
                {"omega_L_worst_g2_0", at_g},
                {"omega_L", grid},
                {"T", t_sc},
                {"T_oracle", t_or},
                {"g2_0", g_sc},
                {"g2_0_oracle", g_or}};
    if (cfg.tau) {
        const auto taus = linspace(0.0, cfg.tau->tau_max, cfg.tau->points);
        const DriveConfig drive =
            DriveConfig::weak(params, cfg.tau->omega_L, cfg.oracle.omega_over_kappa, cfg.oracle.n_max);
        const G2Trace o = g2_tau_regression(params, drive, taus, opt);
        const G2Trace s = model.g2_tau(cfg.tau->omega_L, taus);
        for (std::size_t k = 0; k < taus.size(); ++k)
            worst_tau = std::max(worst_tau, std::abs(s.g2[k] - o.g2[k]) / std::abs(o.g2[k]));
        report["max_rel_dev_g2_tau"] = worst_tau;
        report["tau"] = taus;
        report["g2_tau"] = s.g2;
        report["g2_tau_oracle"] = o.g2;
    }
    std::string text;
    if (cfg.format == Format::json) {
        text = dump(report);
    } else {
        std::ostringstream s;
        s << "omega_L,T,T_oracle,g2_0,g2_0_oracle\n";
        for (std::size_t k = 0; k < grid.size(); ++k) s << row({grid[k], t_sc[k], t_or[k], g_sc[k], g_or[k]}) << '\n';
        text = s.str();
    }
    emit(cfg, cfg.out_path, text, out);

    std::ostringstream summary;
    summary << "max_rel_dev T=" << format_double(worst_t) << " g2_0=" << format_double(worst_g);
    if (cfg.tau) summary << " g2_tau=" << format_double(worst_tau);
    const double limit = 0.02;
    if (worst_t >= limit || worst_g >= limit || worst_tau >= limit) {
        summary << "; breach at omega_L=" << format_double(worst_t >= worst_g ? at_t : at_g);
        throw ValidationBreach(summary.str());
    }
    if (!cfg.out_path.empty()) out << summary.str() << '\n';
    return kExitOk;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

BenchReport run_bench(const BenchSpec& spec, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    BenchReport report;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(-1.0, 1.0), coupling(0.1, 0.3);
    for (std::size_t n : spec.n_list) {
        SystemParams p;
        p.omega_c = 0.0;
        p.kappa_b = p.kappa_c = 0.5;
        for (std::size_t i = 0; i < n; ++i) p.emitters.push_back({freq(rng), 0.01, coupling(rng)});
        BenchRow r;
        r.n = n;
        r.t_transmission = r.t_g2 = std::numeric_limits<double>::infinity();
        for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
            auto t0 = clock::now();
            volatile double t = ScatteringModel(p).transmission(spec.omega_L);
            auto t1 = clock::now();
            volatile double g = ScatteringModel(p).g2_zero(spec.omega_L).value;
            auto t2 = clock::now();
            (void)t, (void)g;
            r.t_transmission = std::min(r.t_transmission, std::chrono::duration<double>(t1 - t0).count());
            r.t_g2 = std::min(r.t_g2, std::chrono::duration<double>(t2 - t1).count());
        }
        report.rows.push_back(r);
    }
    std::vector<double> ns, tt, tg;
    for (const auto& r : report.rows)
        if (static_cast<double>(r.n) >= spec.fit_min && static_cast<double>(r.n) <= spec.fit_max) {
            ns.push_back(static_cast<double>(r.n));
            tt.push_back(r.t_transmission);
            tg.push_back(r.t_g2);
        }
    report.exponent_transmission = loglog_slope(ns, tt);
    report.exponent_g2 = loglog_slope(ns, tg);
    return report;
}

json bench_to_json(const BenchReport& report, const BenchSpec& spec) {
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"n", r.n}, {"t_transmission_s", r.t_transmission}, {"t_g2_s", r.t_g2}});
    std::string compiler =
#if defined(__clang__)
        "clang " __clang_version__;
#elif defined(__GNUC__)
        "gcc " __VERSION__;
#else
        "unknown";
#endif
    return {{"rows", rows},
            {"fit_range", {spec.fit_min, spec.fit_max}},
            {"exponent_transmission", report.exponent_transmission},
            {"exponent_g2", report.exponent_g2},
            {"machine", {{"hardware_threads", std::thread::hardware_concurrency()}, {"compiler", compiler}}}};
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
    const BenchReport report = run_bench(cfg.bench, cfg.seed.value_or(1));
    std::string text;
    if (cfg.format == Format::json) {
        text = dump(bench_to_json(report, cfg.bench));
    } else {
        std::ostringstream s;
        s << "N,t_transmission_s,t_g2_s\n";
        for (const auto& r : report.rows)
            s << r.n << ',' << format_double(r.t_transmission) << ',' << format_double(r.t_g2) << '\n';
        text = s.str();
    }
    emit(cfg, cfg.out_path, text, out);
    if (!cfg.out_path.empty() || cfg.format == Format::csv)
        out << "exponent_transmission=" << format_double(report.exponent_transmission)
            << " exponent_g2=" << format_double(report.exponent_g2) << '\n';
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"cqed - photon transport through a cavity coupled to N two-level emitters"};
    app.require_subcommand(1);
    RunConfig cfg;
    Hooks hooks;
    std::string config_path, out_path, format = "csv";
    std::uint64_t seed = 0;

    struct Entry {
        Mode mode;
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {Mode::spectrum, "spectrum", "T and g2(0) over a frequency grid"},
        {Mode::g2tau, "g2tau", "delayed correlation g2(tau) at one drive frequency"},
        {Mode::identical_limits, "identical-limits", "identical-emitter spectra next to the N -> infinity limits"},
        {Mode::mc, "mc", "inhomogeneous-broadening Monte-Carlo dip statistics"},
        {Mode::validate, "validate", "compare against the master-equation oracle"},
        {Mode::bench, "bench", "time T and g2(0) against N"},
    };
    std::vector<std::pair<CLI::App*, Mode>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "output file (stdout when omitted)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
        sub->add_option("--threads", cfg.threads, "worker threads (default: CQED_THREADS or all cores)");
        if (e.mode == Mode::spectrum) sub->add_flag("--contributions", cfg.contributions, "add per-eigenstate Gamma columns");
        if (e.mode == Mode::validate)
            sub->add_option("--test-corrupt-kappa-c", hooks.corrupt_kappa_c, "scale kappa_c in the scattering path")
                ->group("");
        subs.emplace_back(sub, e.mode);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        for (const auto& [sub, mode] : subs)
            if (sub->parsed()) cfg.mode = mode;
        cfg.format = format == "json" ? Format::json : Format::csv;
        cfg.out_path = out_path;
        cfg.config_path = config_path;
        for (const auto& [sub, mode] : subs)
            if (sub->parsed() && sub->count("--seed")) cfg.seed = seed;
        load_config(cfg.config_path, cfg);
        switch (cfg.mode) {
        case Mode::spectrum: return cmd_spectrum(cfg, out);
        case Mode::g2tau: return cmd_g2tau(cfg, out);
        case Mode::identical_limits: return cmd_identical_limits(cfg, out);
        case Mode::mc: return cmd_mc(cfg, out);
        case Mode::validate: return cmd_validate(cfg, hooks, out);
        case Mode::bench: return cmd_bench(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ValidationBreach& e) {
        err << "validation failed: " << e.what() << '\n';
        return kExitValidation;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace cqed::app
