// montecarlo.cpp - Ensemble sampling, dip detection and aggregation

#include "cqed/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "cqed/errors.hpp"
#include "cqed/format.hpp"
#include "cqed/parallel.hpp"

namespace cqed {

namespace {

constexpr double kDipDepth = 1e-9; // minimum departure from 1 counted as a dip or peak

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in (0, 1) from the 53 high bits of a counter hash.
double uniform_open(std::uint64_t key, std::uint64_t counter) {
    const std::uint64_t bits = splitmix64(key ^ splitmix64(counter)) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d, d = c, fd = fc;
            c = b - r * (b - a), fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + r * (b - a), fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

double safe_eval(const std::function<double(double)>& f, double x) {
    try {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const TransmissionZero&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Width between the crossings of `level` on either side of grid index k.
double crossing_width(const std::vector<double>& x, const std::vector<double>& y, std::size_t k, double level,
                      bool dip) {
    auto inside = [&](std::size_t j) { return dip ? y[j] < level : y[j] > level; };
    auto interp = [&](std::size_t i, std::size_t j) {
        const double t = (level - y[i]) / (y[j] - y[i]);
        return x[i] + t * (x[j] - x[i]);
    };
    std::size_t l = k;
    while (l > 0 && inside(l - 1)) --l;
    const double left = l == 0 ? x.front() : interp(l, l - 1);
    std::size_t r = k;
    while (r + 1 < x.size() && inside(r + 1)) ++r;
    const double right = r + 1 == x.size() ? x.back() : interp(r, r + 1);
    return right - left;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace

std::string_view to_string(DipClass c) {
    switch (c) {
    case DipClass::polaritonic: return "polaritonic";
    case DipClass::subradiant: return "subradiant";
    case DipClass::interference: return "interference";
    case DipClass::fano_bunching_peak: return "fano_bunching_peak";
    case DipClass::unclassified: return "unclassified";
    }
    return "unclassified";
}

void validate(const MCConfig& c) {
    if (c.runs < 1) throw InvalidParams("runs must be >= 1");
    if (!(c.sigma_inhom >= 0.0) || !std::isfinite(c.sigma_inhom)) throw InvalidParams("sigma_inhom must be >= 0");
    if (!(c.omega_max > c.omega_min)) throw InvalidParams("omega_max must exceed omega_min");
    if (c.coarse_step < 0.0 || c.fine_step < 0.0 || c.fine_halfwidth < 0.0)
        throw InvalidParams("grid steps must be nonnegative");
    if (!(c.refine_tol > 0.0)) throw InvalidParams("refine_tol must be positive");
    if (c.omega_bins < 1 || c.g2_bins < 1 || !(c.g2_hist_max > 0.0))
        throw InvalidParams("histogram bins and range must be positive");
    validate(ensemble_params(c, std::vector<double>(c.n, c.mean_omega_e)));
}

std::vector<double> sample_ensemble(const MCConfig& config, std::size_t run_index) {
    const std::uint64_t key = splitmix64(config.seed ^ splitmix64(0x5eed0000ULL + run_index));
    std::vector<double> out(config.n, config.mean_omega_e);
    if (config.sigma_inhom == 0.0) return out;
    for (std::size_t i = 0; i < config.n; i += 2) {
        // Box-Muller on a counter pair; std::normal_distribution is not reproducible across standard libraries
        const double u1 = uniform_open(key, 2 * i), u2 = uniform_open(key, 2 * i + 1);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        out[i] += config.sigma_inhom * rad * std::cos(ang);
        if (i + 1 < config.n) out[i + 1] += config.sigma_inhom * rad * std::sin(ang);
    }
    return out;
}

SystemParams ensemble_params(const MCConfig& config, const std::vector<double>& omegas) {
    SystemParams p;
    p.omega_c = config.omega_c;
    p.kappa_b = config.kappa_b;
    p.kappa_c = config.kappa_c;
    p.unit = config.unit;
    p.emitters.reserve(omegas.size());
    for (double w : omegas) p.emitters.push_back({w, config.gamma, config.g});
    return p;
}

std::vector<double> adaptive_grid(const MCConfig& config, const std::vector<double>& omegas) {
    const double coarse = config.coarse_step > 0.0 ? config.coarse_step : config.kappa() / 200.0;
    const double fine = config.fine_step > 0.0 ? config.fine_step : config.gamma / 10.0;
    const double half = config.fine_halfwidth > 0.0 ? config.fine_halfwidth : 10.0 * config.gamma;
    std::vector<double> grid;
    const auto nc = static_cast<std::size_t>(std::floor((config.omega_max - config.omega_min) / coarse + 1e-9));
    for (std::size_t k = 0; k <= nc; ++k) grid.push_back(config.omega_min + coarse * static_cast<double>(k));
    if (fine > 0.0) {
        const auto nf = static_cast<long>(std::floor(half / fine));
        for (double w : omegas)
            for (long k = -nf; k <= nf; ++k) {
                const double x = w + fine * static_cast<double>(k);
                if (x >= config.omega_min && x <= config.omega_max) grid.push_back(x);
            }
    }
    std::sort(grid.begin(), grid.end());
    const double eps = 1e-9 * std::min(coarse, fine > 0.0 ? fine : coarse);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid)
        if (out.empty() || x - out.back() > eps) out.push_back(x);
    return out;
}

DipContext dip_context(const ScatteringModel& model) {
    const SystemParams& p = model.params();
    DipContext ctx;
    ctx.omega_c = p.omega_c;
    ctx.kappa = p.kappa();
    double gsum = 0.0;
    for (const auto& e : p.emitters) {
        ctx.emitter_omegas.push_back(e.omega);
        gsum += e.gamma;
    }
    ctx.gamma = p.emitters.empty() ? 0.0 : gsum / static_cast<double>(p.emitters.size());

    const EigenSystem& es = model.single();
    const double s = model.frequency_scale();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(es.lambdas.size()));
    for (Eigen::Index k = 0; k < es.lambdas.size(); ++k) order[static_cast<std::size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::norm(es.u(0, a)) > std::norm(es.u(0, b)); });
    if (order.size() >= 2) {
        auto lo = es.lambdas(order[0]), hi = es.lambdas(order[1]);
        if (hi.real() < lo.real()) std::swap(lo, hi);
        ctx.polariton_lower = lo.real() / s;
        ctx.polariton_upper = hi.real() / s;
        ctx.polariton_lower_width = std::abs(lo.imag()) / s;
        ctx.polariton_upper_width = std::abs(hi.imag()) / s;
    } else if (!order.empty()) {
        ctx.polariton_lower = ctx.polariton_upper = es.lambdas(order[0]).real() / s;
    }
    return ctx;
}

std::vector<DipReport> detect_dips(const Spectrum& spectrum, double refine_tol,
                                   const std::function<double(double)>& g2, const DipContext* ctx) {
    const auto& x = spectrum.omega_grid;
    const auto& y = spectrum.g2zero;
    std::vector<DipReport> dips;
    std::vector<std::size_t> where;
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        if (!(y[k] < y[k - 1] && y[k] <= y[k + 1] && y[k] < 1.0 - kDipDepth)) continue;
        DipReport d;
        d.omega_b = x[k];
        d.g2_at_dip = y[k];
        const double xr = golden_min([&](double w) { return safe_eval(g2, w); }, x[k - 1], x[k + 1], refine_tol);
        const double vr = safe_eval(g2, xr);
        if (vr <= d.g2_at_dip) d.omega_b = xr, d.g2_at_dip = vr;
        d.width = crossing_width(x, y, k, 0.5 * (1.0 + d.g2_at_dip), true);
        dips.push_back(d);
        where.push_back(k);
    }
    if (!ctx) return dips;

    // subradiant: sits on an emitter and is about as narrow as its linewidth
    for (auto& d : dips) {
        double nearest = std::numeric_limits<double>::infinity();
        for (double w : ctx->emitter_omegas) nearest = std::min(nearest, std::abs(d.omega_b - w));
        if (nearest < 3.0 * ctx->gamma && d.width <= 2.0 * ctx->gamma) d.cls = DipClass::subradiant;
    }
    // polaritonic: nearest free dip on the outer side of each bright polariton
    {
        DipReport* lower = nullptr;
        DipReport* upper = nullptr;
        for (auto& d : dips) {
            if (d.cls != DipClass::unclassified) continue;
            if (d.omega_b <= ctx->polariton_lower + ctx->polariton_lower_width && (!lower || d.omega_b > lower->omega_b))
                lower = &d;
            if (d.omega_b >= ctx->polariton_upper - ctx->polariton_upper_width && (!upper || d.omega_b < upper->omega_b))
                upper = &d;
        }
        if (lower) lower->cls = DipClass::polaritonic, lower->branch = -1;
        if (upper && upper != lower) upper->cls = DipClass::polaritonic, upper->branch = +1;
    }

    // Fano node: global transmission minimum on the grid
    std::size_t kf = 0;
    for (std::size_t k = 1; k < spectrum.t.size(); ++k)
        if (spectrum.t[k] < spectrum.t[kf]) kf = k;
    const double fano = x.empty() ? ctx->omega_c : x[kf];

    // interference: outermost free dip on the cavity side of a detuned Fano node
    if (std::abs(fano - ctx->omega_c) > 0.25 * ctx->kappa) {
        DipReport* pick = nullptr;
        for (auto& d : dips) {
            if (d.cls != DipClass::unclassified) continue;
            if ((d.omega_b - fano) * (ctx->omega_c - fano) <= 0.0) continue;
            if (!pick || std::abs(d.omega_b - fano) > std::abs(pick->omega_b - fano)) pick = &d;
        }
        if (pick) pick->cls = DipClass::interference;
    }

    // bunching peak: local maximum above 1 closest to the Fano node
    std::size_t kp = x.size();
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        if (!(y[k] > y[k - 1] && y[k] >= y[k + 1] && y[k] > 1.0 + kDipDepth)) continue;
        if (kp == x.size() || std::abs(x[k] - fano) < std::abs(x[kp] - fano)) kp = k;
    }
    if (kp < x.size()) {
        DipReport peak;
        peak.cls = DipClass::fano_bunching_peak;
        peak.omega_b = x[kp];
        peak.g2_at_dip = y[kp];
        const double xr =
            golden_min([&](double w) { return -safe_eval(g2, w); }, x[kp - 1], x[kp + 1], refine_tol);
        const double vr = safe_eval(g2, xr);
        if (std::isfinite(vr) && vr >= peak.g2_at_dip) peak.omega_b = xr, peak.g2_at_dip = vr;
        peak.width = crossing_width(x, y, kp, 1.0 + 0.5 * (y[kp] - 1.0), false);
        dips.push_back(peak);
    }
    std::stable_sort(dips.begin(), dips.end(),
                     [](const DipReport& a, const DipReport& b) { return a.omega_b < b.omega_b; });
    return dips;
}

std::vector<DipReport> detect_dips(const ScatteringModel& model, const Spectrum& spectrum, double refine_tol) {
    const DipContext ctx = dip_context(model);
    return detect_dips(spectrum, refine_tol, [&](double w) { return model.g2_zero(w).value; }, &ctx);
}

const ClassStats* MCResult::find_stats(std::string_view cls) const {
    for (const auto& s : stats)
        if (s.cls == cls) return &s;
    return nullptr;
}

MCResult run_mc(const MCConfig& config) {
    validate(config);
    MCResult result;
    result.config = config;
    result.config_hash = config_hash(config);
    result.runs.resize(config.runs);

    parallel_for(config.runs, config.threads, [&](std::size_t r) {
        RunResult& rr = result.runs[r];
        rr.run = r;
        rr.emitter_omegas = sample_ensemble(config, r);
        try {
            const ScatteringModel model(ensemble_params(config, rr.emitter_omegas));
            const Spectrum sp = model.spectrum(adaptive_grid(config, rr.emitter_omegas), 1);
            rr.dips = detect_dips(model, sp, config.refine_tol);
        } catch (const Error& e) {
            rr.dips.clear();
            rr.error = e.what();
        }
    });

    const std::vector<std::string> classes{"polaritonic", "subradiant", "interference", "fano_bunching_peak",
                                           "unclassified"};
    auto bin = [](double v, double lo, double hi, std::size_t n) {
        const double t = (v - lo) / (hi - lo) * static_cast<double>(n);
        return static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(n - 1)));
    };
    for (const auto& cls : classes) {
        Histogram hw{cls, "omega_b", config.omega_min, config.omega_max, std::vector<std::size_t>(config.omega_bins)};
        Histogram hg{cls, "g2", 0.0, config.g2_hist_max, std::vector<std::size_t>(config.g2_bins)};
        std::vector<double> ws, gs;
        for (const auto& rr : result.runs)
            for (const auto& d : rr.dips)
                if (to_string(d.cls) == cls) {
                    ++hw.counts[bin(d.omega_b, hw.lo, hw.hi, hw.counts.size())];
                    ++hg.counts[bin(d.g2_at_dip, hg.lo, hg.hi, hg.counts.size())];
                    ws.push_back(d.omega_b);
                    gs.push_back(d.g2_at_dip);
                }
        result.histograms.push_back(std::move(hw));
        result.histograms.push_back(std::move(hg));
        result.stats.push_back({cls, ws.size(), mean(ws), stddev(ws), mean(gs), stddev(gs)});
    }
    for (int branch : {-1, +1}) {
        std::vector<double> ws, gs;
        for (const auto& rr : result.runs)
            for (const auto& d : rr.dips)
                if (d.cls == DipClass::polaritonic && d.branch == branch) {
                    ws.push_back(d.omega_b);
                    gs.push_back(d.g2_at_dip);
                }
        result.stats.push_back({branch < 0 ? "polaritonic_lower" : "polaritonic_upper", ws.size(), mean(ws),
                                stddev(ws), mean(gs), stddev(gs)});
    }
    for (const auto& rr : result.runs)
        if (!rr.error.empty()) ++result.failures;
    return result;
}

nlohmann::json config_to_json(const MCConfig& c) {
    return nlohmann::json{{"runs", c.runs},
                          {"n", c.n},
                          {"mean_omega_e", c.mean_omega_e},
                          {"sigma_inhom", c.sigma_inhom},
                          {"omega_c", c.omega_c},
                          {"kappa_b", c.kappa_b},
                          {"kappa_c", c.kappa_c},
                          {"g", c.g},
                          {"gamma", c.gamma},
                          {"unit", std::string(to_string(c.unit))},
                          {"seed", c.seed},
                          {"omega_min", c.omega_min},
                          {"omega_max", c.omega_max},
                          {"coarse_step", c.coarse_step},
                          {"fine_step", c.fine_step},
                          {"fine_halfwidth", c.fine_halfwidth},
                          {"refine_tol", c.refine_tol},
                          {"omega_bins", c.omega_bins},
                          {"g2_bins", c.g2_bins},
                          {"g2_hist_max", c.g2_hist_max}};
}

MCConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("mc config must be a JSON object");
    MCConfig c;
    const nlohmann::json known = config_to_json(c);
    for (const auto& [key, value] : j.items()) {
        if (key == "threads") continue;
        if (!known.contains(key)) throw ConfigError("unknown mc config field '" + key + "'");
    }
    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) j.at(key).get_to(field);
        };
        get("runs", c.runs);
        get("n", c.n);
        get("mean_omega_e", c.mean_omega_e);
        get("sigma_inhom", c.sigma_inhom);
        get("omega_c", c.omega_c);
        get("kappa_b", c.kappa_b);
        get("kappa_c", c.kappa_c);
        get("g", c.g);
        get("gamma", c.gamma);
        get("seed", c.seed);
        get("omega_min", c.omega_min);
        get("omega_max", c.omega_max);
        get("coarse_step", c.coarse_step);
        get("fine_step", c.fine_step);
        get("fine_halfwidth", c.fine_halfwidth);
        get("refine_tol", c.refine_tol);
        get("omega_bins", c.omega_bins);
        get("g2_bins", c.g2_bins);
        get("g2_hist_max", c.g2_hist_max);
        get("threads", c.threads);
        if (j.contains("unit")) c.unit = unit_from_string(j.at("unit").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("mc config: ") + e.what());
    } catch (const InvalidParams& e) {
        throw ConfigError(e.what());
    }
    return c;
}

std::string config_hash(const MCConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(config).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json to_json(const MCResult& r) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& rr : r.runs) {
        nlohmann::json dips = nlohmann::json::array();
        for (const auto& d : rr.dips)
            dips.push_back({{"omega_b", d.omega_b},
                            {"g2", d.g2_at_dip},
                            {"class", std::string(to_string(d.cls))},
                            {"width", d.width},
                            {"branch", d.branch}});
        nlohmann::json run{{"run", rr.run}, {"emitter_omegas", rr.emitter_omegas}, {"dips", std::move(dips)}};
        if (!rr.error.empty()) run["error"] = rr.error;
        runs.push_back(std::move(run));
    }
    nlohmann::json hists = nlohmann::json::array();
    for (const auto& h : r.histograms) {
        std::vector<double> edges(h.counts.size() + 1);
        for (std::size_t k = 0; k < edges.size(); ++k)
            edges[k] = h.lo + (h.hi - h.lo) * static_cast<double>(k) / static_cast<double>(h.counts.size());
        hists.push_back({{"class", h.cls}, {"quantity", h.quantity}, {"edges", edges}, {"counts", h.counts}});
    }
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& s : r.stats)
        stats.push_back({{"class", s.cls},
                         {"count", s.count},
                         {"mean_omega_b", s.mean_omega},
                         {"std_omega_b", s.std_omega},
                         {"mean_g2", s.mean_g2},
                         {"std_g2", s.std_g2}});
    return {{"config", config_to_json(r.config)},
            {"runs", std::move(runs)},
            {"histograms", std::move(hists)},
            {"stats", std::move(stats)},
            {"provenance",
             {{"seed", r.config.seed},
              {"config_hash", r.config_hash},
              {"failed_runs", r.failures},
              {"rng", "splitmix64 counter hash keyed by (seed, run_index), Box-Muller normals"}}},
            {"heuristics",
             {{"subradiant", "within 3 gamma of an emitter and full width at half depth <= 2 gamma"},
              {"polaritonic", "nearest remaining dip on the outer side of each of the two brightest polaritons"},
              {"interference",
               "outermost remaining dip on the cavity side of the Fano node, only when the node is detuned by "
               "more than kappa/4"},
              {"fano_bunching_peak", "local maximum above 1 nearest the transmission minimum"}}}};
}

std::string histograms_csv(const MCResult& r) {
    std::ostringstream out;
    out << "class,quantity,bin_lo,bin_hi,count\n";
    for (const auto& h : r.histograms) {
        const double step = (h.hi - h.lo) / static_cast<double>(h.counts.size());
        for (std::size_t k = 0; k < h.counts.size(); ++k)
            out << h.cls << ',' << h.quantity << ',' << format_double(h.lo + step * static_cast<double>(k)) << ','
                << format_double(h.lo + step * static_cast<double>(k + 1)) << ',' << h.counts[k] << '\n';
    }
    return out.str();
}

} // namespace cqed
