// scattering.cpp - Spectral evaluation of single- and two-photon observables

#include "cqed/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <mutex>
#include <utility>

#include "cqed/errors.hpp"
#include "cqed/parallel.hpp"

namespace cqed {

using cd = std::complex<double>;

struct ScatteringModel::State {
    SystemParams params;
    double fscale{1.0};
    double tscale{1.0};
    double kb{0.0}, kc{0.0};
    OperatorBlocks blocks;
    bool project_pair{false}; // h2 and a12 still to be built from params

    std::once_flag single_once, pair_once;
    EigenSystem es1, es2;
    Eigen::VectorXcd c;  // <G|a|phi1_j>_T
    Eigen::MatrixXcd m;  // <phi2_i|a^dag|phi1_j>_T
    Eigen::VectorXcd b2; // <G|a^2|phi2_i>_T
    std::vector<std::size_t> bright2;

    void ensure_single() {
        std::call_once(single_once, [this] {
            es1 = diag_complex_symmetric(blocks.h1, 1);
            c = (blocks.a01.cast<cd>() * es1.u).transpose();
        });
    }
    void ensure_pair() {
        ensure_single();
        std::call_once(pair_once, [this] {
            if (project_pair) {
                OperatorBlocks full = project_operators(normalized(params), 2);
                blocks.h2 = std::move(full.h2);
                blocks.a12 = std::move(full.a12);
            }
            es2 = diag_complex_symmetric(blocks.h2, 2);
            m = es2.u.transpose() * (blocks.a12.transpose().cast<cd>() * es1.u);
            b2 = ((blocks.a01 * blocks.a12).cast<cd>() * es2.u).transpose();
            for (Eigen::Index i = 0; i < b2.size(); ++i)
                if (std::abs(b2(i)) > kBrightTol) bright2.push_back(static_cast<std::size_t>(i));
        });
    }

    double norm_omega(double omega_L) const { return omega_L * fscale; }

    Eigen::VectorXcd resolvent1(double w) const {
        return (es1.lambdas.array() - w).inverse().matrix();
    }
    double transmission_at(const Eigen::VectorXcd& d1) const {
        const cd s = (c.array().square() * d1.array()).sum();
        return kb * kc * std::norm(s);
    }
    double checked_transmission(double omega_L, const Eigen::VectorXcd& d1) const {
        const double t = transmission_at(d1);
        if (!(t >= kTransmissionFloor)) throw TransmissionZero(omega_L, t);
        return t;
    }
};

// The two-excitation block is O(N^4) in memory, so it is only built on demand.
ScatteringModel::ScatteringModel(const SystemParams& params)
    : ScatteringModel(project_operators(normalized(params), 1), params) {
    state_->project_pair = true;
}

ScatteringModel::ScatteringModel(OperatorBlocks blocks, const SystemParams& params)
    : state_(std::make_shared<State>()) {
    validate(params);
    auto& s = *state_;
    s.params = params;
    s.fscale = cqed::frequency_scale(params);
    s.tscale = cqed::time_scale(params);
    s.kb = params.kappa_b * s.fscale;
    s.kc = params.kappa_c * s.fscale;
    s.blocks = std::move(blocks);
}

const SystemParams& ScatteringModel::params() const noexcept { return state_->params; }
double ScatteringModel::frequency_scale() const noexcept { return state_->fscale; }
double ScatteringModel::time_scale() const noexcept { return state_->tscale; }

const EigenSystem& ScatteringModel::single() const {
    state_->ensure_single();
    return state_->es1;
}

const EigenSystem& ScatteringModel::pair() const {
    state_->ensure_pair();
    return state_->es2;
}

double ScatteringModel::transmission(double omega_L) const {
    auto& s = *state_;
    s.ensure_single();
    return s.transmission_at(s.resolvent1(s.norm_omega(omega_L)));
}

G2Zero ScatteringModel::g2_zero(double omega_L) const {
    auto& s = *state_;
    s.ensure_pair();
    const double w = s.norm_omega(omega_L);
    const Eigen::VectorXcd d1 = s.resolvent1(w);
    const double pref = s.kb * s.kc / s.checked_transmission(omega_L, d1);
    const Eigen::VectorXcd y = s.m * (d1.array() * s.c.array()).matrix();

    G2Zero out;
    out.contributions.reserve(s.bright2.size());
    cd total = 0.0;
    for (auto i : s.bright2) {
        const cd gamma = pref * s.b2(i) * y(i) / (s.es2.lambdas(i) - 2.0 * w);
        total += gamma;
        out.contributions.push_back({i, gamma, std::abs(gamma), std::arg(gamma)});
    }
    out.value = std::norm(total);
    return out;
}

G2Components ScatteringModel::components(double omega_L) const {
    auto& s = *state_;
    s.ensure_pair();
    const double w = s.norm_omega(omega_L);
    const Eigen::VectorXcd d1 = s.resolvent1(w);
    const double t = s.checked_transmission(omega_L, d1);
    const cd sum1 = (s.c.array().square() * d1.array()).sum();
    const Eigen::VectorXcd y = s.m * (d1.array() * s.c.array()).matrix();
    const Eigen::VectorXcd z = (y.array() / (s.es2.lambdas.array() - 2.0 * w)).matrix();

    G2Components out;
    out.disconnected_weights = (s.c.array().square() * d1.array() * sum1).matrix();
    out.connected_weights = (s.c.array() * (s.m.transpose() * z).array()).matrix();
    out.lambdas1 = s.es1.lambdas;
    out.omega_L = omega_L;
    out.prefactor = s.kb * s.kc / t;
    return out;
}

double ScatteringModel::g2_zero_kernel(double omega_L) const {
    const G2Components comp = components(omega_L);
    return comp.prefactor * comp.prefactor * std::norm(comp.connected_weights.sum());
}

G2Trace ScatteringModel::g2_tau(double omega_L, const std::vector<double>& taus) const {
    const G2Components comp = components(omega_L);
    const double w = state_->norm_omega(omega_L);
    const cd steady = comp.disconnected_weights.sum();
    const Eigen::ArrayXcd diff = (comp.connected_weights - comp.disconnected_weights).array();
    const Eigen::ArrayXcd rate = cd(0.0, -1.0) * (comp.lambdas1.array() - w);
    const double pref2 = comp.prefactor * comp.prefactor;

    G2Trace out;
    out.omega_L = omega_L;
    out.taus = taus;
    out.g2.reserve(taus.size());
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (taus[k] < 0.0 || (k > 0 && taus[k] < taus[k - 1]))
            throw InvalidParams("g2_tau: delays must be nonnegative and ascending");
        const double tn = taus[k] * state_->tscale;
        out.g2.push_back(pref2 * std::norm(steady + (diff * (rate * tn).exp()).sum()));
    }
    return out;
}

AnharmonicityReport ScatteringModel::anharmonicity() const {
    auto& s = *state_;
    s.ensure_pair();
    AnharmonicityReport best;
    bool found = false;
    for (Eigen::Index i = 0; i < s.c.size(); ++i) {
        if (std::abs(s.c(i)) <= kBrightTol) continue;
        for (auto j : s.bright2) {
            const double d = std::abs(2.0 * s.es1.lambdas(i).real() - s.es2.lambdas(j).real());
            if (!found || d < best.delta_omega_12) {
                found = true;
                best.delta_omega_12 = d;
                best.delta_omega_2 = std::abs(s.es2.lambdas(j).imag());
                best.single_index = static_cast<std::size_t>(i);
                best.pair_index = j;
            }
        }
    }
    best.delta_omega_12 /= s.fscale;
    best.delta_omega_2 /= s.fscale;
    return best;
}

Spectrum ScatteringModel::spectrum(const std::vector<double>& omega_grid, std::size_t threads) const {
    for (std::size_t k = 1; k < omega_grid.size(); ++k)
        if (!(omega_grid[k] > omega_grid[k - 1]))
            throw InvalidParams("spectrum: frequency grid must be strictly increasing");
    state_->ensure_pair();
    Spectrum out;
    out.omega_grid = omega_grid;
    out.t.resize(omega_grid.size());
    out.g2zero.resize(omega_grid.size());
    parallel_for(omega_grid.size(), threads, [&](std::size_t k) {
        out.t[k] = transmission(omega_grid[k]);
        out.g2zero[k] = g2_zero(omega_grid[k]).value;
    });
    return out;
}

namespace {

std::vector<double> cache_key(const SystemParams& p) {
    std::vector<double> key{p.omega_c, p.kappa_b, p.kappa_c, static_cast<double>(p.unit)};
    for (const auto& e : p.emitters) key.insert(key.end(), {e.omega, e.gamma, e.g});
    return key;
}

ScatteringModel cached_model(const SystemParams& params) {
    static std::mutex mutex;
    static std::list<std::pair<std::vector<double>, ScatteringModel>> entries;
    constexpr std::size_t capacity = 16;
    auto key = cache_key(params);
    std::lock_guard lock(mutex);
    for (auto it = entries.begin(); it != entries.end(); ++it) {
        if (it->first == key) {
            entries.splice(entries.begin(), entries, it);
            return entries.front().second;
        }
    }
    entries.emplace_front(std::move(key), ScatteringModel(params));
    if (entries.size() > capacity) entries.pop_back();
    return entries.front().second;
}

} // namespace

double transmission(const SystemParams& params, double omega_L) {
    return cached_model(params).transmission(omega_L);
}

G2Zero g2_zero(const SystemParams& params, double omega_L) {
    return cached_model(params).g2_zero(omega_L);
}

G2Trace g2_tau(const SystemParams& params, double omega_L, const std::vector<double>& taus) {
    return cached_model(params).g2_tau(omega_L, taus);
}

AnharmonicityReport anharmonicity(const SystemParams& params) {
    return cached_model(params).anharmonicity();
}

double settling_time(const G2Trace& trace, double tol) {
    if (trace.taus.empty()) return 0.0;
    std::size_t k = trace.g2.size();
    while (k > 0 && std::abs(trace.g2[k - 1] - 1.0) < tol) --k;
    return trace.taus[std::min(k, trace.taus.size() - 1)];
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t k = 0; k < n; ++k)
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}

} // namespace cqed
