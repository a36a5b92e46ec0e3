// params.cpp - Parameter validation and unit normalization

#include "cqed/params.hpp"

#include <cmath>
#include <numbers>

#include "cqed/errors.hpp"

namespace cqed {

std::string_view to_string(UnitTag unit) {
    switch (unit) {
    case UnitTag::kappa_units: return "kappa_units";
    case UnitTag::ghz_2pi: return "ghz_2pi";
    }
    return "kappa_units";
}

UnitTag unit_from_string(std::string_view text) {
    if (text == "kappa_units") return UnitTag::kappa_units;
    if (text == "ghz_2pi") return UnitTag::ghz_2pi;
    throw InvalidParams("unknown unit '" + std::string(text) + "' (expected kappa_units or ghz_2pi)");
}

namespace {

void require_finite(double value, const std::string& name) {
    if (!std::isfinite(value)) throw InvalidParams(name + " must be finite");
}

void require_rate(double value, const std::string& name) {
    require_finite(value, name);
    if (value < 0.0) throw InvalidParams(name + " must be nonnegative");
}

} // namespace

void validate(const SystemParams& params) {
    require_finite(params.omega_c, "omega_c");
    require_rate(params.kappa_b, "kappa_b");
    require_rate(params.kappa_c, "kappa_c");
    if (!(params.kappa() > 0.0)) throw InvalidParams("kappa_b + kappa_c must be positive");
    for (std::size_t i = 0; i < params.emitters.size(); ++i) {
        const auto& e = params.emitters[i];
        const std::string tag = "emitter[" + std::to_string(i) + "].";
        require_finite(e.omega, tag + "omega");
        require_rate(e.gamma, tag + "gamma");
        require_finite(e.g, tag + "g");
    }
}

double frequency_scale(const SystemParams& params) {
    // ghz_2pi: angular = 2*pi*value and kappa scales identically, so the 2*pi cancels
    return 1.0 / params.kappa();
}

double time_scale(const SystemParams& params) {
    return params.kappa() * (params.unit == UnitTag::ghz_2pi ? 2.0 * std::numbers::pi : 1.0);
}

SystemParams normalized(const SystemParams& params) {
    validate(params);
    const double s = frequency_scale(params);
    SystemParams out = params;
    out.omega_c *= s;
    out.kappa_b *= s;
    out.kappa_c *= s;
    for (auto& e : out.emitters) {
        e.omega *= s;
        e.gamma *= s;
        e.g *= s;
    }
    return out;
}

SystemParams identical_system(double omega_c, double kappa_b, double kappa_c,
                              double omega_e, double gamma, double g, std::size_t n) {
    SystemParams p;
    p.omega_c = omega_c;
    p.kappa_b = kappa_b;
    p.kappa_c = kappa_c;
    p.emitters.assign(n, Emitter{omega_e, gamma, g});
    return p;
}

std::optional<Emitter> common_emitter(const SystemParams& params) {
    if (params.emitters.empty()) return std::nullopt;
    const Emitter& first = params.emitters.front();
    for (const auto& e : params.emitters)
        if (e.omega != first.omega || e.gamma != first.gamma || e.g != first.g) return std::nullopt;
    return first;
}

} // namespace cqed
