// config.cpp - Strict schema checks for run configurations

#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <cqed/errors.hpp>

namespace cqed::app {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown field '" + key + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& field, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(field);
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

template <class T>
T need(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("missing field '" + std::string(key) + "' in " + where);
    T value{};
    read(j, key, value, where);
    return value;
}

SystemSpec parse_system(const json& j, UnitTag unit) {
    require_object(j, "system", {"omega_c", "kappa_b", "kappa_c", "emitters", "identical"});
    SystemSpec s;
    s.params.unit = unit;
    s.params.omega_c = need<double>(j, "omega_c", "system");
    s.params.kappa_b = need<double>(j, "kappa_b", "system");
    s.params.kappa_c = need<double>(j, "kappa_c", "system");
    if (j.contains("emitters") && j.contains("identical"))
        throw ConfigError("system: give either 'emitters' or 'identical', not both");
    if (j.contains("emitters")) {
        const json& list = j.at("emitters");
        if (!list.is_array()) throw ConfigError("system.emitters must be an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = "system.emitters[" + std::to_string(i) + "]";
            require_object(list[i], where, {"omega", "gamma", "g"});
            s.params.emitters.push_back(
                {need<double>(list[i], "omega", where), need<double>(list[i], "gamma", where),
                 need<double>(list[i], "g", where)});
        }
        s.n_values = {s.params.size()};
    } else if (j.contains("identical")) {
        const json& id = j.at("identical");
        require_object(id, "system.identical", {"n", "omega_e", "gamma", "g"});
        s.identical = true;
        s.common = {need<double>(id, "omega_e", "system.identical"), need<double>(id, "gamma", "system.identical"),
                    need<double>(id, "g", "system.identical")};
        if (!id.contains("n")) throw ConfigError("missing field 'n' in system.identical");
        const json& n = id.at("n");
        if (n.is_array())
            read(id, "n", s.n_values, "system.identical");
        else
            s.n_values = {need<std::size_t>(id, "n", "system.identical")};
        if (s.n_values.empty()) throw ConfigError("system.identical.n must not be empty");
        for (auto v : s.n_values)
            if (v < 1) throw ConfigError("system.identical.n values must be >= 1");
        s.params = s.params_for(s.n_values.front());
    } else {
        s.n_values = {0};
    }
    try {
        validate(s.params);
    } catch (const InvalidParams& e) {
        throw ConfigError(std::string("system: ") + e.what());
    }
    return s;
}

} // namespace

SystemParams SystemSpec::params_for(std::size_t n) const {
    if (!identical) return params;
    SystemParams p = params;
    p.emitters.assign(n, common);
    return p;
}

IdenticalParams SystemSpec::identical_for(std::size_t n) const {
    return {params.omega_c, params.kappa_b, params.kappa_c, common.omega, common.gamma, common.g, n};
}

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::spectrum: return "spectrum";
    case Mode::g2tau: return "g2tau";
    case Mode::identical_limits: return "identical-limits";
    case Mode::mc: return "mc";
    case Mode::validate: return "validate";
    case Mode::bench: return "bench";
    }
    return "spectrum";
}

void parse_config(const json& doc, RunConfig& cfg) {
    require_object(doc, "config", {"unit", "system", "grid", "tau", "mc", "oracle", "bench", "seed"});
    if (doc.contains("unit")) {
        try {
            cfg.unit = unit_from_string(need<std::string>(doc, "unit", "config"));
        } catch (const InvalidParams& e) {
            throw ConfigError(e.what());
        }
    }
    if (doc.contains("system")) cfg.system = parse_system(doc.at("system"), cfg.unit);
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        require_object(g, "grid", {"omega_min", "omega_max", "points"});
        read(g, "omega_min", cfg.grid.omega_min, "grid");
        read(g, "omega_max", cfg.grid.omega_max, "grid");
        read(g, "points", cfg.grid.points, "grid");
    }
    if (!(cfg.grid.omega_max > cfg.grid.omega_min) || cfg.grid.points < 2)
        throw ConfigError("grid must be increasing with at least 2 points");
    if (doc.contains("tau")) {
        const json& t = doc.at("tau");
        require_object(t, "tau", {"omega_L", "tau_max", "points"});
        TauSpec spec;
        spec.omega_L = need<double>(t, "omega_L", "tau");
        read(t, "tau_max", spec.tau_max, "tau");
        read(t, "points", spec.points, "tau");
        if (!(spec.tau_max > 0.0) || spec.points < 2) throw ConfigError("tau grid must be increasing with >= 2 points");
        cfg.tau = spec;
    }
    if (doc.contains("mc")) {
        json mc = doc.at("mc");
        if (mc.is_object() && !mc.contains("unit")) mc["unit"] = std::string(to_string(cfg.unit));
        cfg.mc = config_from_json(mc);
        try {
            validate(*cfg.mc);
        } catch (const InvalidParams& e) {
            throw ConfigError(std::string("mc: ") + e.what());
        }
    }
    if (doc.contains("oracle")) {
        const json& o = doc.at("oracle");
        require_object(o, "oracle", {"omega_over_kappa", "n_max", "check_convergence"});
        read(o, "omega_over_kappa", cfg.oracle.omega_over_kappa, "oracle");
        read(o, "n_max", cfg.oracle.n_max, "oracle");
        read(o, "check_convergence", cfg.oracle.check_convergence, "oracle");
    }
    if (doc.contains("bench")) {
        const json& b = doc.at("bench");
        require_object(b, "bench", {"n_list", "repeats", "fit_min", "fit_max", "omega_L"});
        read(b, "n_list", cfg.bench.n_list, "bench");
        read(b, "repeats", cfg.bench.repeats, "bench");
        read(b, "fit_min", cfg.bench.fit_min, "bench");
        read(b, "fit_max", cfg.bench.fit_max, "bench");
        read(b, "omega_L", cfg.bench.omega_L, "bench");
        if (cfg.bench.n_list.empty() || !std::is_sorted(cfg.bench.n_list.begin(), cfg.bench.n_list.end()))
            throw ConfigError("bench.n_list must be nonempty and ascending");
        if (cfg.bench.repeats < 1) throw ConfigError("bench.repeats must be >= 1");
    }
    if (doc.contains("seed")) {
        std::uint64_t seed = 0;
        read(doc, "seed", seed, "config");
        cfg.seed = cfg.seed.value_or(seed);
    }
}

void load_config(const std::filesystem::path& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    parse_config(doc, cfg);
}

} // namespace cqed::app
