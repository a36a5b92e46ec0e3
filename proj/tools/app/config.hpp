// config.hpp - Strict JSON run configuration for the cqed tool

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <cqed/identical.hpp>
#include <cqed/montecarlo.hpp>
#include <cqed/params.hpp>

namespace cqed::app {

enum class Mode { spectrum, g2tau, identical_limits, mc, validate, bench };
enum class Format { csv, json };

struct GridSpec {
    double omega_min{-2.0};
    double omega_max{2.0};
    std::size_t points{401};
};

struct TauSpec {
    double omega_L{0.0};
    double tau_max{10.0};
    std::size_t points{201};
};

struct OracleSpec {
    double omega_over_kappa{1e-3};
    int n_max{6};
    bool check_convergence{true};
};

struct BenchSpec {
    std::vector<std::size_t> n_list{5, 10, 20, 35, 50};
    std::size_t repeats{1};
    double fit_min{10.0};
    double fit_max{50.0};
    double omega_L{0.0};
};

// System description: either an explicit emitter list or identical emitters
// with one or more N values.
struct SystemSpec {
    SystemParams params;             // explicit emitters (or the first N when identical)
    bool identical{false};
    Emitter common;                  // identical emitter parameters
    std::vector<std::size_t> n_values;

    SystemParams params_for(std::size_t n) const;
    IdenticalParams identical_for(std::size_t n) const;
};

struct RunConfig {
    Mode mode{Mode::spectrum};
    std::filesystem::path config_path;
    std::filesystem::path out_path;
    Format format{Format::csv};
    bool contributions{false};
    std::optional<std::uint64_t> seed;
    std::size_t threads{0};

    UnitTag unit{UnitTag::kappa_units};
    std::optional<SystemSpec> system;
    GridSpec grid;
    std::optional<TauSpec> tau;
    std::optional<MCConfig> mc;
    OracleSpec oracle;
    BenchSpec bench;
};

// Parses the document into `cfg`; throws ConfigError on any schema violation.
void parse_config(const nlohmann::json& doc, RunConfig& cfg);
void load_config(const std::filesystem::path& path, RunConfig& cfg);

std::string_view to_string(Mode mode);

} // namespace cqed::app
