// commands.hpp - cqed subcommands and the bench harness

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace cqed::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitValidation = 4;

// Test hook: scale kappa_c on the scattering side of `validate`.
struct Hooks {
    double corrupt_kappa_c{1.0};
};

// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_g2tau(const RunConfig& cfg, std::ostream& out);
int cmd_identical_limits(const RunConfig& cfg, std::ostream& out);
int cmd_mc(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, const Hooks& hooks, std::ostream& out);
int cmd_bench(const RunConfig& cfg, std::ostream& out);

struct BenchRow {
    std::size_t n{0};
    double t_transmission{0.0}; // seconds, one frequency including diagonalization
    double t_g2{0.0};
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double exponent_transmission{0.0};
    double exponent_g2{0.0};
};

BenchReport run_bench(const BenchSpec& spec, std::uint64_t seed);
nlohmann::json bench_to_json(const BenchReport& report, const BenchSpec& spec);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace cqed::app
