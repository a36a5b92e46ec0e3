// montecarlo.hpp - Inhomogeneous-broadening ensembles and blockade dip statistics

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cqed/params.hpp"
#include "cqed/scattering.hpp"

namespace cqed {

// All frequencies and rates in the unit given by `unit`.
struct MCConfig {
    std::size_t runs{200};
    std::size_t n{5};
    double mean_omega_e{0.0};
    double sigma_inhom{0.0};
    double omega_c{0.0};
    double kappa_b{0.5};
    double kappa_c{0.5};
    double g{0.2};
    double gamma{0.01};
    UnitTag unit{UnitTag::kappa_units};
    std::uint64_t seed{0};

    double omega_min{-2.5};
    double omega_max{3.0};
    double coarse_step{0.0};     // 0: kappa / 200
    double fine_step{0.0};       // 0: gamma / 10
    double fine_halfwidth{0.0};  // 0: 10 gamma around each emitter
    double refine_tol{1e-7};     // golden-section tolerance in frequency

    std::size_t omega_bins{50};
    std::size_t g2_bins{20};
    double g2_hist_max{1.0};
    std::size_t threads{0};

    double kappa() const noexcept { return kappa_b + kappa_c; }
};

void validate(const MCConfig& config);

enum class DipClass { polaritonic, subradiant, interference, fano_bunching_peak, unclassified };

std::string_view to_string(DipClass c);

struct DipReport {
    double omega_b{0.0};
    double g2_at_dip{0.0};
    DipClass cls{DipClass::unclassified};
    double width{0.0}; // full width at half depth (half height above 1 for peaks)
    int branch{0};     // polaritonic: -1 lower, +1 upper
};

// Information used to label dips. Frequencies in the spectrum's unit.
struct DipContext {
    std::vector<double> emitter_omegas;
    double gamma{0.0};
    double omega_c{0.0};
    double kappa{1.0};
    double polariton_lower{0.0}, polariton_upper{0.0};
    double polariton_lower_width{0.0}, polariton_upper_width{0.0};
};

DipContext dip_context(const ScatteringModel& model);

// Local minima of g2 below 1 on the grid, refined by golden-section search on
// `g2` to refine_tol. Without a context every dip is unclassified and no
// bunching peak is reported.
std::vector<DipReport> detect_dips(const Spectrum& spectrum, double refine_tol,
                                   const std::function<double(double)>& g2,
                                   const DipContext* context = nullptr);

std::vector<DipReport> detect_dips(const ScatteringModel& model, const Spectrum& spectrum, double refine_tol);

// Counter-based normal draws keyed by (seed, run_index).
std::vector<double> sample_ensemble(const MCConfig& config, std::size_t run_index);

SystemParams ensemble_params(const MCConfig& config, const std::vector<double>& omegas);

// Coarse grid plus fine patches around each emitter frequency.
std::vector<double> adaptive_grid(const MCConfig& config, const std::vector<double>& omegas);

struct RunResult {
    std::size_t run{0};
    std::vector<double> emitter_omegas;
    std::vector<DipReport> dips;
    std::string error; // nonempty when the run failed and was skipped
};

struct Histogram {
    std::string cls;
    std::string quantity; // "omega_b" or "g2"
    double lo{0.0}, hi{0.0};
    std::vector<std::size_t> counts;
};

struct ClassStats {
    std::string cls;
    std::size_t count{0};
    double mean_omega{0.0}, std_omega{0.0};
    double mean_g2{0.0}, std_g2{0.0};
};

struct MCResult {
    MCConfig config;
    std::vector<RunResult> runs;
    std::vector<Histogram> histograms;
    std::vector<ClassStats> stats; // per class, plus polaritonic_lower / polaritonic_upper
    std::size_t failures{0};
    std::string config_hash;

    const ClassStats* find_stats(std::string_view cls) const;
};

MCResult run_mc(const MCConfig& config);

nlohmann::json config_to_json(const MCConfig& config);
MCConfig config_from_json(const nlohmann::json& j); // strict: unknown keys rejected
nlohmann::json to_json(const MCResult& result);
std::string histograms_csv(const MCResult& result);

// FNV-1a of the canonical JSON config, as 16 hex digits.
std::string config_hash(const MCConfig& config);

} // namespace cqed
