// scattering.hpp - Transmission, g2(0), g2(tau) and anharmonicity from H_eff eigensystems

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cqed/basis.hpp"
#include "cqed/complex_symmetric.hpp"
#include "cqed/params.hpp"

namespace cqed {

inline constexpr double kBrightTol = 1e-10;
inline constexpr double kTransmissionFloor = 1e-14;

struct Spectrum {
    std::vector<double> omega_grid;
    std::vector<double> t;
    std::vector<double> g2zero;
};

struct DipContribution {
    std::size_t index{0}; // position in the sorted two-excitation spectrum
    std::complex<double> gamma;
    double magnitude{0.0};
    double phase{0.0};
};

struct G2Zero {
    double value{0.0};
    std::vector<DipContribution> contributions; // bright two-excitation states only
};

// Disconnected (g) and connected (f) weight vectors over single-excitation
// eigenstates, in normalized units.
struct G2Components {
    Eigen::VectorXcd disconnected_weights;
    Eigen::VectorXcd connected_weights;
    Eigen::VectorXcd lambdas1;
    double omega_L{0.0};
    double prefactor{0.0}; // kappa_b kappa_c / T
};

struct G2Trace {
    double omega_L{0.0};
    std::vector<double> taus;
    std::vector<double> g2;
};

struct AnharmonicityReport {
    double delta_omega_12{0.0};
    double delta_omega_2{0.0};
    std::size_t single_index{0};
    std::size_t pair_index{0};
};

// Evaluates the spectral formulas for one system. Frequencies and delays at the
// public interface use the parameters' source units; eigensystems are stored in
// kappa-normalized units. Eigendecompositions are computed lazily and shared
// between copies, so a model can be queried from many threads.
class ScatteringModel {
public:
    explicit ScatteringModel(const SystemParams& params);

    // Model built from precomputed blocks, e.g. a symmetry-reduced problem.
    // The blocks must already be expressed in kappa-normalized units.
    ScatteringModel(OperatorBlocks blocks, const SystemParams& params);

    const SystemParams& params() const noexcept;
    double frequency_scale() const noexcept;
    double time_scale() const noexcept;

    const EigenSystem& single() const;
    const EigenSystem& pair() const;

    double transmission(double omega_L) const;
    G2Zero g2_zero(double omega_L) const;
    double g2_zero_kernel(double omega_L) const;
    G2Components components(double omega_L) const;
    G2Trace g2_tau(double omega_L, const std::vector<double>& taus) const;
    AnharmonicityReport anharmonicity() const;

    // Parallel sweep; threads = 0 picks the library default.
    Spectrum spectrum(const std::vector<double>& omega_grid, std::size_t threads = 0) const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

// Convenience wrappers backed by a small internally synchronized model cache.
double transmission(const SystemParams& params, double omega_L);
G2Zero g2_zero(const SystemParams& params, double omega_L);
G2Trace g2_tau(const SystemParams& params, double omega_L, const std::vector<double>& taus);
AnharmonicityReport anharmonicity(const SystemParams& params);

// Fixed-delay settling time: the first grid delay after which |g2 - 1| < tol
// holds for the rest of the trace. Returns the last delay if never settled.
double settling_time(const G2Trace& trace, double tol = 0.05);

// Uniform grid helper: n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace cqed
