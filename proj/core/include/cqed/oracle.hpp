// oracle.hpp - Weak-drive Lindblad master-equation reference for T, g2(0) and g2(tau)

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cqed/params.hpp"
#include "cqed/scattering.hpp"

namespace cqed {

// Coherent drive of the input port. Frequencies in the params' source unit.
struct DriveConfig {
    double beta0{0.0}; // input amplitude, Omega = sqrt(kappa_b) * beta0
    double omega_L{0.0};
    int n_max{6};      // cavity Fock cutoff

    double drive_strength(const SystemParams& params) const;
    // Drive with a given Omega, expressed as a fraction of kappa.
    static DriveConfig weak(const SystemParams& params, double omega_L, double omega_over_kappa = 1e-3,
                            int n_max = 6);
};

struct OracleOptions {
    bool check_convergence{true};
    double convergence_tol{5e-3}; // relative change allowed at Omega/2 and n_max + 2
    std::size_t max_emitters{4};
};

struct OracleObservables {
    double transmission{0.0};
    double g2zero{0.0};
    double photons{0.0}; // <a^dag a>
    double drive_change{0.0}; // largest relative change when halving Omega
    double fock_change{0.0};  // largest relative change at n_max + 2
};

struct SteadyState {
    Eigen::MatrixXcd rho; // basis index = n * 2^N + emitter bits
    std::size_t fock_dim{0};
    std::size_t emitters{0};
};

// Steady state of the driven open system; no convergence checks.
SteadyState solve_steady_state(const SystemParams& params, const DriveConfig& drive);

OracleObservables steady_state_observables(const SystemParams& params, const DriveConfig& drive,
                                           const OracleOptions& options = {});

// Normalized two-time correlation by quantum regression; delays in the
// source time unit.
G2Trace g2_tau_regression(const SystemParams& params, const DriveConfig& drive,
                          const std::vector<double>& taus, const OracleOptions& options = {});

struct DensityDiagnostics {
    double trace_error{0.0};
    double hermiticity_error{0.0};
    double min_eigenvalue{0.0};
};

DensityDiagnostics density_diagnostics(const Eigen::MatrixXcd& rho);

} // namespace cqed
