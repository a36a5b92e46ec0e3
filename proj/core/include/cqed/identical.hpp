// identical.hpp - Collective (Dicke) reduction for identical emitters and N -> infinity limits

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cqed/basis.hpp"
#include "cqed/params.hpp"
#include "cqed/scattering.hpp"

namespace cqed {

// Parameters of N identical emitters. Values are taken as given (no unit
// normalization), so results are in the same units.
struct IdenticalParams {
    double omega_c{0.0};
    double kappa_b{0.5};
    double kappa_c{0.5};
    double omega_e{0.0};
    double gamma{0.0};
    double g{0.0};
    std::size_t n{1};

    double kappa() const noexcept { return kappa_b + kappa_c; }
    std::complex<double> lambda_c() const noexcept { return {omega_c, -0.5 * kappa()}; }
    std::complex<double> lambda_e() const noexcept { return {omega_e, -0.5 * gamma}; }
    // lambda_e - lambda_c
    std::complex<double> big_delta() const noexcept { return lambda_e() - lambda_c(); }

    SystemParams full() const;
};

IdenticalParams identical_from(const SystemParams& params); // throws if emitters differ

struct BrightEigen1 {
    std::complex<double> lambda_minus, lambda_plus;
    // (A, B): cavity and symmetric-emitter amplitudes, A^2 + B^2 = 1
    Eigen::Vector2cd coeffs_minus, coeffs_plus;
    std::size_t subradiant_multiplicity{0};
    std::complex<double> subradiant_lambda;
};

struct BrightEigen2 {
    // Bright block in the basis (2 photons, 1 photon + symmetric single
    // excitation, symmetric double excitation). Two entries when N = 1.
    Eigen::VectorXcd lambdas3;
    Eigen::MatrixXcd coeffs3; // columns (A, B, C), transpose-normalized
    // Dark-pair block: one photon + non-symmetric single excitation mixed with
    // the matching double excitation. Each value has pair_multiplicity copies.
    Eigen::VectorXcd pair_lambdas;
    std::size_t pair_multiplicity{0};
    std::size_t deep_subradiant_multiplicity{0};
    std::complex<double> deep_subradiant_lambda;
};

struct AsymptoticEigen {
    std::complex<double> big_delta;
    std::complex<double> mu_plus, mu_minus;
    std::complex<double> nu_plus, nu_zero, nu_minus;
    std::complex<double> lambda1_plus, lambda1_minus;
    std::complex<double> lambda2_plus, lambda2_zero, lambda2_minus;
    Eigen::Vector2cd coeffs1_plus, coeffs1_minus;               // (A, B)
    Eigen::Vector3cd coeffs2_plus, coeffs2_zero, coeffs2_minus; // (A, B, C)
};

inline constexpr int kMaxAsymptoticOrder = 5;

// Reduced blocks: 2x2 single-excitation and 3x3 two-excitation problems.
OperatorBlocks reduced_blocks(const IdenticalParams& p);

// Scattering model over the reduced blocks; exact for T, g2(0) and g2(tau).
// `unit` only sets how g2_tau interprets delays.
ScatteringModel reduced_model(const IdenticalParams& p, UnitTag unit = UnitTag::kappa_units);

BrightEigen1 bright_single_eigen(const IdenticalParams& p);
BrightEigen2 bright_two_eigen(const IdenticalParams& p);

// Full eigenvalue multisets predicted by the reduction.
std::vector<std::complex<double>> predicted_single_spectrum(const IdenticalParams& p);
std::vector<std::complex<double>> predicted_pair_spectrum(const IdenticalParams& p);

// Large-N series. `order` counts half powers of 1/N: a term proportional to
// N^-q is kept when 2q <= order; kMaxAsymptoticOrder keeps every known term.
AsymptoticEigen asymptotic_eigen(const IdenticalParams& p, int order = kMaxAsymptoticOrder);

// lim N^2 T(omega_L) as N -> infinity.
double limit_transmission(const IdenticalParams& p, double omega_L);
// lim g2(0; omega_L) as N -> infinity.
double limit_g2(const IdenticalParams& p, double omega_L);

struct FastPathReport {
    std::size_t n{0};
    double max_deviation_single{0.0};
    double max_deviation_pair{0.0};
    std::size_t subradiant_found{0};      // full-spectrum copies of lambda_e
    std::size_t deep_subradiant_found{0}; // full-spectrum copies of 2 lambda_e
};

// Compares the reduction against the full diagonalization (N <= 8). Throws
// FastPathMismatch when the multisets differ by more than tol.
FastPathReport fastpath_equivalence(const IdenticalParams& p, double tol = 1e-9);

// Clebsch-Gordan multiplicity of total-spin sector N/2 - i.
std::size_t dicke_multiplicity(std::size_t n, std::size_t i);

} // namespace cqed
