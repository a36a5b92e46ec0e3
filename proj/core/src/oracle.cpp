// oracle.cpp - Truncated-Fock Lindblad solver in the frame rotating at omega_L

#include "cqed/oracle.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>

#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "cqed/errors.hpp"

namespace cqed {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;

double DriveConfig::drive_strength(const SystemParams& params) const {
    return std::sqrt(params.kappa_b) * beta0;
}

DriveConfig DriveConfig::weak(const SystemParams& params, double omega_L, double omega_over_kappa, int n_max) {
    DriveConfig d;
    d.omega_L = omega_L;
    d.n_max = n_max;
    if (!(params.kappa_b > 0.0)) throw InvalidParams("a driven input port needs kappa_b > 0");
    d.beta0 = omega_over_kappa * params.kappa() / std::sqrt(params.kappa_b);
    return d;
}

namespace {

struct Model {
    std::size_t fock{0}, emitters{0}, dim{0};
    double omega{0.0}; // normalized drive strength
    double kb{0.0}, kc{0.0};
    SpMat a;
    SpMat liouvillian;
    std::vector<int> excitations; // per basis state
};

SpMat identity(std::size_t d) {
    SpMat id(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    id.setIdentity();
    return id;
}

void check_inputs(const SystemParams& params, const DriveConfig& drive, const OracleOptions& options) {
    validate(params);
    if (params.size() > options.max_emitters)
        throw InvalidParams("oracle limited to N <= " + std::to_string(options.max_emitters) + " emitters");
    if (drive.n_max < 4) throw InvalidParams("oracle needs n_max >= 4");
    const double omega = drive.drive_strength(params);
    if (!(omega > 0.0) || omega > 1e-2 * params.kappa())
        throw InvalidParams("drive strength must satisfy 0 < Omega <= 1e-2 kappa");
}

Model build(const SystemParams& raw, const DriveConfig& drive) {
    const SystemParams p = normalized(raw);
    const double s = frequency_scale(raw);
    const double wl = drive.omega_L * s;

    Model m;
    m.fock = static_cast<std::size_t>(drive.n_max) + 1;
    m.emitters = p.size();
    const std::size_t spins = std::size_t{1} << m.emitters;
    m.dim = m.fock * spins;
    m.omega = drive.drive_strength(raw) * s;
    m.kb = p.kappa_b;
    m.kc = p.kappa_c;
    const auto d = static_cast<Eigen::Index>(m.dim);

    auto index = [spins](std::size_t n, std::size_t bits) { return static_cast<Eigen::Index>(n * spins + bits); };

    std::vector<Eigen::Triplet<cd>> ta;
    for (std::size_t n = 1; n < m.fock; ++n)
        for (std::size_t b = 0; b < spins; ++b) ta.emplace_back(index(n - 1, b), index(n, b), std::sqrt(double(n)));
    m.a.resize(d, d);
    m.a.setFromTriplets(ta.begin(), ta.end());

    std::vector<SpMat> sigma(m.emitters);
    for (std::size_t i = 0; i < m.emitters; ++i) {
        std::vector<Eigen::Triplet<cd>> ts;
        for (std::size_t n = 0; n < m.fock; ++n)
            for (std::size_t b = 0; b < spins; ++b)
                if (b >> i & 1u) ts.emplace_back(index(n, b & ~(std::size_t{1} << i)), index(n, b), 1.0);
        sigma[i].resize(d, d);
        sigma[i].setFromTriplets(ts.begin(), ts.end());
    }

    const SpMat ad = m.a.adjoint();
    SpMat h = (p.omega_c - wl) * (ad * m.a) + cd(m.omega) * (m.a + ad);
    std::vector<SpMat> jumps{std::sqrt(p.kappa()) * m.a};
    for (std::size_t i = 0; i < m.emitters; ++i) {
        const auto& e = p.emitters[i];
        const SpMat sd = sigma[i].adjoint();
        h += (e.omega - wl) * (sd * sigma[i]) + cd(e.g) * (m.a * sd + sigma[i] * ad);
        jumps.push_back(std::sqrt(e.gamma) * sigma[i]);
    }

    // column-stacking vec: vec(A X B) = (B^T kron A) vec(X)
    const SpMat id = identity(m.dim);
    const SpMat ht = h.transpose();
    SpMat l = cd(0.0, -1.0) * (SpMat(Eigen::kroneckerProduct(id, h)) - SpMat(Eigen::kroneckerProduct(ht, id)));
    for (const SpMat& c : jumps) {
        const SpMat cdc = c.adjoint() * c;
        const SpMat cdct = cdc.transpose();
        l += SpMat(Eigen::kroneckerProduct(SpMat(c.conjugate()), c)) -
             0.5 * SpMat(Eigen::kroneckerProduct(id, cdc)) - 0.5 * SpMat(Eigen::kroneckerProduct(cdct, id));
    }
    l.makeCompressed();
    m.liouvillian = std::move(l);

    m.excitations.resize(m.dim);
    for (std::size_t n = 0; n < m.fock; ++n)
        for (std::size_t b = 0; b < spins; ++b)
            m.excitations[n * spins + b] = static_cast<int>(n) + std::popcount(b);
    return m;
}

// Solves L x = 0 with the trace row. Unknowns are rescaled by
// Omega^(m_i + m_j), the weak-drive size of rho_ij, which keeps the
// multi-excitation populations well above roundoff.
Eigen::MatrixXcd steady_state(const Model& m) {
    const std::size_t d = m.dim;
    const auto n2 = static_cast<Eigen::Index>(d * d);
    std::vector<double> scale(d * d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
            scale[i + j * d] = std::pow(m.omega, m.excitations[i] + m.excitations[j]);

    std::vector<Eigen::Triplet<cd>> t;
    t.reserve(static_cast<std::size_t>(m.liouvillian.nonZeros()) + d);
    for (Eigen::Index col = 0; col < m.liouvillian.outerSize(); ++col)
        for (SpMat::InnerIterator it(m.liouvillian, col); it; ++it)
            if (it.row() != 0)
                t.emplace_back(it.row(), col, it.value() * scale[col] / scale[it.row()]);
    for (std::size_t k = 0; k < d; ++k) {
        const auto col = static_cast<Eigen::Index>(k * (d + 1));
        t.emplace_back(0, col, scale[col]);
    }
    SpMat a(n2, n2);
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw ConvergenceError("oracle: steady-state factorization failed");
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n2);
    rhs(0) = 1.0;
    Eigen::VectorXcd y = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw ConvergenceError("oracle: steady-state solve failed");
    for (Eigen::Index k = 0; k < n2; ++k) y(k) *= scale[static_cast<std::size_t>(k)];
    return Eigen::Map<Eigen::MatrixXcd>(y.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

std::vector<double> photon_numbers(const Model& m) {
    std::vector<double> n(m.dim);
    const std::size_t spins = m.dim / m.fock;
    for (std::size_t k = 0; k < m.dim; ++k) n[k] = static_cast<double>(k / spins);
    return n;
}

OracleObservables observe(const Model& m, const Eigen::MatrixXcd& rho) {
    const auto n = photon_numbers(m);
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t k = 0; k < m.dim; ++k) {
        const double p = rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
        n1 += n[k] * p;
        n2 += n[k] * (n[k] - 1.0) * p;
    }
    OracleObservables o;
    o.photons = n1;
    o.transmission = m.kb * m.kc * n1 / (m.omega * m.omega);
    o.g2zero = n2 / (n1 * n1);
    return o;
}

OracleObservables solve_observables(const SystemParams& params, const DriveConfig& drive) {
    const Model m = build(params, drive);
    return observe(m, steady_state(m));
}

double rel_change(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), 1e-300);
}

} // namespace

SteadyState solve_steady_state(const SystemParams& params, const DriveConfig& drive) {
    check_inputs(params, drive, OracleOptions{.check_convergence = false, .max_emitters = 4});
    const Model m = build(params, drive);
    return {steady_state(m), m.fock, m.emitters};
}

OracleObservables steady_state_observables(const SystemParams& params, const DriveConfig& drive,
                                           const OracleOptions& options) {
    check_inputs(params, drive, options);
    OracleObservables base = solve_observables(params, drive);
    if (!options.check_convergence) return base;

    DriveConfig half = drive;
    half.beta0 *= 0.5;
    DriveConfig deeper = drive;
    deeper.n_max += 2;
    const OracleObservables h = solve_observables(params, half);
    const OracleObservables f = solve_observables(params, deeper);
    base.drive_change = std::max(rel_change(base.transmission, h.transmission), rel_change(base.g2zero, h.g2zero));
    base.fock_change = std::max(rel_change(base.transmission, f.transmission), rel_change(base.g2zero, f.g2zero));
    if (base.drive_change > options.convergence_tol || base.fock_change > options.convergence_tol) {
        std::ostringstream msg;
        msg << "oracle not converged at omega_L = " << drive.omega_L << ": relative change " << base.drive_change
            << " at Omega/2, " << base.fock_change << " at n_max + 2 (tolerance " << options.convergence_tol
            << "); refine the drive strength or the Fock cutoff";
        throw ConvergenceError(msg.str());
    }
    return base;
}

G2Trace g2_tau_regression(const SystemParams& params, const DriveConfig& drive, const std::vector<double>& taus,
                          const OracleOptions& options) {
    const OracleObservables ss = steady_state_observables(params, drive, options);
    const Model m = build(params, drive);
    const Eigen::MatrixXcd rho = steady_state(m);
    const Eigen::MatrixXcd a = Eigen::MatrixXcd(m.a);
    Eigen::MatrixXcd r0 = a * rho * a.adjoint();
    r0 /= r0.trace();

    const Eigen::MatrixXcd l = Eigen::MatrixXcd(m.liouvillian);
    const auto n = photon_numbers(m);
    const std::size_t d = m.dim;
    auto readout = [&](const Eigen::VectorXcd& v) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) acc += n[k] * v(static_cast<Eigen::Index>(k * (d + 1))).real();
        return acc / ss.photons;
    };

    const double tscale = time_scale(params);
    std::map<double, Eigen::MatrixXcd> propagators;
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(r0.data(), r0.size());
    G2Trace out;
    out.omega_L = drive.omega_L;
    out.taus = taus;
    double now = 0.0;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (taus[k] < now || taus[k] < 0.0)
            throw InvalidParams("g2_tau_regression: delays must be nonnegative and ascending");
        const double step = taus[k] - now;
        if (step > 0.0) {
            // steps on a uniform grid agree to a few ulps; key on a rounded value
            const double key = std::round(step * tscale * 1e9) / 1e9;
            auto it = propagators.find(key);
            if (it == propagators.end())
                it = propagators.emplace(key, Eigen::MatrixXcd((l * (step * tscale)).exp())).first;
            v = it->second * v;
            now = taus[k];
        }
        out.g2.push_back(readout(v));
    }
    return out;
}

DensityDiagnostics density_diagnostics(const Eigen::MatrixXcd& rho) {
    DensityDiagnostics d;
    d.trace_error = std::abs(rho.trace() - 1.0);
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    d.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    return d;
}

} // namespace cqed
