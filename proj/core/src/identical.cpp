// identical.cpp - Dicke-reduced eigenproblems, large-N series and limits

#include "cqed/identical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cqed/complex_symmetric.hpp"
#include "cqed/errors.hpp"

namespace cqed {

using cd = std::complex<double>;

namespace {

void require_n(const IdenticalParams& p) {
    if (p.n < 1) throw InvalidParams("identical-emitter path needs N >= 1");
}

void require_coupling(const IdenticalParams& p) {
    if (!(p.g > 0.0)) throw InvalidParams("large-N expressions need g > 0");
}

template <class Vec>
void transpose_normalize(Vec& v) {
    v /= std::sqrt((v.transpose() * v)(0, 0));
    Eigen::Index k = 0;
    v.cwiseAbs2().maxCoeff(&k);
    if (v(k).real() < 0.0) v = -v;
}

// Null vector of the 2x2 symmetric matrix h - x.
Eigen::Vector2cd null_vector2(const Eigen::Matrix2cd& h, cd x) {
    Eigen::Vector2cd from_row0(h(0, 1), x - h(0, 0));
    Eigen::Vector2cd from_row1(x - h(1, 1), h(1, 0));
    Eigen::Vector2cd v = from_row0.norm() >= from_row1.norm() ? from_row0 : from_row1;
    transpose_normalize(v);
    return v;
}

// Null vector of the 3x3 matrix h - x from the unconjugated cross product of
// the two best-conditioned rows.
Eigen::Vector3cd null_vector3(const Eigen::Matrix3cd& h, cd x) {
    const Eigen::Matrix3cd r = h - x * Eigen::Matrix3cd::Identity();
    Eigen::Vector3cd best = Eigen::Vector3cd::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const Eigen::Vector3cd ra = r.row(a).transpose(), rb = r.row(b).transpose();
            Eigen::Vector3cd v(ra(1) * rb(2) - ra(2) * rb(1), ra(2) * rb(0) - ra(0) * rb(2),
                               ra(0) * rb(1) - ra(1) * rb(0));
            if (v.norm() > best.norm()) best = v;
        }
    transpose_normalize(best);
    return best;
}

Eigen::Matrix2cd single_block(const IdenticalParams& p) {
    const double gs = p.g * std::sqrt(static_cast<double>(p.n));
    Eigen::Matrix2cd h;
    h << p.lambda_c(), gs, gs, p.lambda_e();
    return h;
}

Eigen::Matrix3cd pair_block(const IdenticalParams& p) {
    const double n = static_cast<double>(p.n);
    const double g1 = p.g * std::sqrt(2.0 * n), g2 = p.g * std::sqrt(2.0 * (n - 1.0));
    const cd lc = p.lambda_c(), le = p.lambda_e();
    Eigen::Matrix3cd h;
    h << 2.0 * lc, g1, 0.0, g1, lc + le, g2, 0.0, g2, 2.0 * le;
    return h;
}

bool sorted_before(cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

} // namespace

SystemParams IdenticalParams::full() const {
    return identical_system(omega_c, kappa_b, kappa_c, omega_e, gamma, g, n);
}

IdenticalParams identical_from(const SystemParams& params) {
    const auto e = common_emitter(params);
    if (!e) throw InvalidParams("emitters are not identical (or the list is empty)");
    return {params.omega_c, params.kappa_b, params.kappa_c, e->omega, e->gamma, e->g, params.size()};
}

OperatorBlocks reduced_blocks(const IdenticalParams& p) {
    require_n(p);
    OperatorBlocks b;
    b.h1 = single_block(p);
    b.h2 = pair_block(p);
    b.a01 = Eigen::MatrixXd::Zero(1, 2);
    b.a01(0, 0) = 1.0;
    b.a12 = Eigen::MatrixXd::Zero(2, 3);
    b.a12(0, 0) = std::numbers::sqrt2;
    b.a12(1, 1) = 1.0;
    return b;
}

ScatteringModel reduced_model(const IdenticalParams& p, UnitTag unit) {
    const double k = p.kappa();
    if (!(k > 0.0)) throw InvalidParams("kappa_b + kappa_c must be positive");
    IdenticalParams scaled = p;
    scaled.omega_c /= k;
    scaled.kappa_b /= k;
    scaled.kappa_c /= k;
    scaled.omega_e /= k;
    scaled.gamma /= k;
    scaled.g /= k;
    SystemParams carrier;
    carrier.omega_c = p.omega_c;
    carrier.kappa_b = p.kappa_b;
    carrier.kappa_c = p.kappa_c;
    carrier.unit = unit;
    carrier.emitters.assign(p.n, Emitter{p.omega_e, p.gamma, p.g});
    return ScatteringModel(reduced_blocks(scaled), carrier);
}

BrightEigen1 bright_single_eigen(const IdenticalParams& p) {
    require_n(p);
    const Eigen::Matrix2cd h = single_block(p);
    const cd centre = 0.5 * (h(0, 0) + h(1, 1));
    const cd half = 0.5 * (h(0, 0) - h(1, 1));
    const cd root = std::sqrt(half * half + h(0, 1) * h(0, 1));
    cd lo = centre - root, hi = centre + root;
    if (sorted_before(hi, lo)) std::swap(lo, hi);
    BrightEigen1 out;
    out.lambda_minus = lo;
    out.lambda_plus = hi;
    out.coeffs_minus = null_vector2(h, lo);
    out.coeffs_plus = null_vector2(h, hi);
    out.subradiant_multiplicity = p.n - 1;
    out.subradiant_lambda = p.lambda_e();
    return out;
}

BrightEigen2 bright_two_eigen(const IdenticalParams& p) {
    require_n(p);
    BrightEigen2 out;
    const Eigen::Matrix3cd h = pair_block(p);
    // N = 1 has no doubly excited emitter state; its channel is dropped
    const Eigen::Index dim = p.n == 1 ? 2 : 3;
    const EigenSystem es = diag_complex_symmetric(h.topLeftCorner(dim, dim), 2);
    out.lambdas3 = es.lambdas;
    out.coeffs3 = es.u;

    const cd lc = p.lambda_c(), le = p.lambda_e();
    out.pair_multiplicity = p.n - 1;
    if (p.n == 2) {
        // the only pair state is symmetric, so the dark block keeps its photon channel
        out.pair_lambdas = Eigen::VectorXcd::Constant(1, lc + le);
    } else if (p.n >= 3) {
        const double gd = p.g * std::sqrt(static_cast<double>(p.n) - 2.0);
        Eigen::MatrixXcd d(2, 2);
        d << lc + le, gd, gd, 2.0 * le;
        out.pair_lambdas = diag_complex_symmetric(d, 2).lambdas;
    }
    out.deep_subradiant_multiplicity = p.n >= 3 ? p.n * (p.n - 3) / 2 : 0;
    out.deep_subradiant_lambda = 2.0 * le;
    return out;
}

std::vector<cd> predicted_single_spectrum(const IdenticalParams& p) {
    const BrightEigen1 b = bright_single_eigen(p);
    std::vector<cd> out{b.lambda_minus, b.lambda_plus};
    out.insert(out.end(), b.subradiant_multiplicity, b.subradiant_lambda);
    std::sort(out.begin(), out.end(), sorted_before);
    return out;
}

std::vector<cd> predicted_pair_spectrum(const IdenticalParams& p) {
    const BrightEigen2 b = bright_two_eigen(p);
    std::vector<cd> out(b.lambdas3.begin(), b.lambdas3.end());
    for (const cd& l : b.pair_lambdas) out.insert(out.end(), b.pair_multiplicity, l);
    out.insert(out.end(), b.deep_subradiant_multiplicity, b.deep_subradiant_lambda);
    std::sort(out.begin(), out.end(), sorted_before);
    return out;
}

AsymptoticEigen asymptotic_eigen(const IdenticalParams& p, int order) {
    require_n(p);
    require_coupling(p);
    const double n = static_cast<double>(p.n);
    const double g = p.g;
    const cd d = p.big_delta();
    const cd d2 = d * d;
    const cd e = d2 - 2.0 * g * g;
    auto keep = [order](double q) { return 2.0 * q <= static_cast<double>(order); };

    AsymptoticEigen a;
    a.big_delta = d;
    a.mu_plus = g;
    if (keep(1)) a.mu_plus += d2 / (8.0 * g * n);
    if (keep(2)) a.mu_plus -= d2 * d2 / (128.0 * g * g * g * n * n);
    a.mu_minus = -a.mu_plus;

    cd sym = 2.0 * g, common = 0.0;
    if (keep(1)) sym += e / (4.0 * g * n);
    if (keep(1.5)) common -= d / (4.0 * n * std::sqrt(n));
    if (keep(2)) sym -= e * e / (64.0 * g * g * g * n * n);
    a.nu_plus = sym + common;
    a.nu_minus = -sym + common;
    a.nu_zero = 0.0;
    if (keep(1.5)) a.nu_zero += d / (2.0 * n * std::sqrt(n));
    if (keep(2.5)) a.nu_zero += d * (2.0 * g * g - d2) / (8.0 * g * g) * std::pow(n, -2.5);

    const double rn = std::sqrt(n);
    const cd lc = p.lambda_c(), le = p.lambda_e();
    a.lambda1_plus = 0.5 * (lc + le) + rn * a.mu_plus;
    a.lambda1_minus = 0.5 * (lc + le) + rn * a.mu_minus;
    a.lambda2_plus = lc + le + rn * a.nu_plus;
    a.lambda2_zero = lc + le + rn * a.nu_zero;
    a.lambda2_minus = lc + le + rn * a.nu_minus;

    const Eigen::Matrix2cd h1 = single_block(p);
    a.coeffs1_plus = null_vector2(h1, a.lambda1_plus);
    a.coeffs1_minus = null_vector2(h1, a.lambda1_minus);
    const Eigen::Matrix3cd h2 = pair_block(p);
    a.coeffs2_plus = null_vector3(h2, a.lambda2_plus);
    a.coeffs2_zero = null_vector3(h2, a.lambda2_zero);
    a.coeffs2_minus = null_vector3(h2, a.lambda2_minus);
    return a;
}

double limit_transmission(const IdenticalParams& p, double omega_L) {
    require_coupling(p);
    const double g2 = p.g * p.g;
    return p.kappa_b * p.kappa_c * std::norm(omega_L - p.lambda_e()) / (g2 * g2);
}

double limit_g2(const IdenticalParams& p, double omega_L) {
    const cd le = p.lambda_e(), lc = p.lambda_c();
    return std::norm(1.0 + p.g * p.g / ((omega_L - le) * (2.0 * omega_L - le - lc)));
}

namespace {

// Greedy nearest-neighbour matching of two equally sized multisets; returns
// the largest matched distance and the unmatched offenders beyond tol.
double match_multisets(const std::vector<cd>& predicted, const Eigen::VectorXcd& full, double tol,
                       std::vector<cd>& offenders) {
    std::vector<bool> used(static_cast<std::size_t>(full.size()), false);
    double worst = 0.0;
    for (const cd& l : predicted) {
        std::size_t best = used.size();
        double dist = 0.0;
        for (std::size_t k = 0; k < used.size(); ++k) {
            if (used[k]) continue;
            const double dk = std::abs(full(static_cast<Eigen::Index>(k)) - l);
            if (best == used.size() || dk < dist) best = k, dist = dk;
        }
        if (best == used.size()) {
            offenders.push_back(l);
            worst = std::numeric_limits<double>::infinity();
            continue;
        }
        used[best] = true;
        worst = std::max(worst, dist);
        if (dist > tol) offenders.push_back(l);
    }
    return worst;
}

std::size_t count_near(const Eigen::VectorXcd& v, cd x, double tol) {
    std::size_t c = 0;
    for (const cd& l : v)
        if (std::abs(l - x) < tol) ++c;
    return c;
}

} // namespace

FastPathReport fastpath_equivalence(const IdenticalParams& p, double tol) {
    require_n(p);
    if (p.n > 8) throw InvalidParams("fastpath_equivalence supports N <= 8");
    const OperatorBlocks full = project_operators(p.full());
    const EigenSystem es1 = diag_complex_symmetric(full.h1, 1);
    const EigenSystem es2 = diag_complex_symmetric(full.h2, 2);
    const auto pred1 = predicted_single_spectrum(p);
    const auto pred2 = predicted_pair_spectrum(p);

    FastPathReport r;
    r.n = p.n;
    std::vector<cd> offenders;
    if (pred1.size() != static_cast<std::size_t>(es1.lambdas.size()) ||
        pred2.size() != static_cast<std::size_t>(es2.lambdas.size()))
        throw FastPathMismatch("reduced multiplicities do not add up to the subspace dimensions");
    r.max_deviation_single = match_multisets(pred1, es1.lambdas, tol, offenders);
    r.max_deviation_pair = match_multisets(pred2, es2.lambdas, tol, offenders);
    r.subradiant_found = count_near(es1.lambdas, p.lambda_e(), tol);
    r.deep_subradiant_found = count_near(es2.lambdas, 2.0 * p.lambda_e(), tol);
    if (!offenders.empty()) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "fast path disagrees with the full spectrum at N = " << p.n << ":";
        for (const cd& l : offenders) msg << " (" << l.real() << ", " << l.imag() << ")";
        throw FastPathMismatch(msg.str());
    }
    return r;
}

std::size_t dicke_multiplicity(std::size_t n, std::size_t i) {
    if (2 * i > n) return 0;
    auto binom = [](std::size_t a, std::size_t b) {
        if (b > a) return std::size_t{0};
        b = std::min(b, a - b);
        std::size_t r = 1;
        for (std::size_t k = 1; k <= b; ++k) r = r * (a - b + k) / k;
        return r;
    };
    return binom(n, i) - (i == 0 ? 0 : binom(n, i - 1));
}

} // namespace cqed
