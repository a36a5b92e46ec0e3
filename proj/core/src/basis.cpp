// basis.cpp - Basis enumeration and H_eff projection

#include "cqed/basis.hpp"

#include <cmath>
#include <numbers>

#include "cqed/errors.hpp"

namespace cqed {

std::size_t basis_dim(int level, std::size_t n) {
    switch (level) {
    case 0: return 1;
    case 1: return n + 1;
    case 2: return 1 + n + n * (n - (n > 0 ? 1 : 0)) / 2;
    default: throw UnsupportedLevel(level);
    }
}

ExcitationBasis build_basis(int level, std::size_t n) {
    if (level < 0 || level > 2) throw UnsupportedLevel(level);
    ExcitationBasis basis;
    basis.level = level;
    basis.emitters = n;
    basis.states.reserve(basis_dim(level, n));
    basis.states.push_back({level, {}});
    if (level >= 1)
        for (std::size_t i = 0; i < n; ++i) basis.states.push_back({level - 1, {static_cast<int>(i)}});
    if (level == 2)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                basis.states.push_back({0, {static_cast<int>(i), static_cast<int>(j)}});
    return basis;
}

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    if (i > j) std::swap(i, j);
    // pairs (i, *) preceding row i: sum_{k<i} (n-1-k)
    return 1 + n + i * (2 * n - i - 1) / 2 + (j - i - 1);
}

OperatorBlocks project_operators(const SystemParams& params, int max_level) {
    validate(params);
    if (max_level < 1 || max_level > 2) throw UnsupportedLevel(max_level);
    using cd = std::complex<double>;
    const std::size_t n = params.size();
    const std::size_t d1 = basis_dim(1, n), d2 = max_level == 2 ? basis_dim(2, n) : 0;
    const cd lc(params.omega_c, -0.5 * params.kappa());
    const double sqrt2 = std::numbers::sqrt2;

    OperatorBlocks b;
    b.h1 = Eigen::MatrixXcd::Zero(d1, d1);
    b.h2 = Eigen::MatrixXcd::Zero(d2, d2);
    b.a01 = Eigen::MatrixXd::Zero(1, d1);
    b.a12 = Eigen::MatrixXd::Zero(d1, d2);

    b.h1(0, 0) = lc;
    b.a01(0, 0) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = params.emitters[i];
        b.h1(1 + i, 1 + i) = cd(e.omega, -0.5 * e.gamma);
        b.h1(0, 1 + i) = b.h1(1 + i, 0) = e.g;
    }
    if (max_level == 1) return b;

    b.h2(0, 0) = 2.0 * lc;
    b.a12(0, 0) = sqrt2;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = params.emitters[i];
        const cd le(e.omega, -0.5 * e.gamma);
        b.h2(1 + i, 1 + i) = lc + le;
        b.h2(0, 1 + i) = b.h2(1 + i, 0) = sqrt2 * e.g;
        b.a12(1 + i, 1 + i) = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& ei = params.emitters[i];
            const auto& ej = params.emitters[j];
            const std::size_t k = pair_index(i, j, n);
            b.h2(k, k) = cd(ei.omega + ej.omega, -0.5 * (ei.gamma + ej.gamma));
            // |1,{i}> -> |0,{i,j}> absorbs the photon into emitter j
            b.h2(1 + i, k) = b.h2(k, 1 + i) = ej.g;
            b.h2(1 + j, k) = b.h2(k, 1 + j) = ei.g;
        }
    }
    return b;
}

} // namespace cqed
