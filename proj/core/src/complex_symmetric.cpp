// complex_symmetric.cpp - zgeev followed by transpose renormalization

#include "cqed/complex_symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <vector>

#include <lapacke.h>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

using cd = std::complex<double>;

cd tdot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return (a.transpose() * b)(0, 0);
}

// Rescale so v^T v = 1 using the principal square root.
void transpose_normalize(Eigen::Ref<Eigen::VectorXcd> v, cd lambda, double defect_tol) {
    const double n2 = v.squaredNorm();
    const cd vv = (v.transpose() * v)(0, 0);
    if (n2 == 0.0 || std::abs(vv) < defect_tol * n2)
    {
        std::ostringstream msg;
        msg << "eigenvector is nearly self-orthogonal under the transpose product (|v^T v|/|v|^2 = "
            << (n2 == 0.0 ? 0.0 : std::abs(vv) / n2) << ")";
        throw DefectiveMatrix(lambda, msg.str());
    }
    v /= std::sqrt(vv);
}

void fix_sign(Eigen::Ref<Eigen::VectorXcd> v) {
    Eigen::Index k = 0;
    v.cwiseAbs2().maxCoeff(&k);
    if (v(k).real() < 0.0) v = -v;
}

// Transpose Gram-Schmidt inside a cluster of (nearly) equal eigenvalues.
// Pivoting on |v^T v| keeps the normalization well conditioned; when every
// remaining vector is isotropic the pair with the largest cross product is
// combined, since (a + b)^T (a + b) = 2 a^T b.
void orthonormalize_cluster(Eigen::MatrixXcd& vecs, const std::vector<Eigen::Index>& cols,
                            cd lambda, double defect_tol) {
    std::vector<Eigen::VectorXcd> pool;
    pool.reserve(cols.size());
    for (auto c : cols) pool.emplace_back(vecs.col(c).normalized());

    std::vector<Eigen::VectorXcd> done;
    done.reserve(cols.size());
    while (!pool.empty()) {
        std::size_t best = 0;
        double best_ratio = -1.0;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            const double r = std::abs(tdot(pool[k], pool[k])) / pool[k].squaredNorm();
            if (r > best_ratio) best_ratio = r, best = k;
        }
        if (best_ratio < 1e-3 && pool.size() > 1) {
            std::size_t pa = 0, pb = 1;
            double cross = -1.0;
            for (std::size_t a = 0; a < pool.size(); ++a)
                for (std::size_t b = a + 1; b < pool.size(); ++b) {
                    const double r = std::abs(tdot(pool[a], pool[b])) / (pool[a].norm() * pool[b].norm());
                    if (r > cross) cross = r, pa = a, pb = b;
                }
            pool[pa] += pool[pb];
            best = pa;
        }
        Eigen::VectorXcd v = pool[best];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : done) v -= tdot(q, v) * q;
        transpose_normalize(v, lambda, defect_tol);
        for (auto& w : pool) {
            w -= tdot(v, w) * v;
            const double nw = w.norm();
            if (nw > 0.0) w /= nw;
        }
        done.push_back(std::move(v));
    }
    for (std::size_t k = 0; k < cols.size(); ++k) vecs.col(cols[k]) = done[k];
}

} // namespace

EigenSystem diag_complex_symmetric(const Eigen::MatrixXcd& h, int level, const EigenOptions& options) {
    if (h.rows() != h.cols()) throw Error("diag_complex_symmetric: matrix is not square");
    const Eigen::Index n = h.rows();
    EigenSystem out;
    out.level = level;
    if (n == 0) return out;

    Eigen::MatrixXcd a = h;
    Eigen::VectorXcd w(n);
    Eigen::MatrixXcd vr(n, n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n),
        reinterpret_cast<lapack_complex_double*>(a.data()), static_cast<lapack_int>(n),
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
        reinterpret_cast<lapack_complex_double*>(vr.data()), static_cast<lapack_int>(n));
    if (info != 0) throw Error("zgeev failed with info = " + std::to_string(info));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (w(x).real() != w(y).real()) return w(x).real() < w(y).real();
        return w(x).imag() < w(y).imag();
    });
    out.lambdas.resize(n);
    out.u.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.lambdas(k) = w(order[static_cast<std::size_t>(k)]);
        out.u.col(k) = vr.col(order[static_cast<std::size_t>(k)]);
    }

    // Clusters are connected components of the "closer than tol" relation.
    const double tol = options.degeneracy_rel * h.norm();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (out.lambdas(j).real() - out.lambdas(i).real() >= tol) break;
            if (std::abs(out.lambdas(j) - out.lambdas(i)) < tol) parent[find(j)] = find(i);
        }
    std::vector<std::vector<Eigen::Index>> clusters(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) clusters[find(i)].push_back(i);

    for (const auto& cl : clusters) {
        if (cl.empty()) continue;
        if (cl.size() == 1)
            transpose_normalize(out.u.col(cl.front()), out.lambdas(cl.front()), options.defect_tol);
        else
            orthonormalize_cluster(out.u, cl, out.lambdas(cl.front()), options.defect_tol);
    }
    for (Eigen::Index k = 0; k < n; ++k) fix_sign(out.u.col(k));
    return out;
}

double transpose_orthonormality_error(const EigenSystem& es) {
    const Eigen::Index n = es.u.cols();
    if (n == 0) return 0.0;
    return (es.u.transpose() * es.u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

double reconstruction_error(const EigenSystem& es, const Eigen::MatrixXcd& h) {
    const double hn = h.norm();
    if (hn == 0.0) return 0.0;
    return (es.u * es.lambdas.asDiagonal() * es.u.transpose() - h).norm() / hn;
}

} // namespace cqed
