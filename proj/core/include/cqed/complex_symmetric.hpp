// complex_symmetric.hpp - Transpose-orthonormal eigendecomposition of complex symmetric matrices

#pragma once

#include <Eigen/Dense>

namespace cqed {

// h = u * diag(lambdas) * u^T with u^T u = I (bilinear product, no conjugation).
struct EigenSystem {
    Eigen::VectorXcd lambdas;
    Eigen::MatrixXcd u;
    int level{-1};
};

struct EigenOptions {
    double degeneracy_rel{1e-8}; // clusters: |l_i - l_j| < degeneracy_rel * ||h||_F
    // |v^T v| / ||v||^2 below this is treated as defective; roundoff in u^T u
    // grows like eps / ratio, so this keeps u^T u = I to about 1e-10
    double defect_tol{1e-6};
};

// Eigenvalues sorted by real part, then imaginary part. Throws DefectiveMatrix
// when an eigenvector cannot be transpose-normalized.
EigenSystem diag_complex_symmetric(const Eigen::MatrixXcd& h, int level = -1,
                                   const EigenOptions& options = {});

// Diagnostics used by tests and the bench harness.
double transpose_orthonormality_error(const EigenSystem& es);
double reconstruction_error(const EigenSystem& es, const Eigen::MatrixXcd& h);

} // namespace cqed
