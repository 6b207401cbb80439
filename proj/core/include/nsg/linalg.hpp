#pragma once

#include <Eigen/Core>

namespace nsg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws ValidationError unless `m` is square and symmetric to `rel_tol`
/// relative to its largest entry.
void require_symmetric(const Matrix& m, double rel_tol = 1e-14);

/// exp(M) for symmetric M via eigendecomposition.
Matrix sym_exp(const Matrix& m);

/// log(M) for symmetric positive definite M; eigenvalues are floored at
/// 1e-300 before the logarithm.
Matrix sym_log(const Matrix& m);

/// Largest eigenvalue of a symmetric matrix.
double lambda_max(const Matrix& m);

/// tr exp(M) for symmetric M.
double trace_exp(const Matrix& m);

}  // namespace nsg
