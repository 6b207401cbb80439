#include "nsg/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "nsg/errors.hpp"

namespace nsg {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> decompose(const Matrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DomainError("symmetric eigendecomposition failed");
  return solver;
}

}  // namespace

void require_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) throw ValidationError("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > rel_tol * scale)
    throw ValidationError("matrix is not symmetric");
}

Matrix sym_exp(const Matrix& m) {
  const auto solver = decompose(m, true);
  const Vector values = solver.eigenvalues().array().exp();
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
}

Matrix sym_log(const Matrix& m) {
  const auto solver = decompose(m, true);
  const Vector values = solver.eigenvalues().array().max(1e-300).log();
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
}

double lambda_max(const Matrix& m) {
  if (m.size() == 0) throw ValidationError("empty matrix");
  return decompose(m, false).eigenvalues().maxCoeff();
}

double trace_exp(const Matrix& m) {
  return decompose(m, false).eigenvalues().array().exp().sum();
}

}  // namespace nsg
