#pragma once

// Dense linear-algebra helpers shared by the whole library. Everything is
// backed by Eigen; matrices are complex double throughout.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <complex>
#include <stdexcept>

namespace diracbloch {

using Complex = std::complex<double>;

/// Largest singular value (matrix operator norm on C^n).
inline double operator_norm(const Eigen::MatrixXcd& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

/// Smallest singular value. Small matrices go through a full Jacobi SVD;
/// larger ones through the smallest eigenvalue of A^H A, which is accurate
/// to ~eps*sigma_max^2/sigma_min and much faster at fiber-matrix sizes.
inline double min_singular_value(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("min_singular_value: square matrix expected");
  if (a.rows() == 0) return 0.0;
  if (a.rows() <= 256) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
  }
  Eigen::MatrixXcd ata = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ata, Eigen::EigenvaluesOnly);
  double lam = es.eigenvalues()(0);
  return lam > 0.0 ? std::sqrt(lam) : 0.0;
}

/// All singular values in descending order (full SVD, use at small sizes).
inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues();
}

inline double hermiticity_residual(const Eigen::MatrixXcd& a) {
  return (a - a.adjoint()).norm();
}

/// Eigenvalues of a Hermitian matrix, ascending. Rejects non-Hermitian input.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a,
                                             double tol = 1e-10) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigenvalues: square matrix expected");
  double scale = a.norm();
  if (hermiticity_residual(a) > tol * std::max(1.0, scale))
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// C^2 ramp: 0 at s<=0, 1 at s>=1, quintic 6s^5-15s^4+10s^3 in between.
inline double smoothstep5(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return ((6.0 * s - 15.0) * s + 10.0) * s * s * s;
}

/// Derivative of smoothstep5.
inline double smoothstep5_deriv(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return ((30.0 * s - 60.0) * s + 30.0) * s * s;
}

}  // namespace diracbloch
