#pragma once

// Dirac matrices alpha_1..alpha_d, beta, the commutant classes S^(s)_M, and
// the half-spin projection pairs P^+-_et built from an orthonormal pair
// (e, et).
//
// d = 3 reproduces the standard realization with Pauli blocks,
//   alpha_j = [[0, sigma_j], [sigma_j, 0]],  beta = diag(I, -I),
// and d = 2 identifies (alpha_1, alpha_2, beta) with (sigma_1, sigma_2,
// sigma_3). Other dimensions use the tensor-product chain over Pauli
// matrices with M = 2^ceil(d/2).

#include "diracbloch/linalg.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace diracbloch {

inline Eigen::Matrix2cd pauli(int j) {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  const Complex i(0.0, 1.0);
  switch (j) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index must be 1, 2, or 3");
  }
  return s;
}

class CliffordSystem {
 public:
  static CliffordSystem build(int d) {
    if (d < 2) throw std::invalid_argument("CliffordSystem: d must be >= 2");
    CliffordSystem sys;
    sys.dim_ = d;
    if (d % 2 == 0) {
      sys.alphas_ = even_chain(d);
      sys.size_ = static_cast<int>(sys.alphas_[0].rows());
      // chirality: (-i)^{d/2} alpha_1 ... alpha_d is Hermitian, squares to I,
      // and anticommutes with every alpha_j
      Eigen::MatrixXcd chi = Eigen::MatrixXcd::Identity(sys.size_, sys.size_);
      for (auto& a : sys.alphas_) chi = chi * a;
      Complex phase = std::pow(Complex(0.0, -1.0), d / 2);
      sys.beta_ = phase * chi;
    } else {
      // odd d: double an anticommuting family of size 2^((d-1)/2) into
      // off-diagonal blocks, freeing diag(I, -I) as beta
      std::vector<Eigen::MatrixXcd> small = even_chain(d - 1);
      Eigen::MatrixXcd chi = Eigen::MatrixXcd::Identity(small[0].rows(), small[0].cols());
      for (auto& a : small) chi = chi * a;
      chi = std::pow(Complex(0.0, -1.0), (d - 1) / 2) * chi;
      small.push_back(chi);
      const int m = static_cast<int>(small[0].rows());
      sys.size_ = 2 * m;
      for (auto& a : small) {
        Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
        big.topRightCorner(m, m) = a;
        big.bottomLeftCorner(m, m) = a;
        sys.alphas_.push_back(big);
      }
      Eigen::MatrixXcd beta = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
      beta.topLeftCorner(m, m) = Eigen::MatrixXcd::Identity(m, m);
      beta.bottomRightCorner(m, m) = -Eigen::MatrixXcd::Identity(m, m);
      sys.beta_ = beta;
    }
    return sys;
  }

  int dim() const { return dim_; }
  int size() const { return size_; }
  const Eigen::MatrixXcd& alpha(int j) const { return alphas_.at(static_cast<std::size_t>(j)); }
  const std::vector<Eigen::MatrixXcd>& alphas() const { return alphas_; }
  const Eigen::MatrixXcd& beta() const { return beta_; }

  /// sum_j p_j alpha_j for a real or complex coefficient vector.
  Eigen::MatrixXcd slash(const Eigen::VectorXd& p) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size_, size_);
    for (int j = 0; j < dim_; ++j) out += p(j) * alphas_[static_cast<std::size_t>(j)];
    return out;
  }
  Eigen::MatrixXcd slash(const Eigen::VectorXcd& p) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size_, size_);
    for (int j = 0; j < dim_; ++j) out += p(j) * alphas_[static_cast<std::size_t>(j)];
    return out;
  }

  /// Max residual over the defining relations; used by tests and `verify`.
  double relation_residual() const {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(size_, size_);
    double r = 0.0;
    for (int j = 0; j < dim_; ++j) {
      r = std::max(r, hermiticity_residual(alpha(j)));
      for (int l = 0; l < dim_; ++l) {
        Eigen::MatrixXcd ac = alpha(j) * alpha(l) + alpha(l) * alpha(j);
        if (j == l) ac -= 2.0 * id;
        r = std::max(r, ac.norm());
      }
      r = std::max(r, (beta_ * alpha(j) + alpha(j) * beta_).norm());
    }
    r = std::max(r, hermiticity_residual(beta_));
    r = std::max(r, (beta_ * beta_ - id).norm());
    return r;
  }

 private:
  // 2m anticommuting Hermitian involutions of size 2^m:
  //   a_{2j-1} = s3^(j-1) x s1 x I..., a_{2j} = s3^(j-1) x s2 x I...
  static std::vector<Eigen::MatrixXcd> even_chain(int d) {
    const int m = d / 2;
    std::vector<Eigen::MatrixXcd> out;
    for (int j = 1; j <= m; ++j) {
      for (int which : {1, 2}) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(1, 1);
        for (int t = 0; t < j - 1; ++t) a = kron(a, pauli(3));
        a = kron(a, pauli(which));
        for (int t = j; t < m; ++t) a = kron(a, Eigen::MatrixXcd::Identity(2, 2));
        out.push_back(a);
      }
    }
    return out;
  }

  int dim_ = 0;
  int size_ = 0;
  std::vector<Eigen::MatrixXcd> alphas_;
  Eigen::MatrixXcd beta_;
};

/// True iff L alpha_j = (-1)^s alpha_j L for all j, within tol (scaled by M).
inline bool in_commutant_class(const Eigen::MatrixXcd& L, int s, const CliffordSystem& sys,
                               double tol = 1e-12) {
  if (L.rows() != sys.size() || L.cols() != sys.size())
    throw std::invalid_argument("in_commutant_class: size mismatch");
  if (s != 0 && s != 1) throw std::invalid_argument("in_commutant_class: s must be 0 or 1");
  const double sign = (s == 0) ? 1.0 : -1.0;
  const double scale = tol * sys.size() * std::max(1.0, L.norm());
  for (int j = 0; j < sys.dim(); ++j) {
    if ((L * sys.alpha(j) - sign * sys.alpha(j) * L).norm() > scale) return false;
  }
  return true;
}

/// P^+-_et = (I -+ i (sum e_j alpha_j)(sum et_j alpha_j)) / 2 for a unit pair
/// e, et with (e, et) = 0. Hermitian idempotents with P^+ + P^- = I.
inline Eigen::MatrixXcd projection_pair(const Eigen::VectorXd& e, const Eigen::VectorXd& et,
                                        int sign, const CliffordSystem& sys) {
  if (sign != +1 && sign != -1) throw std::invalid_argument("projection_pair: sign must be +-1");
  if (std::abs(e.norm() - 1.0) > 1e-10 || std::abs(et.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("projection_pair: e and et must be unit vectors");
  if (std::abs(e.dot(et)) > 1e-10)
    throw std::invalid_argument("projection_pair: e and et must be orthogonal");
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(sys.size(), sys.size());
  const Complex i(0.0, 1.0);
  return 0.5 * (id - static_cast<double>(sign) * i * sys.slash(e) * sys.slash(et));
}

}  // namespace diracbloch
