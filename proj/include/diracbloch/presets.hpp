#pragma once

// Named analytic potentials used by the CLI and the test suites: constants,
// single Fourier modes, a mass term, truncated Coulomb wells, and
// single-mode magnetic fields. All are Hermitian-valued.

#include "diracbloch/lattice.hpp"
#include "diracbloch/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace diracbloch {

inline FourierPotential preset_zero_scalar(const Lattice& lat) {
  return FourierPotential(lat, ValueShape::scalar, 1, true);
}

inline FourierPotential preset_constant_scalar(const Lattice& lat, double c) {
  FourierPotential out(lat, ValueShape::scalar, 1, true);
  if (c != 0.0) out.set_scalar_coeff(std::vector<int>(static_cast<std::size_t>(lat.dim()), 0), c);
  return out;
}

/// V(x) = 2 a cos(2 pi (N0, x)): real scalar with coefficients a at +-N0.
inline FourierPotential preset_single_mode_scalar(const Lattice& lat, const std::vector<int>& n0,
                                                  double a) {
  FourierPotential out(lat, ValueShape::scalar, 1, true);
  std::vector<int> neg(n0.size());
  for (std::size_t j = 0; j < n0.size(); ++j) neg[j] = -n0[j];
  out.set_scalar_coeff(n0, a);
  out.set_scalar_coeff(neg, a);
  return out;
}

/// A(x) = 2 a u cos(2 pi (N0, x)): real vector field with A_0 = 0.
inline FourierPotential preset_single_mode_vector(const Lattice& lat, const std::vector<int>& n0,
                                                  const Eigen::VectorXd& u, double a) {
  bool zero_index = true;
  for (int v : n0) zero_index = zero_index && (v == 0);
  if (zero_index) throw std::invalid_argument("preset_single_mode_vector: N0 = 0 would violate A_0 = 0");
  FourierPotential out(lat, ValueShape::vector, lat.dim(), true);
  std::vector<int> neg(n0.size());
  for (std::size_t j = 0; j < n0.size(); ++j) neg[j] = -n0[j];
  Eigen::MatrixXcd c(lat.dim(), 1);
  c.col(0) = (a * u).cast<Complex>();
  out.set_coeff(n0, c);
  out.set_coeff(neg, c);
  return out;
}

/// Periodized Coulomb well q cutoff(r)/r around `center`: exactly q/r inside
/// radius r0, C^2 descent to zero at r1, zero outside. Distances are taken
/// to the nearest lattice translate of the center.
struct CoulombWell {
  Lattice lattice;
  Eigen::VectorXd center;
  double charge = 1.0;
  double r0 = 0.15;
  double r1 = 0.3;

  CoulombWell(const Lattice& lat, const Eigen::VectorXd& c, double q, double inner, double outer)
      : lattice(lat), center(c), charge(q), r0(inner), r1(outer) {
    if (!(inner > 0.0 && outer > inner))
      throw std::invalid_argument("CoulombWell: need 0 < r0 < r1");
  }

  double periodic_distance(const Eigen::VectorXd& x) const {
    const int d = lattice.dim();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> m(static_cast<std::size_t>(d), -1);
    while (true) {
      Eigen::VectorXd shift = Eigen::VectorXd::Zero(d);
      for (int j = 0; j < d; ++j)
        shift += static_cast<double>(m[static_cast<std::size_t>(j)]) * lattice.basis_vector(j);
      best = std::min(best, (x - center + shift).norm());
      int j = d - 1;
      while (j >= 0 && m[static_cast<std::size_t>(j)] == 1) m[static_cast<std::size_t>(j--)] = -1;
      if (j < 0) break;
      ++m[static_cast<std::size_t>(j)];
    }
    return best;
  }

  double operator()(const Eigen::VectorXd& x) const {
    const double r = periodic_distance(x);
    if (r >= r1) return 0.0;
    const double base = (r <= 1e-300) ? 1e300 : std::abs(charge) / r;
    if (r <= r0) return base;
    return base * (1.0 - smoothstep5((r - r0) / (r1 - r0)));
  }

  SampledField sample(const std::vector<int>& res) const {
    return sample_scalar(lattice, res, [this](const Eigen::VectorXd& x) { return (*this)(x); });
  }

  /// Matrix-valued well cutoff(r)/r * Q for a Hermitian charge matrix Q
  /// (the scalar `charge` only sets the singularity scale of the profile).
  SampledField sample_matrix(const std::vector<int>& res, const Eigen::MatrixXcd& charge_matrix) const {
    SampledField out(lattice, res, ValueShape::matrix, static_cast<int>(charge_matrix.rows()));
    for (std::size_t i = 0; i < out.size(); ++i)
      out.set_value(i, (*this)(out.grid_point(i)) / std::abs(charge) * charge_matrix);
    return out;
  }

  /// Fourier truncation: sign-carrying coefficients from a grid analysis.
  FourierPotential truncate(const std::vector<int>& res, int keep_n_max) const {
    SampledField f = sample_scalar(lattice, res, [this](const Eigen::VectorXd& x) {
      const double r = periodic_distance(x);
      if (r >= r1) return 0.0;
      const double base = (r <= 1e-300) ? 1e300 : charge / r;
      if (r <= r0) return base;
      return base * (1.0 - smoothstep5((r - r0) / (r1 - r0)));
    });
    FourierPotential full = analyze(f);
    FourierPotential out(lattice, ValueShape::scalar, 1, true);
    for (const auto& [n, c] : full.coeffs()) {
      bool keep = true;
      for (int v : n) keep = keep && std::abs(v) <= keep_n_max;
      if (keep) out.set_coeff(n, c);
    }
    // enforce exact conjugate symmetry lost to grid rounding
    FourierPotential sym(lattice, ValueShape::scalar, 1, true);
    for (const auto& [n, c] : out.coeffs()) {
      std::vector<int> neg(n.size());
      for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
      const Complex avg = 0.5 * (c(0, 0) + std::conj(out.coeff(neg)(0, 0)));
      sym.set_scalar_coeff(n, avg);
    }
    return sym;
  }
};

}  // namespace diracbloch
