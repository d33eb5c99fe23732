#pragma once

// Truncated Galerkin realization of the complexified fiber operator
// D(k + i kappa e) + W on a finite dual-index box, together with the
// per-mode weights G^+-_N, the diagonal powers G^zeta, the half-spin
// projections P^+- / P^+-_* and the Theta frequency cutoffs.
//
// Matrix layout: the ordered basis {N_0, N_1, ...} gives block row/column
// r of size M; block (r, c) of the operator is
//   delta_rc D_{N_r}(k; kappa) + W_{N_r - N_c},
// a block Toeplitz structure apart from the diagonal.

#include "diracbloch/clifford.hpp"
#include "diracbloch/lattice.hpp"
#include "diracbloch/linalg.hpp"
#include "diracbloch/potential.hpp"
#include "diracbloch/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace diracbloch {

struct FiberPoint {
  Eigen::VectorXd k;
  double kappa = 0.0;
  Eigen::VectorXd e;  // gamma / |gamma|

  FiberPoint(const Eigen::VectorXd& k_, double kappa_, const Eigen::VectorXd& e_)
      : k(k_), kappa(kappa_), e(e_) {
    if (kappa < 0.0) throw std::invalid_argument("FiberPoint: kappa must be >= 0");
    if (std::abs(e.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("FiberPoint: e must be a unit vector");
  }

  /// |(k, gamma)| = pi within 1e-10 (the Thomas line).
  bool on_thomas_line(const LatticeVector& gamma, double tol = 1e-10) const {
    return std::abs(std::abs(k.dot(gamma.vec)) - std::numbers::pi) <= tol;
  }
};

struct SpectralWeights {
  std::vector<double> g_minus;
  std::vector<double> g_plus;
  std::vector<bool> degenerate;  // k_perp + 2 pi N_perp = 0
};

/// G^+-_N(k; kappa) per basis index, plus the degenerate-mode flags used by
/// the starred projections.
inline SpectralWeights weights(const FiberPoint& fp, const std::vector<LatticeIndex>& basis) {
  SpectralWeights w;
  w.g_minus.reserve(basis.size());
  w.g_plus.reserve(basis.size());
  w.degenerate.reserve(basis.size());
  for (const auto& idx : basis) {
    const Eigen::VectorXd y = fp.k + kTwoPi * idx.point;
    const double ypar = y.dot(fp.e);
    const Eigen::VectorXd yperp = y - ypar * fp.e;
    const double p = yperp.norm();
    w.g_minus.push_back(std::sqrt(ypar * ypar + (fp.kappa - p) * (fp.kappa - p)));
    w.g_plus.push_back(std::sqrt(ypar * ypar + (fp.kappa + p) * (fp.kappa + p)));
    const double scale = 1.0 + y.norm();
    w.degenerate.push_back(p <= 1e-12 * scale);
  }
  return w;
}

/// Free block D_N(k; kappa) = sum_j (k_j + 2 pi N_j + i kappa e_j) alpha_j.
inline Eigen::MatrixXcd free_block(const FiberPoint& fp, const LatticeIndex& idx,
                                   const CliffordSystem& cliff) {
  Eigen::VectorXcd p = (fp.k + kTwoPi * idx.point).cast<Complex>();
  p += Complex(0.0, fp.kappa) * fp.e.cast<Complex>();
  return cliff.slash(p);
}

/// Matrix-valued potential W = V^(0) + V^(1) - sum_j A_j alpha_j from its
/// scalar/vector parts; any of the three may be absent.
inline FourierPotential combine_potential(const Lattice& lat, const CliffordSystem& cliff,
                                          const FourierPotential* V0, const FourierPotential* V1,
                                          const FourierPotential* A) {
  const int M = cliff.size();
  bool herm = true;
  if (V0 && !V0->hermitian_field()) herm = false;
  if (V1 && !V1->hermitian_field()) herm = false;
  if (A && !A->hermitian_field()) herm = false;
  FourierPotential out(lat, ValueShape::matrix, M, herm);
  auto add = [&](const std::vector<int>& n, const Eigen::MatrixXcd& m) {
    out.set_coeff(n, out.coeff(n) + m);
  };
  if (V0) {
    if (V0->shape() != ValueShape::scalar) throw std::invalid_argument("combine_potential: V0 must be scalar");
    for (const auto& [n, c] : V0->coeffs()) add(n, c(0, 0) * Eigen::MatrixXcd::Identity(M, M));
  }
  if (V1) {
    if (V1->shape() != ValueShape::scalar) throw std::invalid_argument("combine_potential: V1 must be scalar");
    for (const auto& [n, c] : V1->coeffs()) add(n, c(0, 0) * cliff.beta());
  }
  if (A) {
    if (A->shape() != ValueShape::vector) throw std::invalid_argument("combine_potential: A must be vector-valued");
    for (const auto& [n, c] : A->coeffs()) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(M, M);
      for (int j = 0; j < cliff.dim(); ++j) m -= c(j, 0) * cliff.alpha(j);
      add(n, m);
    }
  }
  out.prune();
  return out;
}

/// Dense truncated matrix of D(k + i kappa e) + W on the ordered basis.
inline Eigen::MatrixXcd assemble(const FiberPoint& fp, const FourierPotential* W,
                                 const std::vector<LatticeIndex>& basis,
                                 const CliffordSystem& cliff) {
  const int M = cliff.size();
  const int B = static_cast<int>(basis.size());
  if (W && (W->shape() != ValueShape::matrix || W->rows() != M))
    throw std::invalid_argument("assemble: W must be M x M matrix-valued");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(M) * B,
                                                static_cast<Eigen::Index>(M) * B);
  const int d = cliff.dim();
  std::vector<int> diff(static_cast<std::size_t>(d));
  for (int r = 0; r < B; ++r) {
    out.block(r * M, r * M, M, M) = free_block(fp, basis[static_cast<std::size_t>(r)], cliff);
    if (!W) continue;
    for (int c = 0; c < B; ++c) {
      for (int j = 0; j < d; ++j)
        diff[static_cast<std::size_t>(j)] = basis[static_cast<std::size_t>(r)].n[static_cast<std::size_t>(j)] -
                                            basis[static_cast<std::size_t>(c)].n[static_cast<std::size_t>(j)];
      if (!W->has(diff)) continue;
      out.block(r * M, c * M, M, M) += W->coeff(diff);
    }
  }
  return out;
}

struct FiberProjections {
  Eigen::MatrixXcd p_plus, p_minus;            // P^+, P^-
  Eigen::MatrixXcd p_plus_star, p_minus_star;  // P^+_*, P^-_*
};

/// Block-diagonal projections. Non-degenerate modes use P^+-_{et(k + 2 pi N)}
/// with et(y) = y_perp / |y_perp|; degenerate modes are routed whole:
/// block = I in P^+_* and P^-, block = 0 in P^+ and P^-_*.
inline FiberProjections projections(const FiberPoint& fp, const std::vector<LatticeIndex>& basis,
                                    const CliffordSystem& cliff) {
  const int M = cliff.size();
  const int B = static_cast<int>(basis.size());
  FiberProjections pr;
  pr.p_plus = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(M) * B, static_cast<Eigen::Index>(M) * B);
  pr.p_minus = pr.p_plus;
  pr.p_plus_star = pr.p_plus;
  pr.p_minus_star = pr.p_plus;
  const SpectralWeights w = weights(fp, basis);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(M, M);
  for (int r = 0; r < B; ++r) {
    if (w.degenerate[static_cast<std::size_t>(r)]) {
      pr.p_plus_star.block(r * M, r * M, M, M) = id;
      pr.p_minus.block(r * M, r * M, M, M) = id;
      continue;
    }
    const Eigen::VectorXd y = fp.k + kTwoPi * basis[static_cast<std::size_t>(r)].point;
    const Eigen::VectorXd yperp = y - y.dot(fp.e) * fp.e;
    const Eigen::VectorXd et = yperp / yperp.norm();
    const Eigen::MatrixXcd pp = projection_pair(fp.e, et, +1, cliff);
    pr.p_plus.block(r * M, r * M, M, M) = pp;
    pr.p_minus.block(r * M, r * M, M, M) = id - pp;
    pr.p_plus_star.block(r * M, r * M, M, M) = pp;
    pr.p_minus_star.block(r * M, r * M, M, M) = id - pp;
  }
  return pr;
}

/// Diagonal multiplier (G^+-_N)^zeta per block. Requires positive weights
/// when Re zeta < 0.
inline Eigen::MatrixXcd g_power(const SpectralWeights& w, Complex zeta, int sign, int block_size) {
  const std::vector<double>& g = (sign > 0) ? w.g_plus : w.g_minus;
  const Eigen::Index n = static_cast<Eigen::Index>(g.size()) * block_size;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < g.size(); ++r) {
    Complex v;
    if (zeta == Complex(0.0, 0.0)) {
      v = Complex(1.0, 0.0);
    } else if (g[r] == 0.0) {
      if (zeta.real() <= 0.0)
        throw std::invalid_argument("g_power: zero weight with nonpositive Re(zeta)");
      v = Complex(0.0, 0.0);
    } else {
      v = std::exp(zeta * std::log(Complex(g[r], 0.0)));
    }
    for (int m = 0; m < block_size; ++m)
      out(static_cast<Eigen::Index>(r) * block_size + m,
          static_cast<Eigen::Index>(r) * block_size + m) = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theta frequency cutoffs (scalar profiles plus their diagonal multipliers).

/// Full cutoff Theta(h, kappa; t): 1 up to h^(l-1), linear ramp down on
/// (h^(l-1), 2 h^(l-1)], 0 beyond.
inline double theta_profile(double h, int l, double t) {
  const double a = std::pow(h, l - 1);
  if (t <= a) return 1.0;
  if (t <= 2.0 * a) return 2.0 - t / a;
  return 0.0;
}

/// Band-pass variant Theta_{l'}: additionally vanishes below h^(l_1+1)/2
/// with a rising ramp on (h^(l_1+1)/2, h^(l_1+1)], where l_1 = l - l'.
inline double theta_profile_lprime(double h, int l, int lprime, double t) {
  const int l1 = l - lprime;
  const double lo = std::pow(h, l1 + 1);
  const double hi = std::pow(h, l - 1);
  if (t <= 0.5 * lo || t > 2.0 * hi) return 0.0;
  if (t <= lo) return -1.0 + 2.0 * t / lo;
  if (t <= hi) return 1.0;
  return 2.0 - t / hi;
}

enum class ThetaVariant { full, l_prime };

/// Diagonal operator Theta(G^-_N) on the truncated basis.
/// Preconditions: 2 h^l <= kappa for the full profile; kappa >= 2 h^(l'+1)
/// and l' >= 2 for the band-pass variant.
inline Eigen::MatrixXcd theta_multiplier(const FiberPoint& fp,
                                         const std::vector<LatticeIndex>& basis,
                                         const CliffordSystem& cliff, double h, int l,
                                         ThetaVariant variant, int lprime = 0) {
  if (l < 1) throw std::invalid_argument("theta_multiplier: l must be >= 1");
  if (variant == ThetaVariant::full) {
    if (!(2.0 * std::pow(h, l) <= fp.kappa))
      throw std::invalid_argument("theta_multiplier: 2 h^l <= kappa violated");
  } else {
    if (lprime < 2) throw std::invalid_argument("theta_multiplier: l' must be >= 2");
    if (!(fp.kappa >= 2.0 * std::pow(h, lprime + 1)))
      throw std::invalid_argument("theta_multiplier: kappa >= 2 h^(l'+1) violated");
    if (l - lprime < 1) throw std::invalid_argument("theta_multiplier: l - l' must be >= 1");
  }
  const SpectralWeights w = weights(fp, basis);
  const int M = cliff.size();
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size()) * M;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const double t = w.g_minus[r];
    const double v = (variant == ThetaVariant::full) ? theta_profile(h, l, t)
                                                     : theta_profile_lprime(h, l, lprime, t);
    for (int m = 0; m < M; ++m)
      out(static_cast<Eigen::Index>(r) * M + m, static_cast<Eigen::Index>(r) * M + m) = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identity verification for the free fiber operator.

struct IdentityReport {
  double block_annihilation = 0.0;     // max ||P^+- D_N P^+-|| over modes
  double block_singular_values = 0.0;  // max |sv(D_N) - {G^-, G^+}| deviation
  double norm_decomposition = 0.0;     // ||D phi||^2 = ||G^1_- P^- phi||^2 + ||G^1_+ P^+ phi||^2
  double starred_equalities = 0.0;     // ||P^+-_* D phi|| = ||G^1_-+ P^-+ phi||
  double sigma_min_vs_weights = 0.0; // |sigma_min(D) - min_N G^-_N|
  double sandwich_violation = 0.0;   // violations of G^- <= ||D phi|| <= G^+ sandwich
};

/// Residuals of the per-mode annihilation, block singular value, and norm
/// decomposition identities of the free operator at the given fiber point,
/// over `trials` random test vectors.
inline IdentityReport verify_identities(const FiberPoint& fp, const std::vector<LatticeIndex>& basis,
                                        const CliffordSystem& cliff, int trials, std::uint64_t seed) {
  IdentityReport rep;
  const int M = cliff.size();
  const SpectralWeights w = weights(fp, basis);
  const FiberProjections pr = projections(fp, basis, cliff);
  const Eigen::MatrixXcd D = assemble(fp, nullptr, basis, cliff);

  // per-block checks
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Eigen::MatrixXcd blk = free_block(fp, basis[r], cliff);
    if (!w.degenerate[r]) {
      const Eigen::MatrixXcd pp = pr.p_plus.block(static_cast<Eigen::Index>(r) * M,
                                                  static_cast<Eigen::Index>(r) * M, M, M);
      const Eigen::MatrixXcd pm = pr.p_minus.block(static_cast<Eigen::Index>(r) * M,
                                                   static_cast<Eigen::Index>(r) * M, M, M);
      rep.block_annihilation = std::max(rep.block_annihilation, operator_norm(pp * blk * pp));
      rep.block_annihilation = std::max(rep.block_annihilation, operator_norm(pm * blk * pm));
    }
    // singular values must be {G^-, G^+}, each M/2-fold
    Eigen::VectorXd sv = singular_values(blk);
    for (int i = 0; i < M / 2; ++i) {
      rep.block_singular_values = std::max(rep.block_singular_values, std::abs(sv(i) - w.g_plus[r]));
      rep.block_singular_values =
          std::max(rep.block_singular_values, std::abs(sv(M / 2 + i) - w.g_minus[r]));
    }
  }

  // norm decomposition on random vectors
  Rng rng(seed);
  const Eigen::Index n = D.rows();
  const Eigen::MatrixXcd g_m = g_power(w, Complex(1.0, 0.0), -1, M);
  const Eigen::MatrixXcd g_p = g_power(w, Complex(1.0, 0.0), +1, M);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd phi = rng.complex_normal_vector(static_cast<int>(n));
    phi /= phi.norm();
    const Eigen::VectorXcd Dphi = D * phi;
    const double lhs = Dphi.squaredNorm();
    const double rhs = (g_m * (pr.p_minus * phi)).squaredNorm() + (g_p * (pr.p_plus * phi)).squaredNorm();
    rep.norm_decomposition = std::max(rep.norm_decomposition, std::abs(lhs - rhs) / std::max(1e-300, lhs));
    const double e1 = std::abs((pr.p_plus_star * Dphi).norm() - (g_m * (pr.p_minus * phi)).norm());
    const double e2 = std::abs((pr.p_minus_star * Dphi).norm() - (g_p * (pr.p_plus * phi)).norm());
    rep.starred_equalities = std::max(rep.starred_equalities, std::max(e1, e2) / std::max(1e-300, Dphi.norm()));
    // sandwich ||G^- P^- phi|| <= ||D phi|| <= ||G^+ phi||
    const double low = (g_m * (pr.p_minus * phi)).norm();
    const double high = (g_p * phi).norm();
    rep.sandwich_violation = std::max(rep.sandwich_violation, std::max(0.0, low - Dphi.norm()));
    rep.sandwich_violation = std::max(rep.sandwich_violation, std::max(0.0, Dphi.norm() - high));
  }

  double gmin = std::numeric_limits<double>::infinity();
  for (double g : w.g_minus) gmin = std::min(gmin, g);
  rep.sigma_min_vs_weights = std::abs(min_singular_value(D) - gmin);
  return rep;
}

}  // namespace diracbloch
