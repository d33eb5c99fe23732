#pragma once

// Desk-scale verification harness for the complexified-momentum lower
// bounds: sigma_min scans of D(k + i kappa e) + W along the line
// |(k, gamma)| = pi, and finite-dimensional instances of the restricted,
// weighted, and smallness inequalities that drive them.

#include "diracbloch/clifford.hpp"
#include "diracbloch/fiber.hpp"
#include "diracbloch/lattice.hpp"
#include "diracbloch/potential.hpp"
#include "diracbloch/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace diracbloch {

struct ThomasConstants {
  double tau = 0.5;
  double Q = 0.0;
  double theta_tilde = 0.0;
  double mu_norm = 1.0;
  double c_star_h = 0.0;

  double c2(double gamma_len) const {
    return c2_constant(tau, Q, theta_tilde, mu_norm, c_star_h, gamma_len);
  }
};

struct ThomasScanConfig {
  LatticeVector gamma;
  std::vector<Eigen::VectorXd> kpoints;  // all with |(k,gamma)| = pi
  std::vector<double> kappas;
  int n_max = 2;
  ThomasConstants constants;
  int trials = 50;
  std::uint64_t seed = 1;

  void validate() const {
    if (gamma.vec.norm() == 0.0) throw std::invalid_argument("ThomasScanConfig: gamma must be nonzero");
    for (const auto& k : kpoints)
      if (std::abs(std::abs(k.dot(gamma.vec)) - std::numbers::pi) > 1e-10)
        throw std::invalid_argument("ThomasScanConfig: k samples must satisfy |(k,gamma)| = pi");
  }
};

/// Deterministic sample of the Thomas line: k = pi gamma/|gamma|^2 + t u
/// with u the first dual direction orthogonal to gamma, t sweeping the
/// transverse scale.
inline std::vector<Eigen::VectorXd> thomas_line_points(const Lattice& lat,
                                                       const LatticeVector& gamma, int count,
                                                       double span = 1.0) {
  if (count < 1) throw std::invalid_argument("thomas_line_points: count must be >= 1");
  const int d = lat.dim();
  const Eigen::VectorXd e = gamma.vec / gamma.vec.norm();
  const Eigen::VectorXd base = std::numbers::pi * gamma.vec / gamma.vec.squaredNorm();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd cand = lat.dual_vector(j);
    cand -= cand.dot(e) * e;
    if (cand.norm() > 1e-10) {
      u = cand / cand.norm();
      break;
    }
  }
  if (u.norm() == 0.0) throw std::runtime_error("thomas_line_points: no transverse direction found");
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < count; ++i) {
    const double t = (count == 1) ? 0.0
                                  : span * kTwoPi * (static_cast<double>(i) / (count - 1) - 0.5);
    pts.push_back(base + t * u);
  }
  return pts;
}

struct ThomasPointResult {
  Eigen::VectorXd k;
  double kappa = 0.0;
  double sigma_min = 0.0;
  double c1 = 0.0;
  bool pass = false;
};

/// sigma_min(D(k + i kappa e) + W) against C_1 = pi C_2 / (2|gamma|) over
/// the whole (k, kappa) grid.
inline std::vector<ThomasPointResult> thomas_scan(const ThomasScanConfig& cfg,
                                                  const FourierPotential* W, const Lattice& lat,
                                                  const CliffordSystem& cliff, int threads = 1) {
  cfg.validate();
  const Eigen::VectorXd e = cfg.gamma.vec / cfg.gamma.vec.norm();
  const auto basis = enumerate_box(lat, cfg.n_max);
  const double c2 = cfg.constants.c2(cfg.gamma.vec.norm());
  const double c1 = c1_constant(c2, cfg.gamma.vec.norm());

  std::vector<ThomasPointResult> out(cfg.kpoints.size() * cfg.kappas.size());
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const std::size_t ik = t / cfg.kappas.size();
      const std::size_t ika = t % cfg.kappas.size();
      const FiberPoint fp(cfg.kpoints[ik], cfg.kappas[ika], e);
      const Eigen::MatrixXcd mat = assemble(fp, W, basis, cliff);
      ThomasPointResult r;
      r.k = cfg.kpoints[ik];
      r.kappa = cfg.kappas[ika];
      r.sigma_min = min_singular_value(mat);
      r.c1 = c1;
      r.pass = r.sigma_min >= c1;
      out[t] = std::move(r);
    }
  };
  const std::size_t total = out.size();
  if (threads <= 1 || total < 2) {
    worker(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = static_cast<std::size_t>(t) * chunk;
      if (b >= total) break;
      pool.emplace_back(worker, b, std::min(total, b + chunk));
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inequality instances on random truncated test vectors.

struct RatioStats {
  double min_ratio = std::numeric_limits<double>::infinity();  // min over trials of LHS/RHS
  double max_ratio = 0.0;
  int trials = 0;
  int skipped = 0;  // empty index-set instances
  bool pass = false;
};

namespace detail {

/// Mask selecting the modes of an index subset within the ordered basis.
inline Eigen::VectorXcd restrict_to(const Eigen::VectorXcd& phi,
                                    const std::vector<bool>& keep, int block) {
  Eigen::VectorXcd out = phi;
  for (std::size_t r = 0; r < keep.size(); ++r)
    if (!keep[r])
      out.segment(static_cast<Eigen::Index>(r) * block, block).setZero();
  return out;
}

}  // namespace detail

/// Restricted lower bound on the annulus subspace: for phi supported on
/// C(1/2) inside the truncation,
///   ||P^+ (D + W) phi||^2 + a^2 ||P^- (D + W) phi||^2
///     >= (1 - delta) (C_2^2 ||G^1_- P^- phi||^2 + a^2 ||G^1_+ P^+ phi||^2).
/// `a` is scanned over a logarithmic grid in (0, C_2]; the best margin is
/// reported. Points where C(1/2) misses the truncation are skipped.
inline RatioStats restricted_bound_check(const ThomasScanConfig& cfg, const FourierPotential* W,
                                         const Lattice& lat, const CliffordSystem& cliff,
                                         double delta, int a_grid = 8) {
  cfg.validate();
  const Eigen::VectorXd e = cfg.gamma.vec / cfg.gamma.vec.norm();
  const auto basis = enumerate_box(lat, cfg.n_max);
  const int M = cliff.size();
  const double c2 = cfg.constants.c2(cfg.gamma.vec.norm());
  RatioStats best;
  int skipped_per_sweep = 0;
  for (int ia = 0; ia < a_grid; ++ia) {
    const double a = c2 * std::pow(2.0, -(a_grid - 1 - ia));  // log grid ending at C_2
    RatioStats st;
    Rng local(cfg.seed + static_cast<std::uint64_t>(ia) * 7919u);
    for (const auto& k : cfg.kpoints) {
      for (double kappa : cfg.kappas) {
        const FiberPoint fp(k, kappa, e);
        const SpectralWeights w = weights(fp, basis);
        std::vector<bool> in_c(basis.size());
        bool any = false;
        for (std::size_t r = 0; r < basis.size(); ++r) {
          const Eigen::VectorXd y = fp.k + kTwoPi * basis[r].point;
          const double perp = (y - y.dot(e) * e).norm();
          in_c[r] = std::abs(kappa - perp) < 0.5 * kappa;
          any = any || in_c[r];
        }
        if (!any) {
          ++st.skipped;
          continue;
        }
        const Eigen::MatrixXcd op = assemble(fp, W, basis, cliff);
        const FiberProjections pr = projections(fp, basis, cliff);
        const Eigen::MatrixXcd g_m = g_power(w, Complex(1.0, 0.0), -1, M);
        const Eigen::MatrixXcd g_p = g_power(w, Complex(1.0, 0.0), +1, M);
        for (int t = 0; t < cfg.trials; ++t) {
          Eigen::VectorXcd phi = local.complex_normal_vector(static_cast<int>(op.rows()));
          phi = detail::restrict_to(phi, in_c, M);
          if (phi.norm() == 0.0) continue;
          phi /= phi.norm();
          const Eigen::VectorXcd dphi = op * phi;
          const double lhs = (pr.p_plus * dphi).squaredNorm() + a * a * (pr.p_minus * dphi).squaredNorm();
          const double rhs = (1.0 - delta) * (c2 * c2 * (g_m * (pr.p_minus * phi)).squaredNorm() +
                                              a * a * (g_p * (pr.p_plus * phi)).squaredNorm());
          if (rhs <= 0.0) continue;
          const double ratio = lhs / rhs;
          st.min_ratio = std::min(st.min_ratio, ratio);
          st.max_ratio = std::max(st.max_ratio, ratio);
          ++st.trials;
        }
      }
    }
    st.pass = st.trials > 0 && st.min_ratio >= 1.0;
    skipped_per_sweep = st.skipped;  // identical for every a
    if (st.trials > 0 && (best.trials == 0 || st.min_ratio > best.min_ratio)) best = st;
  }
  best.skipped = skipped_per_sweep;
  return best;
}

/// Weighted lower bound with G^{+-1/2} weights
/// and starred projections on the left side.
inline RatioStats weighted_bound_check(const ThomasScanConfig& cfg, const FourierPotential* W,
                                       const Lattice& lat, const CliffordSystem& cliff,
                                       double delta) {
  cfg.validate();
  const Eigen::VectorXd e = cfg.gamma.vec / cfg.gamma.vec.norm();
  const auto basis = enumerate_box(lat, cfg.n_max);
  const int M = cliff.size();
  const double c2 = cfg.constants.c2(cfg.gamma.vec.norm());
  RatioStats st;
  Rng rng(cfg.seed);
  for (const auto& k : cfg.kpoints) {
    for (double kappa : cfg.kappas) {
      const FiberPoint fp(k, kappa, e);
      const SpectralWeights w = weights(fp, basis);
      const Eigen::MatrixXcd op = assemble(fp, W, basis, cliff);
      const FiberProjections pr = projections(fp, basis, cliff);
      const Eigen::MatrixXcd g_mh = g_power(w, Complex(-0.5, 0.0), -1, M);
      const Eigen::MatrixXcd g_ph = g_power(w, Complex(-0.5, 0.0), +1, M);
      const Eigen::MatrixXcd g_msq = g_power(w, Complex(0.5, 0.0), -1, M);
      const Eigen::MatrixXcd g_psq = g_power(w, Complex(0.5, 0.0), +1, M);
      for (int t = 0; t < cfg.trials; ++t) {
        Eigen::VectorXcd phi = rng.complex_normal_vector(static_cast<int>(op.rows()));
        phi /= phi.norm();
        const Eigen::VectorXcd dphi = op * phi;
        const double lhs = (g_mh * (pr.p_plus_star * dphi)).squaredNorm() / c2 +
                           (g_ph * (pr.p_minus_star * dphi)).squaredNorm();
        const double rhs = (1.0 - delta) * (c2 * (g_msq * (pr.p_minus * phi)).squaredNorm() +
                                            (g_psq * (pr.p_plus * phi)).squaredNorm());
        if (rhs <= 0.0) continue;
        const double ratio = lhs / rhs;
        st.min_ratio = std::min(st.min_ratio, ratio);
        st.max_ratio = std::max(st.max_ratio, ratio);
        ++st.trials;
      }
    }
  }
  st.pass = st.trials > 0 && st.min_ratio >= 1.0;
  return st;
}

struct SmallnessReport {
  double epsilon_measured = 0.0;  // sup over trials of sqrt(LHS/RHS)
  int trials = 0;
  std::vector<std::pair<double, double>> per_kappa;  // (kappa, measured eps)
};

/// Measured smallness ratio of the (1.15)-type inequality for an electric
/// potential V = V^(0) + V^(1):
///   (||G_-^{-1/2} P^+_* V phi||^2 + ||G_+^{-1/2} P^-_* V phi||^2)
///     <= eps^2 (||G_+^{1/2} P^+ phi||^2 + ||G_-^{1/2} P^- phi||^2).
inline SmallnessReport smallness_check_V(const ThomasScanConfig& cfg, const FourierPotential& V,
                                         const Lattice& lat, const CliffordSystem& cliff) {
  cfg.validate();
  const Eigen::VectorXd e = cfg.gamma.vec / cfg.gamma.vec.norm();
  const auto basis = enumerate_box(lat, cfg.n_max);
  const int M = cliff.size();
  SmallnessReport rep;
  Rng rng(cfg.seed);
  for (double kappa : cfg.kappas) {
    double eps_k = 0.0;
    for (const auto& k : cfg.kpoints) {
      const FiberPoint fp(k, kappa, e);
      const SpectralWeights w = weights(fp, basis);
      const FiberProjections pr = projections(fp, basis, cliff);
      // multiplication operator by V on the truncation (no free part)
      Eigen::MatrixXcd vop = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(M) * basis.size(),
                                                    static_cast<Eigen::Index>(M) * basis.size());
      std::vector<int> diff(static_cast<std::size_t>(lat.dim()));
      for (std::size_t r = 0; r < basis.size(); ++r)
        for (std::size_t c = 0; c < basis.size(); ++c) {
          for (int j = 0; j < lat.dim(); ++j)
            diff[static_cast<std::size_t>(j)] = basis[r].n[static_cast<std::size_t>(j)] - basis[c].n[static_cast<std::size_t>(j)];
          if (V.has(diff))
            vop.block(static_cast<Eigen::Index>(r) * M, static_cast<Eigen::Index>(c) * M, M, M) = V.coeff(diff);
        }
      const Eigen::MatrixXcd g_mh = g_power(w, Complex(-0.5, 0.0), -1, M);
      const Eigen::MatrixXcd g_ph = g_power(w, Complex(-0.5, 0.0), +1, M);
      const Eigen::MatrixXcd g_msq = g_power(w, Complex(0.5, 0.0), -1, M);
      const Eigen::MatrixXcd g_psq = g_power(w, Complex(0.5, 0.0), +1, M);
      for (int t = 0; t < cfg.trials; ++t) {
        Eigen::VectorXcd phi = rng.complex_normal_vector(static_cast<int>(vop.rows()));
        phi /= phi.norm();
        const Eigen::VectorXcd vphi = vop * phi;
        const double lhs = (g_mh * (pr.p_plus_star * vphi)).squaredNorm() +
                           (g_ph * (pr.p_minus_star * vphi)).squaredNorm();
        const double rhs = (g_psq * (pr.p_plus * phi)).squaredNorm() +
                           (g_msq * (pr.p_minus * phi)).squaredNorm();
        if (rhs <= 0.0) continue;
        eps_k = std::max(eps_k, std::sqrt(lhs / rhs));
        ++rep.trials;
      }
    }
    rep.per_kappa.emplace_back(kappa, eps_k);
    rep.epsilon_measured = std::max(rep.epsilon_measured, eps_k);
  }
  return rep;
}

}  // namespace diracbloch
