#pragma once

// Period lattice Lambda, reciprocal lattice Lambda*, and the index-set
// machinery built on them: box enumeration, the annulus sets C(eps), the
// shell partition of K(b) by the weight G^-, and the shifted-shell counts
// S_{mu nu}(n).
//
// Conventions. Basis vectors E_j are the columns of `basis`; dual vectors
// E*_j are the columns of `dual` and satisfy (E_j, E*_l) = delta_jl. A dual
// lattice point is N = sum_j n_j E*_j with integer n, a lattice vector is
// gamma = sum_j m_j E_j with integer m, so (N, gamma) = sum_j n_j m_j exactly.

#include "diracbloch/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracbloch {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Solves (E_j, E*_l) = delta_jl for the dual basis. Columns in, columns out.
inline Eigen::MatrixXd dual_basis(const Eigen::MatrixXd& basis) {
  if (basis.rows() != basis.cols() || basis.rows() < 1)
    throw std::invalid_argument("dual_basis: square basis matrix expected");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
  if (!lu.isInvertible())
    throw std::invalid_argument("dual_basis: degenerate lattice (linearly dependent basis)");
  // B^T D = I  =>  D = B^{-T}
  return lu.solve(Eigen::MatrixXd::Identity(basis.rows(), basis.cols())).transpose();
}

struct LatticeIndex {
  std::vector<int> n;      // integer coordinates in the dual basis
  Eigen::VectorXd point;   // N = sum_j n_j E*_j
};

/// Element of the period lattice Lambda.
struct LatticeVector {
  std::vector<int> coords;  // integer coordinates in the basis E
  Eigen::VectorXd vec;      // gamma = sum_j m_j E_j
};

/// (N, gamma) for N in Lambda*, gamma in Lambda. Exact integer.
inline long dual_pairing(const LatticeIndex& n, const LatticeVector& g) {
  long s = 0;
  for (std::size_t j = 0; j < n.n.size(); ++j) s += static_cast<long>(n.n[j]) * g.coords[j];
  return s;
}

struct SplitVector {
  Eigen::VectorXd parallel;       // (x,e)e
  Eigen::VectorXd perpendicular;  // x - (x,e)e
};

/// Decomposition relative to a unit direction e.
inline SplitVector split(const Eigen::VectorXd& x, const Eigen::VectorXd& e) {
  SplitVector s;
  s.parallel = x.dot(e) * e;
  s.perpendicular = x - s.parallel;
  return s;
}

class Lattice {
 public:
  explicit Lattice(const Eigen::MatrixXd& basis_columns)
      : dim_(static_cast<int>(basis_columns.cols())),
        basis_(basis_columns),
        dual_(dual_basis(basis_columns)) {
    if (dim_ < 2) throw std::invalid_argument("Lattice: dimension must be >= 2");
    cell_volume_ = std::abs(basis_.determinant());
    dual_cell_volume_ = std::abs(dual_.determinant());
    dual_diameter_ = parallelepiped_diameter(dual_);
  }

  static Lattice cubic(int d, double a = 1.0) {
    return Lattice(a * Eigen::MatrixXd::Identity(d, d));
  }

  int dim() const { return dim_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& dual() const { return dual_; }
  Eigen::VectorXd basis_vector(int j) const { return basis_.col(j); }
  Eigen::VectorXd dual_vector(int j) const { return dual_.col(j); }
  double cell_volume() const { return cell_volume_; }
  double dual_cell_volume() const { return dual_cell_volume_; }
  double dual_diameter() const { return dual_diameter_; }

  /// N = sum_j n_j E*_j.
  Eigen::VectorXd dual_point(const std::vector<int>& n) const {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim_);
    for (int j = 0; j < dim_; ++j) p += static_cast<double>(n[j]) * dual_.col(j);
    return p;
  }

  LatticeIndex index(const std::vector<int>& n) const { return {n, dual_point(n)}; }

  LatticeVector lattice_vector(const std::vector<int>& m) const {
    if (static_cast<int>(m.size()) != dim_)
      throw std::invalid_argument("lattice_vector: coordinate count mismatch");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
    for (int j = 0; j < dim_; ++j) v += static_cast<double>(m[j]) * basis_.col(j);
    return {m, v};
  }

 private:
  static double parallelepiped_diameter(const Eigen::MatrixXd& cols) {
    // max over sign patterns of |sum_j s_j v_j|; half the patterns are
    // redundant by symmetry.
    int d = static_cast<int>(cols.cols());
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << (d - 1)); ++mask) {
      Eigen::VectorXd v = cols.col(0);
      for (int j = 1; j < d; ++j)
        v += ((mask >> (j - 1)) & 1u) ? -cols.col(j).eval() : cols.col(j).eval();
      best = std::max(best, v.norm());
    }
    return best;
  }

  int dim_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd dual_;
  double cell_volume_;
  double dual_cell_volume_;
  double dual_diameter_;
};

/// All indices with |n_j| <= n_max in lexicographic order (n_1 slowest).
inline std::vector<LatticeIndex> enumerate_box(const Lattice& lat, int n_max) {
  if (n_max < 0) throw std::invalid_argument("enumerate_box: n_max must be >= 0");
  const int d = lat.dim();
  std::vector<LatticeIndex> out;
  std::vector<int> n(static_cast<std::size_t>(d), -n_max);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(2 * n_max + 1);
  out.reserve(total);
  while (true) {
    out.push_back(lat.index(n));
    int j = d - 1;
    while (j >= 0 && n[static_cast<std::size_t>(j)] == n_max) n[static_cast<std::size_t>(j--)] = -n_max;
    if (j < 0) break;
    ++n[static_cast<std::size_t>(j)];
  }
  return out;
}

/// The annulus index set C(eps) = {N : |kappa - |k_perp + 2 pi N_perp|| < eps kappa},
/// intersected with the search box |n_j| <= search_bound. The set is an
/// infinite cylinder along e, so the box also truncates the parallel
/// direction; the completeness check below covers the transverse annulus only.
inline std::vector<LatticeIndex> set_C_eps(const Lattice& lat, const Eigen::VectorXd& e,
                                           const Eigen::VectorXd& k, double kappa,
                                           double eps, int search_bound) {
  if (!(kappa > 0.0)) throw std::invalid_argument("set_C_eps: kappa must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("set_C_eps: eps must lie in (0,1)");
  const SplitVector ks = split(k, e);
  const double outer = (1.0 + eps) * kappa + ks.perpendicular.norm();
  // Conservative: lattice points with |N| <= R have |n|_inf <= R / sigma_min(dual).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(lat.dual());
  const double smin = svd.singularValues()(lat.dim() - 1);
  const double needed = outer / (kTwoPi * smin);
  if (static_cast<double>(search_bound) < needed)
    throw std::runtime_error("set_C_eps: search box provably too small for the annulus (need |n| <= " +
                             std::to_string(needed) + ")");
  std::vector<LatticeIndex> out;
  for (auto& idx : enumerate_box(lat, search_bound)) {
    const Eigen::VectorXd y = ks.perpendicular + kTwoPi * split(idx.point, e).perpendicular;
    if (std::abs(kappa - y.norm()) < eps * kappa) out.push_back(idx);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shells of the weight G^-.

/// Parameters fixing the shell decomposition K_1, ..., K_l of K(h^l), where
/// K(b) = {N : G^-_N(k;kappa) <= b}. Membership is decided by the weight
/// G^-; the sets are finite because G^- <= b bounds both the parallel
/// component and the distance of the transverse component from kappa.
class ShellSpec {
 public:
  ShellSpec(const Lattice& lat, const Eigen::VectorXd& e, const Eigen::VectorXd& k,
            double kappa, double h, int l)
      : lat_(lat), e_(e), k_(k), kappa_(kappa), h_(h), l_(l) {
    if (l < 1) throw std::invalid_argument("ShellSpec: l must be >= 1");
    if (!(h >= 64.0)) throw std::invalid_argument("ShellSpec: h must be >= 64");
    if (!(h > kTwoPi * lat.dual_diameter()))
      throw std::invalid_argument("ShellSpec: h must exceed 2*pi*d(K*)");
    if (!(2.0 * std::pow(h, l) <= kappa))
      throw std::invalid_argument("ShellSpec: 2 h^l <= kappa violated");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lat.dual());
    dual_sigma_min_ = svd.singularValues()(lat.dim() - 1);
  }

  const Lattice& lattice() const { return lat_; }
  double kappa() const { return kappa_; }
  double h() const { return h_; }
  int l() const { return l_; }
  const Eigen::VectorXd& k() const { return k_; }
  const Eigen::VectorXd& e() const { return e_; }

  /// G^- from y = k + 2 pi N given as a raw coordinate array.
  double g_minus_raw(const double* y) const {
    const int d = lat_.dim();
    double ypar = 0.0, ysq = 0.0;
    for (int i = 0; i < d; ++i) {
      ypar += y[i] * e_(i);
      ysq += y[i] * y[i];
    }
    const double perp = std::sqrt(std::max(0.0, ysq - ypar * ypar));
    const double a = kappa_ - perp;
    return std::sqrt(ypar * ypar + a * a);
  }

  double g_minus(const Eigen::VectorXd& point) const {
    Eigen::VectorXd y = k_ + kTwoPi * point;
    return g_minus_raw(y.data());
  }

  /// Shell index of a dual point: 1..l inside K(h^l), 0 outside.
  int shell_of(const Eigen::VectorXd& point) const {
    const double g = g_minus(point);
    if (g <= h_) return 1;
    for (int mu = 2; mu <= l_; ++mu)
      if (g <= std::pow(h_, mu)) return mu;
    return 0;
  }

  /// Conservative per-axis index bound for scanning K(b).
  int scan_bound(double b) const {
    const double r = (k_.norm() + kappa_ + b) / (kTwoPi * dual_sigma_min_);
    return static_cast<int>(std::ceil(r));
  }

  double dual_sigma_min() const { return dual_sigma_min_; }

 private:
  Lattice lat_;
  Eigen::VectorXd e_, k_;
  double kappa_, h_;
  int l_;
  double dual_sigma_min_;
};

namespace detail {

// Per-axis scan ranges for lattice points with G^-(N) <= b: the parallel
// component obeys |k_par + 2 pi N_par| <= b and the transverse one
// |k_perp + 2 pi N_perp| <= kappa + b, so |n_j| <= r_par |E_j par| + r_perp |E_j perp|.
inline std::vector<int> axis_bounds(const ShellSpec& spec, double b) {
  const auto& lat = spec.lattice();
  const int d = lat.dim();
  const double r_par = (b + std::abs(spec.k().dot(spec.e()))) / kTwoPi;
  const double r_perp =
      (spec.kappa() + b + (spec.k() - spec.k().dot(spec.e()) * spec.e()).norm()) / kTwoPi;
  std::vector<int> bound(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd ej = lat.basis_vector(j);
    const double epar = std::abs(ej.dot(spec.e()));
    const double eperp = (ej - ej.dot(spec.e()) * spec.e()).norm();
    bound[static_cast<std::size_t>(j)] =
        static_cast<int>(std::ceil(r_par * epar + r_perp * eperp + 1e-9));
  }
  return bound;
}

// Odometer scan over |n_j| <= bound_j calling visit(y) with y = k + 2 pi N.
// The inner axis advances incrementally; no allocation in the hot loop.
template <typename Visit>
inline void scan_box(const ShellSpec& spec, const std::vector<int>& bound, Visit&& visit) {
  const auto& lat = spec.lattice();
  const int d = lat.dim();
  std::vector<double> step(static_cast<std::size_t>(d) * d);  // step[j*d+i] = 2 pi (E*_j)_i
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) step[static_cast<std::size_t>(j) * d + i] = kTwoPi * lat.dual()(i, j);
  std::vector<int> n(static_cast<std::size_t>(d - 1));
  for (int j = 0; j + 1 < d; ++j) n[static_cast<std::size_t>(j)] = -bound[static_cast<std::size_t>(j)];
  std::vector<double> y(static_cast<std::size_t>(d));
  const int bl = bound[static_cast<std::size_t>(d - 1)];
  const double* last = &step[static_cast<std::size_t>(d - 1) * d];
  while (true) {
    // y at (n, -bl)
    for (int i = 0; i < d; ++i) {
      double acc = spec.k()(i) - bl * last[i];
      for (int j = 0; j + 1 < d; ++j) acc += n[static_cast<std::size_t>(j)] * step[static_cast<std::size_t>(j) * d + i];
      y[static_cast<std::size_t>(i)] = acc;
    }
    for (int v = -bl; v <= bl; ++v) {
      visit(y.data());
      for (int i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] += last[i];
    }
    int j = d - 2;
    while (j >= 0 && n[static_cast<std::size_t>(j)] == bound[static_cast<std::size_t>(j)])
      n[static_cast<std::size_t>(j--)] = -bound[static_cast<std::size_t>(j)];
    if (j < 0) break;
    ++n[static_cast<std::size_t>(j)];
  }
}

}  // namespace detail

/// Explicit shell partition {K_1, ..., K_l}; only viable at small scales.
/// `search_bound` = 0 sizes the box conservatively from the shell parameters.
inline std::vector<std::vector<LatticeIndex>> materialize_shells(const ShellSpec& spec,
                                                                 int search_bound = 0) {
  const double b = std::pow(spec.h(), spec.l());
  const int need = spec.scan_bound(b);
  if (search_bound == 0) search_bound = need;
  if (search_bound < need)
    throw std::runtime_error("materialize_shells: search box provably too small (need |n| <= " +
                             std::to_string(need) + ")");
  std::vector<std::vector<LatticeIndex>> shells(static_cast<std::size_t>(spec.l()));
  for (auto& idx : enumerate_box(spec.lattice(), search_bound)) {
    const int mu = spec.shell_of(idx.point);
    if (mu > 0) shells[static_cast<std::size_t>(mu - 1)].push_back(idx);
  }
  return shells;
}

/// #K(b) without materializing the set.
inline std::size_t count_K(const ShellSpec& spec, double b) {
  if (!(b >= 0.0 && b < spec.kappa())) throw std::invalid_argument("count_K: need 0 <= b < kappa");
  std::size_t count = 0;
  detail::scan_box(spec, detail::axis_bounds(spec, b), [&](const double* y) {
    if (spec.g_minus_raw(y) <= b) ++count;
  });
  return count;
}

/// S_{mu nu}(n): number of N in K_mu with N - n in K_nu. Lazy bounded scan;
/// the analytic zero conditions short-circuit distant shifts.
inline std::size_t count_S(const ShellSpec& spec, int mu, int nu, const LatticeIndex& shift) {
  if (mu < 1 || mu > spec.l() || nu < 1 || nu > spec.l())
    throw std::invalid_argument("count_S: shell index out of range");
  const int d = spec.lattice().dim();
  const double hmu = std::pow(spec.h(), mu);
  const double hnu = std::pow(spec.h(), nu);
  const SplitVector ns = split(shift.point, spec.e());
  if (kTwoPi * ns.perpendicular.norm() > 2.0 * spec.kappa() + hmu + hnu) return 0;
  if (kTwoPi * ns.parallel.norm() > hmu + hnu) return 0;

  const double lo_mu = (mu == 1) ? -1.0 : std::pow(spec.h(), mu - 1);
  const double lo_nu = (nu == 1) ? -1.0 : std::pow(spec.h(), nu - 1);
  std::vector<double> sh(static_cast<std::size_t>(d)), y2(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) sh[static_cast<std::size_t>(i)] = kTwoPi * shift.point(i);
  std::size_t count = 0;
  detail::scan_box(spec, detail::axis_bounds(spec, hmu), [&](const double* y) {
    const double g = spec.g_minus_raw(y);
    if (g <= lo_mu || g > hmu) return;
    for (int i = 0; i < d; ++i) y2[static_cast<std::size_t>(i)] = y[i] - sh[static_cast<std::size_t>(i)];
    const double g2 = spec.g_minus_raw(y2.data());
    if (g2 > lo_nu && g2 <= hnu) ++count;
  });
  return count;
}

/// Materialized-partition overload: O(|K_mu|) membership scan.
inline std::size_t count_S(const ShellSpec& spec,
                           const std::vector<std::vector<LatticeIndex>>& shells, int mu, int nu,
                           const LatticeIndex& shift) {
  if (mu < 1 || mu > static_cast<int>(shells.size()) || nu < 1 ||
      nu > static_cast<int>(shells.size()))
    throw std::invalid_argument("count_S: shell index out of range");
  const double hnu = std::pow(spec.h(), nu);
  const double lo_nu = (nu == 1) ? -1.0 : std::pow(spec.h(), nu - 1);
  std::size_t count = 0;
  for (const auto& idx : shells[static_cast<std::size_t>(mu - 1)]) {
    const double g2 = spec.g_minus(idx.point - shift.point);
    if (g2 > lo_nu && g2 <= hnu) ++count;
  }
  return count;
}

}  // namespace diracbloch
