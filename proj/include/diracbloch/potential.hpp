#pragma once

// Periodic fields as finite Fourier series, the sampled-grid carrier used
// for quadrature, mollifiers, the measure-averaged potential, and the
// explicit constants attached to conditions (A_0)-(A_2).

#include "diracbloch/lattice.hpp"
#include "diracbloch/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace diracbloch {

enum class ValueShape { scalar, vector, matrix };

/// Trigonometric polynomial with values in C, C^d, or M_M: finitely many
/// Fourier coefficients indexed by integer dual coordinates. A "hermitian
/// field" (real scalar / real vector / Hermitian matrix values) satisfies
/// coeff(-N) = conj(coeff(N)), with the adjoint for matrix values.
class FourierPotential {
 public:
  FourierPotential(const Lattice& lat, ValueShape shape, int value_dim, bool hermitian_field)
      : lattice_(lat), shape_(shape), hermitian_field_(hermitian_field) {
    switch (shape) {
      case ValueShape::scalar: rows_ = 1; cols_ = 1; break;
      case ValueShape::vector: rows_ = value_dim; cols_ = 1; break;
      case ValueShape::matrix: rows_ = value_dim; cols_ = value_dim; break;
    }
  }

  const Lattice& lattice() const { return lattice_; }
  ValueShape shape() const { return shape_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool hermitian_field() const { return hermitian_field_; }
  const std::map<std::vector<int>, Eigen::MatrixXcd>& coeffs() const { return coeffs_; }
  std::size_t coefficient_count() const { return coeffs_.size(); }

  void set_coeff(const std::vector<int>& n, const Eigen::MatrixXcd& value) {
    if (value.rows() != rows_ || value.cols() != cols_)
      throw std::invalid_argument("FourierPotential: coefficient shape mismatch");
    if (static_cast<int>(n.size()) != lattice_.dim())
      throw std::invalid_argument("FourierPotential: index dimension mismatch");
    coeffs_[n] = value;
  }
  void set_scalar_coeff(const std::vector<int>& n, Complex z) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = z;
    set_coeff(n, m);
  }

  bool has(const std::vector<int>& n) const { return coeffs_.count(n) > 0; }

  Eigen::MatrixXcd coeff(const std::vector<int>& n) const {
    auto it = coeffs_.find(n);
    if (it == coeffs_.end()) return Eigen::MatrixXcd::Zero(rows_, cols_);
    return it->second;
  }

  /// Pointwise value sum_N c_N e^{2 pi i (N,x)}.
  Eigen::MatrixXcd value_at(const Eigen::VectorXd& x) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (const auto& [n, c] : coeffs_) {
      const double phase = kTwoPi * lattice_.dual_point(n).dot(x);
      out += c * Complex(std::cos(phase), std::sin(phase));
    }
    return out;
  }

  /// Max over stored indices of the symmetry defect of a real/Hermitian
  /// field: coeff(-N) must equal conj(coeff(N)) for scalar and vector
  /// values and adjoint(coeff(N)) for matrix values.
  double hermitian_symmetry_residual() const {
    double r = 0.0;
    for (const auto& [n, c] : coeffs_) {
      std::vector<int> neg(n.size());
      for (std::size_t j = 0; j < n.size(); ++j) neg[j] = -n[j];
      Eigen::MatrixXcd expect;
      if (shape_ == ValueShape::matrix) expect = c.adjoint();
      else expect = c.conjugate();
      r = std::max(r, (coeff(neg) - expect).norm());
    }
    return r;
  }

  /// Drops coefficients with norm below tol (keeps exports and support
  /// checks exact after multiplier operations).
  void prune(double tol = 0.0) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (it->second.norm() <= tol) it = coeffs_.erase(it);
      else ++it;
    }
  }

 private:
  Lattice lattice_;
  ValueShape shape_;
  int rows_, cols_;
  bool hermitian_field_;
  std::map<std::vector<int>, Eigen::MatrixXcd> coeffs_;
};

// ---------------------------------------------------------------------------
// Sampled fields on a uniform grid over the fundamental domain K.

class SampledField {
 public:
  SampledField(const Lattice& lat, std::vector<int> res, ValueShape shape, int value_dim)
      : lattice_(lat), res_(std::move(res)), shape_(shape) {
    if (static_cast<int>(res_.size()) != lat.dim())
      throw std::invalid_argument("SampledField: resolution list must have one entry per axis");
    for (int r : res_)
      if (r < 2) throw std::invalid_argument("SampledField: grid sizes must be >= 2");
    switch (shape) {
      case ValueShape::scalar: rows_ = 1; cols_ = 1; break;
      case ValueShape::vector: rows_ = value_dim; cols_ = 1; break;
      case ValueShape::matrix: rows_ = value_dim; cols_ = value_dim; break;
    }
    count_ = 1;
    for (int r : res_) count_ *= static_cast<std::size_t>(r);
    data_.assign(count_ * static_cast<std::size_t>(rows_ * cols_), Complex(0.0, 0.0));
  }

  const Lattice& lattice() const { return lattice_; }
  const std::vector<int>& resolution() const { return res_; }
  ValueShape shape() const { return shape_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return count_; }
  double cell_volume() const { return lattice_.cell_volume() / static_cast<double>(count_); }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(res_.size());
    for (int a = static_cast<int>(res_.size()) - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(res_[static_cast<std::size_t>(a)]));
      flat /= static_cast<std::size_t>(res_[static_cast<std::size_t>(a)]);
    }
    return idx;
  }

  /// Grid node x = sum_j (i_j / res_j) E_j.
  Eigen::VectorXd grid_point(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(lattice_.dim());
    for (int j = 0; j < lattice_.dim(); ++j)
      x += (static_cast<double>(idx[static_cast<std::size_t>(j)]) /
            static_cast<double>(res_[static_cast<std::size_t>(j)])) *
           lattice_.basis_vector(j);
    return x;
  }

  Eigen::MatrixXcd value(std::size_t flat) const {
    Eigen::MatrixXcd m(rows_, cols_);
    const Complex* p = &data_[flat * static_cast<std::size_t>(rows_ * cols_)];
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) m(r, c) = p[r * cols_ + c];
    return m;
  }

  void set_value(std::size_t flat, const Eigen::MatrixXcd& m) {
    Complex* p = &data_[flat * static_cast<std::size_t>(rows_ * cols_)];
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) p[r * cols_ + c] = m(r, c);
  }

  void set_scalar(std::size_t flat, Complex z) { data_[flat] = z; }
  Complex scalar(std::size_t flat) const { return data_[flat]; }

  /// Pointwise norm: |.| for scalars, Euclidean for vectors, operator norm
  /// for matrices.
  double norm_at(std::size_t flat) const {
    const std::size_t stride = static_cast<std::size_t>(rows_ * cols_);
    const Complex* p = &data_[flat * stride];
    if (shape_ == ValueShape::scalar) return std::abs(p[0]);
    if (shape_ == ValueShape::vector) {
      double s = 0.0;
      for (int r = 0; r < rows_; ++r) s += std::norm(p[r]);
      return std::sqrt(s);
    }
    return operator_norm(value(flat));
  }

  std::vector<double> norms() const {
    std::vector<double> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = norm_at(i);
    return out;
  }

  std::vector<Complex>& raw() { return data_; }
  const std::vector<Complex>& raw() const { return data_; }

 private:
  Lattice lattice_;
  std::vector<int> res_;
  ValueShape shape_;
  int rows_ = 1, cols_ = 1;
  std::size_t count_ = 0;
  std::vector<Complex> data_;
};

/// Samples a trigonometric polynomial on a uniform grid.
inline SampledField synthesize(const FourierPotential& pot, const std::vector<int>& res) {
  SampledField out(pot.lattice(), res, pot.shape(), pot.rows());
  const int d = pot.lattice().dim();
  for (const auto& [n, c] : pot.coeffs()) {
    for (int j = 0; j < d; ++j) {
      const int r = res[static_cast<std::size_t>(j)];
      const int half = r / 2;
      // centered frequency must fit inside the grid's Nyquist range
      if (n[static_cast<std::size_t>(j)] < -half || n[static_cast<std::size_t>(j)] > (r - 1) / 2)
        throw std::invalid_argument("synthesize: grid too coarse for coefficient support");
    }
  }
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto idx = out.multi_index(flat);
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(pot.rows(), pot.cols());
    for (const auto& [n, c] : pot.coeffs()) {
      double ph = 0.0;
      for (int j = 0; j < d; ++j)
        ph += static_cast<double>(n[static_cast<std::size_t>(j)]) *
              static_cast<double>(idx[static_cast<std::size_t>(j)]) /
              static_cast<double>(res[static_cast<std::size_t>(j)]);
      v += c * Complex(std::cos(kTwoPi * ph), std::sin(kTwoPi * ph));
    }
    out.set_value(flat, v);
  }
  return out;
}

/// Scalar field from a pointwise evaluator f(x).
inline SampledField sample_scalar(const Lattice& lat, const std::vector<int>& res,
                                  const std::function<double(const Eigen::VectorXd&)>& f) {
  SampledField out(lat, res, ValueShape::scalar, 1);
  for (std::size_t flat = 0; flat < out.size(); ++flat)
    out.set_scalar(flat, Complex(f(out.grid_point(flat)), 0.0));
  return out;
}

namespace detail {

// In-place DFT along one axis of the row-major sample cube. sign = -1 gives
// the analysis transform (with 1/r normalization), +1 the synthesis one.
inline void dft_axis(std::vector<Complex>& data, const std::vector<int>& res, int comps,
                     int axis, int sign) {
  const int d = static_cast<int>(res.size());
  const int r = res[static_cast<std::size_t>(axis)];
  std::vector<Complex> twiddle(static_cast<std::size_t>(r) * r);
  for (int m = 0; m < r; ++m)
    for (int i = 0; i < r; ++i) {
      const double ph = sign * kTwoPi * static_cast<double>(m) * static_cast<double>(i) / r;
      twiddle[static_cast<std::size_t>(m) * r + i] = Complex(std::cos(ph), std::sin(ph));
    }
  std::size_t inner = 1;
  for (int a = axis + 1; a < d; ++a) inner *= static_cast<std::size_t>(res[static_cast<std::size_t>(a)]);
  inner *= static_cast<std::size_t>(comps);
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(res[static_cast<std::size_t>(a)]);
  std::vector<Complex> line(static_cast<std::size_t>(r));
  const double scale = (sign < 0) ? 1.0 / static_cast<double>(r) : 1.0;
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t in = 0; in < inner; ++in) {
      Complex* base = &data[(o * static_cast<std::size_t>(r)) * inner + in];
      for (int m = 0; m < r; ++m) {
        Complex acc(0.0, 0.0);
        const Complex* tw = &twiddle[static_cast<std::size_t>(m) * r];
        for (int i = 0; i < r; ++i) acc += tw[i] * base[static_cast<std::size_t>(i) * inner];
        line[static_cast<std::size_t>(m)] = acc * scale;
      }
      for (int m = 0; m < r; ++m) base[static_cast<std::size_t>(m) * inner] = line[static_cast<std::size_t>(m)];
    }
}

}  // namespace detail

/// Discrete Fourier analysis: coefficients over the grid's centered
/// frequency box. Sets *nyquist_touched when even-size boundary frequencies
/// carry weight above 1e-12 of the field scale (aliasing warning).
inline FourierPotential analyze(const SampledField& f, bool* nyquist_touched = nullptr) {
  const int d = f.lattice().dim();
  const auto& res = f.resolution();
  std::vector<Complex> data = f.raw();
  const int comps = f.rows() * f.cols();
  for (int a = 0; a < d; ++a) detail::dft_axis(data, res, comps, a, -1);

  FourierPotential out(f.lattice(), f.shape(), f.rows(), false);
  double scale = 0.0;
  for (const auto& z : f.raw()) scale = std::max(scale, std::abs(z));
  bool touched = false;
  const std::size_t count = f.size();
  for (std::size_t flat = 0; flat < count; ++flat) {
    const auto idx = f.multi_index(flat);
    std::vector<int> n(static_cast<std::size_t>(d));
    bool on_boundary = false;
    for (int j = 0; j < d; ++j) {
      const int r = res[static_cast<std::size_t>(j)];
      int m = idx[static_cast<std::size_t>(j)];
      if (m > (r - 1) / 2) m -= r;  // centered range
      n[static_cast<std::size_t>(j)] = m;
      if (r % 2 == 0 && m == -r / 2) on_boundary = true;
    }
    Eigen::MatrixXcd c(f.rows(), f.cols());
    const Complex* p = &data[flat * static_cast<std::size_t>(comps)];
    for (int r = 0; r < f.rows(); ++r)
      for (int cc = 0; cc < f.cols(); ++cc) c(r, cc) = p[r * f.cols() + cc];
    if (c.norm() > 1e-14 * std::max(1.0, scale)) {
      if (on_boundary && c.norm() > 1e-12 * std::max(1.0, scale)) touched = true;
      out.set_coeff(n, c);
    }
  }
  if (nyquist_touched) *nyquist_touched = touched;
  return out;
}

// ---------------------------------------------------------------------------
// Averaging measures.

/// Even Borel measure with mu_hat = 1 on (-h, h). Two families: the Dirac
/// measure (mu_hat identically 1) and a de la Vallee Poussin regularization
/// whose transform is the trapezoid equal to 1 on [-h, h] and supported on
/// [-2h, 2h]; its density is (cos(ht) - cos(2ht)) / (pi h t^2).
class AveragingMeasure {
 public:
  enum class Kind { dirac, vallee_poussin };

  static AveragingMeasure dirac() {
    AveragingMeasure m;
    m.kind_ = Kind::dirac;
    m.h_ = std::numeric_limits<double>::infinity();
    m.total_variation_ = 1.0;
    return m;
  }

  static AveragingMeasure vallee_poussin(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("vallee_poussin: h must be positive");
    AveragingMeasure m;
    m.kind_ = Kind::vallee_poussin;
    m.h_ = h;
    m.total_variation_ = vp_total_variation();
    return m;
  }

  Kind kind() const { return kind_; }
  double plateau_halfwidth() const { return h_; }
  double total_variation() const { return total_variation_; }

  double fourier(double p) const {
    if (kind_ == Kind::dirac) return 1.0;
    const double a = std::abs(p);
    if (a <= h_) return 1.0;
    if (a >= 2.0 * h_) return 0.0;
    return (2.0 * h_ - a) / h_;
  }

 private:
  // h-independent: substitute u = h t in integral of |density|.
  static double vp_total_variation() {
    static const double value = [] {
      // (1/pi) int_R |cos u - cos 2u| / u^2 du, Simpson on [0, U] doubled,
      // series expansion near 0 (integrand -> 3/2).
      auto f = [](double u) {
        if (std::abs(u) < 1e-6) return 1.5 - 2.625 * u * u;  // (3/2) - (21/8) u^2
        return std::abs(std::cos(u) - std::cos(2.0 * u)) / (u * u);
      };
      const double U = 40000.0;
      const std::size_t n = 4'000'000;  // even
      const double dh = U / static_cast<double>(n);
      double s = f(0.0) + f(U);
      for (std::size_t i = 1; i < n; ++i) s += f(dh * static_cast<double>(i)) * ((i % 2) ? 4.0 : 2.0);
      return 2.0 * (s * dh / 3.0) / std::numbers::pi;
    }();
    return value;
  }

  Kind kind_ = Kind::dirac;
  double h_ = 0.0;
  double total_variation_ = 1.0;
};

// ---------------------------------------------------------------------------
// Averaged potential and condition (A_2).

/// Measure-and-line averaged magnetic potential: the Fourier multiplier
/// keeping only (N,gamma) = 0 modes, scaled by mu_hat(2 pi (N, et)).
inline FourierPotential averaged_potential(const FourierPotential& A, const LatticeVector& gamma,
                                           const AveragingMeasure& mu, const Eigen::VectorXd& et) {
  if (A.shape() != ValueShape::vector)
    throw std::invalid_argument("averaged_potential: vector-valued potential expected");
  if (std::abs(et.dot(gamma.vec)) > 1e-10 * std::max(1.0, gamma.vec.norm()))
    throw std::invalid_argument("averaged_potential: et must be orthogonal to gamma");
  FourierPotential out(A.lattice(), ValueShape::vector, A.rows(), A.hermitian_field());
  for (const auto& [n, c] : A.coeffs()) {
    LatticeIndex idx = A.lattice().index(n);
    if (dual_pairing(idx, gamma) != 0) continue;  // annihilated by the line average
    const double m = mu.fourier(kTwoPi * idx.point.dot(et));
    if (m != 0.0) out.set_coeff(n, m * c);
  }
  return out;
}

/// Dirac-measure overload: the average is independent of et.
inline FourierPotential averaged_potential(const FourierPotential& A, const LatticeVector& gamma) {
  Eigen::VectorXd et = Eigen::VectorXd::Zero(A.lattice().dim());
  // any unit vector orthogonal to gamma works; build one deterministically
  const Eigen::VectorXd e = gamma.vec / gamma.vec.norm();
  for (int j = 0; j < A.lattice().dim(); ++j) {
    Eigen::VectorXd cand = Eigen::VectorXd::Unit(A.lattice().dim(), j);
    cand -= cand.dot(e) * e;
    if (cand.norm() > 1e-8) {
      et = cand / cand.norm();
      break;
    }
  }
  return averaged_potential(A, gamma, AveragingMeasure::dirac(), et);
}

/// Deterministic orthonormal basis of the orthogonal complement of e
/// (columns), via Gram-Schmidt over canonical vectors; signs fixed so the
/// largest-magnitude entry of each column is positive.
inline Eigen::MatrixXd orthonormal_complement(const Eigen::VectorXd& e) {
  const int d = static_cast<int>(e.size());
  Eigen::MatrixXd out(d, d - 1);
  int found = 0;
  std::vector<Eigen::VectorXd> accepted;
  accepted.push_back(e);
  for (int j = 0; j < d && found < d - 1; ++j) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, j);
    for (const auto& a : accepted) v -= v.dot(a) * a;
    if (v.norm() < 1e-8) continue;
    v /= v.norm();
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    accepted.push_back(v);
    out.col(found++) = v;
  }
  if (found != d - 1) throw std::runtime_error("orthonormal_complement: construction failed");
  return out;
}

struct A2Report {
  double max_abs = 0.0;      // grid maximum of |A~(et; x)|
  double theta_tilde = 0.0;  // max |A~| * |gamma| / pi
  bool pass = false;         // theta_tilde < 1
};

/// Grid maximization of |A~(et; x)| over x in K and et in S_{d-2}(gamma).
/// Reported values are lower bounds of the true maxima.
inline A2Report check_A2(const FourierPotential& A, const LatticeVector& gamma,
                         const AveragingMeasure& mu, int x_res, int sphere_res) {
  if (A.shape() != ValueShape::vector)
    throw std::invalid_argument("check_A2: vector-valued potential expected");
  const int d = A.lattice().dim();
  std::vector<int> zero(static_cast<std::size_t>(d), 0);
  if (A.coeff(zero).norm() > 1e-12)
    throw std::invalid_argument("check_A2: condition (A_0) violated, A_0 must vanish");
  const Eigen::VectorXd e = gamma.vec / gamma.vec.norm();
  const Eigen::MatrixXd comp = orthonormal_complement(e);  // d x (d-1)

  // hyperspherical product grid on S_{d-2} inside the complement
  std::vector<Eigen::VectorXd> directions;
  if (d == 2) {
    directions.push_back(comp.col(0));
    directions.push_back(-comp.col(0));
  } else {
    const int angles = d - 2;
    std::vector<int> idx(static_cast<std::size_t>(angles), 0);
    while (true) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(d - 1);
      double s = 1.0;
      for (int a = 0; a < angles; ++a) {
        const double span = (a == angles - 1) ? kTwoPi : std::numbers::pi;
        const double th = span * (static_cast<double>(idx[static_cast<std::size_t>(a)]) + 0.5) /
                          static_cast<double>(sphere_res);
        u(a) = s * std::cos(th);
        s *= std::sin(th);
      }
      u(d - 2) = s;
      directions.push_back(comp * u);
      int a = angles - 1;
      while (a >= 0 && idx[static_cast<std::size_t>(a)] == sphere_res - 1)
        idx[static_cast<std::size_t>(a--)] = 0;
      if (a < 0) break;
      ++idx[static_cast<std::size_t>(a)];
    }
  }

  A2Report rep;
  SampledField probe(A.lattice(), std::vector<int>(static_cast<std::size_t>(d), x_res),
                     ValueShape::scalar, 1);
  for (const auto& et : directions) {
    const FourierPotential avg = averaged_potential(A, gamma, mu, et);
    for (std::size_t flat = 0; flat < probe.size(); ++flat) {
      const Eigen::VectorXd x = probe.grid_point(flat);
      const Eigen::MatrixXcd v = avg.value_at(x);
      rep.max_abs = std::max(rep.max_abs, v.norm());
    }
  }
  rep.theta_tilde = rep.max_abs * gamma.vec.norm() / std::numbers::pi;
  rep.pass = rep.theta_tilde < 1.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Line quadratures and explicit constants.

/// max over an x-grid of (int_0^1 ||W(x - xi gamma)||^2 dxi)^(1/2); midpoint
/// rule in xi. A lower bound of the essential supremum.
inline double directional_norm(const FourierPotential& pot, const LatticeVector& gamma,
                               int x_res, int xi_samples) {
  if (gamma.vec.norm() == 0.0) throw std::invalid_argument("directional_norm: gamma must be nonzero");
  const int d = pot.lattice().dim();
  SampledField probe(pot.lattice(), std::vector<int>(static_cast<std::size_t>(d), x_res),
                     ValueShape::scalar, 1);
  double best = 0.0;
  for (std::size_t flat = 0; flat < probe.size(); ++flat) {
    const Eigen::VectorXd x = probe.grid_point(flat);
    double acc = 0.0;
    for (int s = 0; s < xi_samples; ++s) {
      const double xi = (static_cast<double>(s) + 0.5) / static_cast<double>(xi_samples);
      const Eigen::MatrixXcd v = pot.value_at(x - xi * gamma.vec);
      const double nv = (pot.shape() == ValueShape::matrix) ? operator_norm(v) : v.norm();
      acc += nv * nv;
    }
    best = std::max(best, acc / static_cast<double>(xi_samples));
  }
  return std::sqrt(best);
}

/// beta_{gamma,sigma}(R; W) = v(K) sup over stored N with 2 pi |N_perp| >= R
/// of (2 pi |N_perp|)^(2-sigma) (2 pi |N|)^sigma ||W_N||; 0^0 = 1.
inline double beta_sigma(const FourierPotential& pot, const LatticeVector& gamma, double sigma,
                         double R) {
  if (!(sigma >= 0.0 && sigma <= 2.0)) throw std::invalid_argument("beta_sigma: sigma in [0,2] expected");
  if (!(R >= 0.0)) throw std::invalid_argument("beta_sigma: R >= 0 expected");
  const Eigen::VectorXd e = gamma.vec / gamma.vec.norm();
  auto pw = [](double base, double p) { return p == 0.0 ? 1.0 : std::pow(base, p); };
  double sup = 0.0;
  for (const auto& [n, c] : pot.coeffs()) {
    const Eigen::VectorXd N = pot.lattice().dual_point(n);
    const double perp = kTwoPi * split(N, e).perpendicular.norm();
    if (perp < R) continue;
    const double full = kTwoPi * N.norm();
    const double nrm = (pot.shape() == ValueShape::matrix) ? operator_norm(c) : c.norm();
    sup = std::max(sup, pw(perp, 2.0 - sigma) * pw(full, sigma) * nrm);
  }
  return pot.lattice().cell_volume() * sup;
}

/// Admissible constant for condition (A~_1):
/// C* = 4 sqrt(pi) (ceil(2/|gamma|) |gamma|)^(1/2) (max_y int_0^1 |A(y - xi gamma)|^2 dxi)^(1/2).
inline double c_star_bound(const FourierPotential& A, const LatticeVector& gamma, int x_res,
                           int xi_samples) {
  if (gamma.vec.norm() == 0.0) throw std::invalid_argument("c_star_bound: gamma must be nonzero");
  const double glen = gamma.vec.norm();
  const double bracket = -std::floor(-2.0 / glen) * glen;
  const double line = directional_norm(A, gamma, x_res, xi_samples);
  return 4.0 * std::sqrt(std::numbers::pi) * std::sqrt(bracket) * line;
}

/// Admissible constant in the parallel-derivative bound on |A| phi:
/// Q = tau/(4|gamma|^2) + (8|gamma|^2/tau) max_x int_0^1 |A(x - xi gamma)|^2 dxi.
inline double q_constant(double tau, const FourierPotential& A, const LatticeVector& gamma,
                         int x_res, int xi_samples) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("q_constant: tau in (0,1) expected");
  const double g2 = gamma.vec.squaredNorm();
  const double line = directional_norm(A, gamma, x_res, xi_samples);
  return tau / (4.0 * g2) + (8.0 * g2 / tau) * line * line;
}

/// Invertibility constant C_2 in (0,1) and C_1 = pi C_2 / (2 |gamma|).
inline double c2_constant(double tau, double Q, double theta_tilde, double mu_norm,
                          double c_star_h, double gamma_len) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("c2_constant: tau in (0,1) expected");
  if (!(Q >= 0.0)) throw std::invalid_argument("c2_constant: Q >= 0 expected");
  if (!(theta_tilde >= 0.0 && theta_tilde < 1.0))
    throw std::invalid_argument("c2_constant: theta_tilde in [0,1) expected");
  if (!(mu_norm >= 1.0)) throw std::invalid_argument("c2_constant: ||mu|| >= 1 expected");
  if (!(c_star_h >= 0.0)) throw std::invalid_argument("c2_constant: C*(h) >= 0 expected");
  if (!(gamma_len > 0.0)) throw std::invalid_argument("c2_constant: |gamma| > 0 expected");
  const double denom = 1.0 + Q / (1.0 - theta_tilde) * gamma_len / std::numbers::pi *
                                 std::exp(mu_norm * c_star_h);
  return (1.0 - tau) / denom;
}

inline double c1_constant(double c2, double gamma_len) {
  return 0.5 * std::numbers::pi / gamma_len * c2;
}

// ---------------------------------------------------------------------------
// Mollifiers.

/// Radial plateau profile shared by the transverse and full-dimension
/// mollifier transforms: 1 on [0, 1/2], C^2 descent to 0 at 1, 0 beyond.
inline double plateau_profile(double u) {
  u = std::abs(u);
  if (u <= 0.5) return 1.0;
  if (u >= 1.0) return 0.0;
  return 1.0 - smoothstep5(2.0 * u - 1.0);
}

/// Transverse mollifier {R}: coefficient multiplied by the plateau at
/// 2 pi |N_perp| / R; exact zero once 2 pi |N_perp| >= R.
inline FourierPotential mollify_transverse(const FourierPotential& pot, const Eigen::VectorXd& e,
                                           double R) {
  if (!(R > 0.0)) throw std::invalid_argument("mollify_transverse: R must be positive");
  FourierPotential out(pot.lattice(), pot.shape(), pot.rows(), pot.hermitian_field());
  for (const auto& [n, c] : pot.coeffs()) {
    const Eigen::VectorXd N = pot.lattice().dual_point(n);
    const double u = kTwoPi * split(N, e).perpendicular.norm() / R;
    const double w = plateau_profile(u);
    if (w != 0.0) out.set_coeff(n, w * c);
  }
  return out;
}

/// Full-dimension mollifier {r}: plateau at 2 pi |N| / r; zero for 2 pi |N| >= r.
inline FourierPotential mollify_full(const FourierPotential& pot, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("mollify_full: r must be positive");
  FourierPotential out(pot.lattice(), pot.shape(), pot.rows(), pot.hermitian_field());
  for (const auto& [n, c] : pot.coeffs()) {
    const Eigen::VectorXd N = pot.lattice().dual_point(n);
    const double w = plateau_profile(kTwoPi * N.norm() / r);
    if (w != 0.0) out.set_coeff(n, w * c);
  }
  return out;
}

}  // namespace diracbloch
