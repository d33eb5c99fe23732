#include <catch2/catch.hpp>

#include "diracbloch/gauge.hpp"
#include "diracbloch/presets.hpp"
#include "diracbloch/random.hpp"

using namespace diracbloch;

namespace {
const Lattice lat3 = Lattice::cubic(3);
const CliffordSystem cliff3 = CliffordSystem::build(3);

FourierPotential random_trig_vector_potential(Rng& rng, int modes) {
  FourierPotential A(lat3, ValueShape::vector, 3, true);
  for (int m = 0; m < modes; ++m) {
    std::vector<int> n = {static_cast<int>(rng.next_u64() % 5) - 2,
                          static_cast<int>(rng.next_u64() % 5) - 2,
                          static_cast<int>(rng.next_u64() % 5) - 2};
    if (n == std::vector<int>{0, 0, 0}) continue;  // keep A_0 = 0
    Eigen::MatrixXcd c(3, 1);
    for (int j = 0; j < 3; ++j) c(j, 0) = rng.complex_normal();
    std::vector<int> neg = {-n[0], -n[1], -n[2]};
    A.set_coeff(n, A.coeff(n) + c);
    A.set_coeff(neg, A.coeff(neg) + c.conjugate());
  }
  return A;
}
}  // namespace

TEST_CASE("frame construction") {
  // canonical case: third axis is +-(0,1,0) with the positive sign fixed
  {
    const Frame fr = frame_from(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 1));
    REQUIRE(fr.orthonormality_residual() < 1e-12);
    REQUIRE((fr.axis(0) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
    REQUIRE((fr.axis(1) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
    REQUIRE((fr.axis(2) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  }
  // rotated pairs: Gram-matrix oracle
  Rng rng(40);
  for (int t = 0; t < 25; ++t) {
    const Eigen::VectorXd e = rng.unit_vector(3);
    const Eigen::VectorXd et = rng.unit_vector_orthogonal_to(e);
    const Frame fr = frame_from(et, e);
    const Eigen::MatrixXd gram = fr.axes.transpose() * fr.axes;
    REQUIRE((gram - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  }
  // degenerate input
  REQUIRE_THROWS_AS(frame_from(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, 1)),
                    std::invalid_argument);
}

TEST_CASE("phi coefficients match the direct formula when the average vanishes") {
  const LatticeVector gamma = lat3.lattice_vector({0, 0, 1});
  const Eigen::VectorXd e = Eigen::Vector3d(0, 0, 1);
  const Frame fr = frame_from(Eigen::Vector3d(1, 0, 0), e);
  // a potential with only (N,gamma) != 0 frequencies: dirac average is zero
  FourierPotential A(lat3, ValueShape::vector, 3, true);
  Eigen::MatrixXcd c(3, 1);
  c.col(0) = Eigen::Vector3cd(Complex(0.3, 0.1), Complex(-0.2, 0.0), Complex(0.0, 0.4));
  A.set_coeff({1, 0, 2}, c);
  A.set_coeff({-1, 0, -2}, c.conjugate());
  const GaugeFields gf = phi_fields(A, fr, AveragingMeasure::dirac(), gamma);

  // direct formula oracle with the A~ terms dropped
  const Eigen::VectorXd N = lat3.dual_point({1, 0, 2});
  const double n1 = N.dot(fr.axis(0)), n2 = N.dot(fr.axis(1));
  const Complex a1 = fr.axis(0).cast<Complex>().dot(c.col(0));
  const Complex a2 = fr.axis(1).cast<Complex>().dot(c.col(0));
  const Complex den(0.0, kTwoPi * (n1 * n1 + n2 * n2));
  const Complex phi1_expect = (n1 * a1 + n2 * a2) / den;
  const Complex phi2_expect = -(n2 * a1 - n1 * a2) / den;
  REQUIRE(std::abs(gf.phi1.coeff({1, 0, 2})(0, 0) - phi1_expect) < 1e-14);
  REQUIRE(std::abs(gf.phi2.coeff({1, 0, 2})(0, 0) - phi2_expect) < 1e-14);
  // real fields: conjugate symmetry
  REQUIRE(gf.phi1.hermitian_symmetry_residual() < 1e-14);
  REQUIRE(gf.phi2.hermitian_symmetry_residual() < 1e-14);
}

TEST_CASE("divergence and curl relations hold coefficientwise") {
  Rng rng(81);
  const LatticeVector gamma = lat3.lattice_vector({0, 0, 1});
  const Eigen::VectorXd e = gamma.vec;  // unit already
  for (int t = 0; t < 20; ++t) {
    const FourierPotential A = random_trig_vector_potential(rng, 6);
    const Eigen::VectorXd et = rng.unit_vector_orthogonal_to(e);
    const Frame fr = frame_from(et, e);
    for (const AveragingMeasure& mu :
         {AveragingMeasure::dirac(), AveragingMeasure::vallee_poussin(3.0)}) {
      const GaugeFields gf = phi_fields(A, fr, mu, gamma);
      const GaugeRelationReport rep = check_gauge_relations(A, gf, mu, gamma);
      REQUIRE(rep.divergence_residual < 1e-12);
      REQUIRE(rep.curl_residual < 1e-12);
    }
  }
}

TEST_CASE("phi fields vanish when A equals its average") {
  // A supported on (N,gamma) = 0 frequencies with the dirac measure: A~ = A
  const LatticeVector gamma = lat3.lattice_vector({0, 0, 1});
  const Frame fr = frame_from(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 1));
  FourierPotential A(lat3, ValueShape::vector, 3, true);
  Eigen::MatrixXcd c(3, 1);
  c.col(0) = Eigen::Vector3cd(0.0, 0.25, 0.0);
  A.set_coeff({1, 1, 0}, c);
  A.set_coeff({-1, -1, 0}, c);
  const GaugeFields gf = phi_fields(A, fr, AveragingMeasure::dirac(), gamma);
  REQUIRE(gf.phi1.coefficient_count() == 0);
  REQUIRE(gf.phi2.coefficient_count() == 0);
}

TEST_CASE("kernel bound |G| <= 1/rho and structural facts") {
  // the eta profile is the fixed quintic step on [pi, 2 pi]
  REQUIRE(eta_profile(std::numbers::pi) == 0.0);
  REQUIRE(eta_profile(2 * std::numbers::pi) == 1.0);
  REQUIRE(eta_profile(1.5 * std::numbers::pi) == Approx(0.5));
  // xi_1 = 0 kills the kernel
  REQUIRE(kernel_G(0.0, 1.7) == 0.0);
  // bound on a log grid
  for (double lx = -2.0; lx <= 2.0; lx += 0.21) {
    for (double ly = -2.0; ly <= 2.0; ly += 0.21) {
      const double x = std::pow(10.0, lx), y = std::pow(10.0, ly);
      const double rho = std::hypot(x, y);
      REQUIRE(std::abs(kernel_G(x, y)) * rho <= 1.0 + 1e-8);
    }
  }
  // rapid decay: |G| rho^beta decreasing along a ray for large rho
  for (double beta : {1.0, 2.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double rho : {20.0, 40.0, 80.0}) {
      const double v = std::abs(kernel_G(rho / std::sqrt(2.0), rho / std::sqrt(2.0))) *
                       std::pow(rho, beta);
      REQUIRE(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("phi sup bound against the computed surrogate") {
  Rng rng(29);
  const LatticeVector gamma = lat3.lattice_vector({0, 0, 1});
  const Eigen::VectorXd e = gamma.vec;
  const Eigen::VectorXd et = Eigen::Vector3d(1, 0, 0);
  const Frame fr = frame_from(et, e);
  const AveragingMeasure mu = AveragingMeasure::dirac();
  // A = 0: everything vanishes, bound passes trivially
  {
    FourierPotential A(lat3, ValueShape::vector, 3, true);
    const GaugeFields gf = phi_fields(A, fr, mu, gamma);
    const PhiBoundReport rep = phi_sup_bound_check(gf, 1.0, 0.0, 6);
    REQUIRE(rep.sup_phi1 == 0.0);
    REQUIRE(rep.pass);
  }
  // single-mode A: the grid sup is below the coefficient-sum bound
  {
    FourierPotential A(lat3, ValueShape::vector, 3, true);
    Eigen::MatrixXcd c(3, 1);
    c.col(0) = Eigen::Vector3cd(0.3, 0.0, 0.0);
    A.set_coeff({1, 0, 1}, c);
    A.set_coeff({-1, 0, -1}, c);
    const GaugeFields gf = phi_fields(A, fr, mu, gamma);
    double coeff_sum = 0.0;
    for (const auto& [n, cc] : gf.phi1.coeffs()) coeff_sum += std::abs(cc(0, 0));
    const PhiBoundReport rep = phi_sup_bound_check(gf, 1.0, 0.0, 10);
    REQUIRE(rep.sup_phi1 <= coeff_sum + 1e-12);
    REQUIRE(rep.sup_phi1 > 0.0);
  }
}

TEST_CASE("conjugation identity: exact at A = 0 and decaying under refinement") {
  const LatticeVector gamma = lat3.lattice_vector({0, 0, 1});
  const Eigen::VectorXd e = gamma.vec;
  const Eigen::VectorXd et = Eigen::Vector3d(1, 0, 0);
  const Frame fr = frame_from(et, e);
  const AveragingMeasure mu = AveragingMeasure::dirac();
  const Eigen::VectorXd k0 = std::numbers::pi * gamma.vec;

  // A = 0: both sides equal the free in-plane operator
  {
    FourierPotential A(lat3, ValueShape::vector, 3, true);
    const GaugeFields gf = phi_fields(A, fr, mu, gamma);
    const auto rep = verify_gauge_identity(k0, 1.5, A, gf, mu, gamma, cliff3, 9, 3, 7);
    REQUIRE(rep.relative_residual < 1e-12);
    REQUIRE(rep.commutation_residual < 1e-12);
  }
  // single-mode A: residual decreases monotonically over three refinements
  // (grids stay coarse enough that the last one sits above rounding noise)
  {
    FourierPotential A = preset_single_mode_vector(lat3, {1, 0, 1}, Eigen::Vector3d(1, 0, 0), 0.5);
    const GaugeFields gf = phi_fields(A, fr, mu, gamma);
    double prev = std::numeric_limits<double>::infinity();
    for (int g : {5, 11, 23}) {
      const auto rep = verify_gauge_identity(k0, 1.5, A, gf, mu, gamma, cliff3, g, 3, 7);
      REQUIRE(rep.relative_residual < prev);
      REQUIRE(rep.commutation_residual < 1e-11);
      prev = rep.relative_residual;
    }
    REQUIRE(prev < 1e-10);  // well converged at the finest grid
  }
}
