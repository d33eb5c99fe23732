#include <catch2/catch.hpp>

#include "diracbloch/clifford.hpp"
#include "diracbloch/random.hpp"

using namespace diracbloch;

TEST_CASE("anticommutation relations hold for d = 2..6") {
  for (int d = 2; d <= 6; ++d) {
    const CliffordSystem sys = CliffordSystem::build(d);
    REQUIRE(sys.relation_residual() < 1e-12 * sys.size());
  }
}

TEST_CASE("d = 3 reproduces the Pauli-block matrices") {
  const CliffordSystem sys = CliffordSystem::build(3);
  REQUIRE(sys.size() == 4);
  // alpha_1 = [[0, s1], [s1, 0]]: entries (1,4) and (2,3) equal 1
  REQUIRE(std::abs(sys.alpha(0)(0, 3) - Complex(1, 0)) < 1e-15);
  REQUIRE(std::abs(sys.alpha(0)(1, 2) - Complex(1, 0)) < 1e-15);
  REQUIRE(std::abs(sys.alpha(0)(0, 0)) < 1e-15);
  // beta = diag(I, -I)
  Eigen::MatrixXcd beta_expected = Eigen::MatrixXcd::Zero(4, 4);
  beta_expected(0, 0) = beta_expected(1, 1) = 1.0;
  beta_expected(2, 2) = beta_expected(3, 3) = -1.0;
  REQUIRE((sys.beta() - beta_expected).norm() < 1e-15);
}

TEST_CASE("d = 2 is the Pauli triple") {
  const CliffordSystem sys = CliffordSystem::build(2);
  REQUIRE(sys.size() == 2);
  REQUIRE((sys.alpha(0) - pauli(1)).norm() < 1e-15);
  REQUIRE((sys.alpha(1) - pauli(2)).norm() < 1e-15);
  REQUIRE((sys.beta() - pauli(3)).norm() < 1e-15);
  // alpha_1 alpha_2 = i sigma_3 (2x2 multiplication oracle)
  const Eigen::MatrixXcd prod = sys.alpha(0) * sys.alpha(1);
  REQUIRE((prod - Complex(0, 1) * pauli(3)).norm() < 1e-15);
}

TEST_CASE("d = 4 gives a size-4 system") {
  const CliffordSystem sys = CliffordSystem::build(4);
  REQUIRE(sys.size() == 4);
  REQUIRE(sys.relation_residual() < 1e-12 * sys.size());
}

TEST_CASE("slash square identity (sum p_j alpha_j)^2 = |p|^2 I") {
  Rng rng(42);
  for (int d : {2, 3, 4, 5, 6}) {
    const CliffordSystem sys = CliffordSystem::build(d);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(sys.size(), sys.size());
    for (int t = 0; t < 100; ++t) {
      const Eigen::VectorXd p = rng.normal_vector(d);
      const Eigen::MatrixXcd s = sys.slash(p);
      REQUIRE((s * s - p.squaredNorm() * id).norm() < 1e-10 * (1.0 + p.squaredNorm()));
    }
  }
}

TEST_CASE("commutant class membership") {
  const CliffordSystem sys = CliffordSystem::build(3);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
  REQUIRE(in_commutant_class(id, 0, sys));
  REQUIRE(!in_commutant_class(id, 1, sys));
  REQUIRE(in_commutant_class(sys.beta(), 1, sys));
  // -i a1 a2 a3 commutes with every alpha_j (class 0)
  const Eigen::MatrixXcd chi = Complex(0, -1) * sys.alpha(0) * sys.alpha(1) * sys.alpha(2);
  REQUIRE(in_commutant_class(chi, 0, sys));
  REQUIRE(in_commutant_class(sys.alpha(1), 1, sys) == false);  // alpha_2 anticommutes only partly
}

TEST_CASE("projection pair properties") {
  Rng rng(5);
  const CliffordSystem sys = CliffordSystem::build(3);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd e = rng.unit_vector(3);
    const Eigen::VectorXd et = rng.unit_vector_orthogonal_to(e);
    const Eigen::MatrixXcd pp = projection_pair(e, et, +1, sys);
    const Eigen::MatrixXcd pm = projection_pair(e, et, -1, sys);
    REQUIRE((pp + pm - id).norm() < 1e-12);
    REQUIRE((pp * pp - pp).norm() < 1e-12);
    REQUIRE(hermiticity_residual(pp) < 1e-12);
    REQUIRE((pp * pm).norm() < 1e-12);
    // trace = M/2 (the Clifford product is traceless)
    REQUIRE(std::abs(pp.trace() - Complex(2.0, 0.0)) < 1e-12);
    // P D P = 0 for D in the complexified span of e and et
    const double a = rng.normal(), b = rng.normal();
    const Eigen::MatrixXcd D = a * sys.slash(e) + b * sys.slash(et);
    REQUIRE(operator_norm(pp * D * pp) < 1e-10 * (std::abs(a) + std::abs(b) + 1.0));
    REQUIRE(operator_norm(pm * D * pm) < 1e-10 * (std::abs(a) + std::abs(b) + 1.0));
  }
}

TEST_CASE("projection distance identity") {
  Rng rng(11);
  const CliffordSystem sys = CliffordSystem::build(3);
  for (int t = 0; t < 50; ++t) {
    const Eigen::VectorXd e = rng.unit_vector(3);
    const Eigen::VectorXd et1 = rng.unit_vector_orthogonal_to(e);
    const Eigen::VectorXd et2 = rng.unit_vector_orthogonal_to(e);
    for (int sign : {+1, -1}) {
      const Eigen::MatrixXcd p1 = projection_pair(e, et1, sign, sys);
      const Eigen::MatrixXcd p2 = projection_pair(e, et2, sign, sys);
      REQUIRE(std::abs(operator_norm(p1 - p2) - 0.5 * (et2 - et1).norm()) < 1e-10);
    }
  }
  // antipodal pair: distance exactly 1
  const Eigen::VectorXd e = Eigen::Vector3d(0, 0, 1);
  const Eigen::VectorXd et = Eigen::Vector3d(1, 0, 0);
  const Eigen::MatrixXcd p1 = projection_pair(e, et, +1, sys);
  const Eigen::MatrixXcd p2 = projection_pair(e, Eigen::Vector3d(-1, 0, 0), +1, sys);
  REQUIRE(std::abs(operator_norm(p1 - p2) - 1.0) < 1e-12);
}

TEST_CASE("projection pair rejects bad inputs") {
  const CliffordSystem sys = CliffordSystem::build(3);
  REQUIRE_THROWS_AS(projection_pair(Eigen::Vector3d(0, 0, 2), Eigen::Vector3d(1, 0, 0), +1, sys),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(projection_pair(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, 1), +1, sys),
                    std::invalid_argument);
}
