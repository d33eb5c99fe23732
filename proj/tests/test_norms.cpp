#include <catch2/catch.hpp>

#include "diracbloch/norms.hpp"
#include "diracbloch/presets.hpp"
#include "diracbloch/random.hpp"

using namespace diracbloch;

namespace {
const Lattice lat3 = Lattice::cubic(3);

SampledField constant_field(double c, int res = 8) {
  SampledField f(lat3, {res, res, res}, ValueShape::scalar, 1);
  for (std::size_t i = 0; i < f.size(); ++i) f.set_scalar(i, Complex(c, 0.0));
  return f;
}
}  // namespace

TEST_CASE("weak norm of a constant field is c v(K)^(1/d)") {
  const SampledField f = constant_field(3.0);
  REQUIRE(weak_Ld_norm(f, 3) == Approx(3.0 * std::pow(lat3.cell_volume(), 1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("weak norm is positively homogeneous") {
  Rng rng(8);
  SampledField f(lat3, {6, 6, 6}, ValueShape::scalar, 1);
  for (std::size_t i = 0; i < f.size(); ++i) f.set_scalar(i, rng.complex_normal());
  SampledField g = f;
  for (std::size_t i = 0; i < g.size(); ++i) g.set_scalar(i, -2.5 * f.scalar(i));
  REQUIRE(weak_Ld_norm(g, 3) == Approx(2.5 * weak_Ld_norm(f, 3)).epsilon(1e-12));
}

TEST_CASE("tail functional of a bounded field vanishes above its sup") {
  const SampledField f = constant_field(3.0);
  REQUIRE(norm_inf_tail(f, 3, 4.0) == 0.0);
  REQUIRE(norm_inf_tail(f, 3, 2.0) ==
          Approx(2.0 * std::pow(lat3.cell_volume(), 1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("coulomb weak-L3 tail approaches the level-set constant") {
  // analytic oracle: v({1/|x| > t}) = (4/3) pi t^-3, so t v(...)^(1/3) is
  // exactly (4 pi / 3)^(1/3) for every t in the pure-Coulomb range
  const double expected = std::pow(4.0 * std::numbers::pi / 3.0, 1.0 / 3.0);
  const CoulombWell well(lat3, Eigen::Vector3d(0.513, 0.487, 0.5029), 1.0, 0.15, 0.3);
  const SampledField f = well.sample({64, 64, 64});
  const double est = norm_inf_tail(f, 3, 12.0);
  REQUIRE(est == Approx(expected).margin(0.05 * expected));
}

TEST_CASE("quasi-triangle bound at matched levels") {
  // v({|W1+W2| > t}) <= v({|W1| > t/2}) + v({|W2| > t/2}) turns into
  // tail(W1+W2; t) <= 2 tail(W1; t/2) + 2 tail(W2; t/2)
  Rng rng(77);
  const CoulombWell w1(lat3, Eigen::Vector3d(0.3, 0.4, 0.5), 1.0, 0.1, 0.2);
  const CoulombWell w2(lat3, Eigen::Vector3d(0.7, 0.6, 0.5), 0.7, 0.1, 0.2);
  SampledField f1 = w1.sample({32, 32, 32});
  SampledField f2 = w2.sample({32, 32, 32});
  SampledField sum = f1;
  for (std::size_t i = 0; i < sum.size(); ++i)
    sum.set_scalar(i, f1.scalar(i) + f2.scalar(i));
  for (double t : {4.0, 8.0, 16.0}) {
    const double lhs = norm_inf_tail(sum, 3, t);
    const double rhs = 2.0 * norm_inf_tail(f1, 3, t / 2) + 2.0 * norm_inf_tail(f2, 3, t / 2);
    REQUIRE(lhs <= rhs + 1e-12);
  }
  // same inequality for the local variant at a fixed radius
  for (double t : {6.0, 12.0}) {
    const double lhs = norm_inf_loc(sum, 3, 0.2, t);
    const double rhs = 2.0 * norm_inf_loc(f1, 3, 0.2, t / 2) + 2.0 * norm_inf_loc(f2, 3, 0.2, t / 2);
    REQUIRE(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("local tail sees a single well through a small ball") {
  const CoulombWell well(lat3, Eigen::Vector3d(0.513, 0.487, 0.5029), 1.0, 0.1, 0.2);
  const SampledField f = well.sample({48, 48, 48});
  const double loc = norm_inf_loc(f, 3, 0.2, 16.0);
  const double glob = norm_inf_tail(f, 3, 16.0);
  // the ball of radius 0.2 around the singularity captures the whole level set
  REQUIRE(loc == Approx(glob).epsilon(1e-12));
}

TEST_CASE("zygmund tail behavior") {
  // bounded field below the threshold: zero
  REQUIRE(zygmund_tail(constant_field(1.5), 0.5, 2.0) == 0.0);
  // constant field above threshold: v(K) c^3 ln^(1+delta) c
  {
    const double c = 5.0, delta = 0.5;
    const double expected = lat3.cell_volume() * c * c * c * std::pow(std::log(c), 1.0 + delta);
    REQUIRE(zygmund_tail(constant_field(c), delta, 2.0) == Approx(expected).epsilon(1e-12));
  }
  // coulomb sample: strictly decreasing along a in {2, 4, 8, 16}
  {
    const CoulombWell well(lat3, Eigen::Vector3d(0.513, 0.487, 0.5029), 1.0, 0.15, 0.3);
    const SampledField f = well.sample({32, 32, 32});
    double prev = std::numeric_limits<double>::infinity();
    for (double a : {2.0, 4.0, 8.0, 16.0}) {
      const double y = zygmund_tail(f, 0.5, a);
      REQUIRE(y < prev);
      REQUIRE(y > 0.0);
      prev = y;
    }
  }
}

TEST_CASE("hard truncation keeps exactly the large values") {
  SampledField f(lat3, {4, 4, 4}, ValueShape::scalar, 1);
  f.set_scalar(0, Complex(1.0, 0.0));   // below
  f.set_scalar(1, Complex(2.0, 0.0));   // at threshold: kept
  f.set_scalar(2, Complex(-3.0, 0.0));  // above (norm 3)
  const SampledField t = hard_truncate(f, 2.0);
  REQUIRE(t.scalar(0) == Complex(0.0, 0.0));
  REQUIRE(t.scalar(1) == Complex(2.0, 0.0));
  REQUIRE(t.scalar(2) == Complex(-3.0, 0.0));
}

TEST_CASE("matrix-charge coulomb well scales by the charge operator norm") {
  const CoulombWell well(lat3, Eigen::Vector3d(0.513, 0.487, 0.5029), 1.0, 0.15, 0.3);
  Eigen::MatrixXcd q(2, 2);
  q << 0.5, Complex(0.0, 0.25), Complex(0.0, -0.25), -0.5;  // Hermitian, ||q|| known
  const double qnorm = operator_norm(q);
  const SampledField scalar_f = well.sample({16, 16, 16});
  const SampledField matrix_f = well.sample_matrix({16, 16, 16}, q);
  for (std::size_t i = 0; i < scalar_f.size(); i += 97)
    REQUIRE(matrix_f.norm_at(i) == Approx(scalar_f.norm_at(i) * qnorm).margin(1e-10));
  // {||W|| > t} = {scalar > t / ||q||}, so the tails match up to the scale
  REQUIRE(norm_inf_tail(matrix_f, 3, 4.0) ==
          Approx(qnorm * norm_inf_tail(scalar_f, 3, 4.0 / qnorm)).epsilon(1e-9));
}

TEST_CASE("matrix-valued fields use the operator norm") {
  SampledField f(lat3, {2, 2, 2}, ValueShape::matrix, 2);
  Eigen::MatrixXcd m(2, 2);
  m << 3, 0, 0, -1;
  f.set_value(0, m);
  REQUIRE(f.norm_at(0) == Approx(3.0));
  REQUIRE(norm_inf_tail(f, 3, 2.0) ==
          Approx(2.0 * std::pow(f.cell_volume(), 1.0 / 3.0)).epsilon(1e-12));
}
