#include <catch2/catch.hpp>

#include "diracbloch/bands.hpp"
#include "diracbloch/presets.hpp"

#include <set>

using namespace diracbloch;

namespace {
const Lattice lat3 = Lattice::cubic(3);
const CliffordSystem cliff3 = CliffordSystem::build(3);
}  // namespace

TEST_CASE("free bands are +-|k + 2 pi N| with multiplicity M/2") {
  const auto basis = enumerate_box(lat3, 1);
  const std::vector<int> grid = {3, 3, 3};
  const BandStructure bs = compute_bands(nullptr, lat3, cliff3, basis, grid, 0, 2);
  REQUIRE(bs.kpoints.size() == 27);
  for (std::size_t i = 0; i < bs.kpoints.size(); ++i) {
    // closed-form spectrum of the truncated free operator
    std::vector<double> expect;
    for (const auto& idx : basis) {
      const double v = (bs.kpoints[i] + kTwoPi * idx.point).norm();
      expect.push_back(v);
      expect.push_back(v);
      expect.push_back(-v);
      expect.push_back(-v);
    }
    std::sort(expect.begin(), expect.end());
    // retained window: central split around zero, matching central_window
    Eigen::VectorXd evec = Eigen::Map<Eigen::VectorXd>(expect.data(), static_cast<Eigen::Index>(expect.size()));
    const std::vector<double> slice = central_window(evec, bs.window);
    REQUIRE(bs.bands[i].size() == slice.size());
    for (std::size_t b = 0; b < slice.size(); ++b)
      REQUIRE(bs.bands[i][b] == Approx(slice[b]).margin(1e-9));
  }
}

TEST_CASE("mass bands are +-sqrt(|k + 2 pi N|^2 + m^2)") {
  // oracle: (slash(p) + m beta)^2 = (|p|^2 + m^2) I
  const double m = 1.0;
  const FourierPotential V1 = preset_constant_scalar(lat3, m);
  const FourierPotential W = combine_potential(lat3, cliff3, nullptr, &V1, nullptr);
  const auto basis = enumerate_box(lat3, 1);
  const BandStructure bs = compute_bands(&W, lat3, cliff3, basis, {2, 2, 2}, 0, 1);
  for (std::size_t i = 0; i < bs.kpoints.size(); ++i) {
    std::vector<double> expect;
    for (const auto& idx : basis) {
      const double v = std::sqrt((bs.kpoints[i] + kTwoPi * idx.point).squaredNorm() + m * m);
      expect.push_back(v);
      expect.push_back(v);
      expect.push_back(-v);
      expect.push_back(-v);
    }
    std::sort(expect.begin(), expect.end());
    Eigen::VectorXd evec = Eigen::Map<Eigen::VectorXd>(expect.data(), static_cast<Eigen::Index>(expect.size()));
    const std::vector<double> slice = central_window(evec, bs.window);
    REQUIRE(bs.bands[i].size() == slice.size());
    for (std::size_t b = 0; b < slice.size(); ++b)
      REQUIRE(bs.bands[i][b] == Approx(slice[b]).margin(1e-9));
  }
}

TEST_CASE("flat band scan flags nothing for free and mass cases") {
  const auto basis = enumerate_box(lat3, 1);
  {
    const BandStructure bs = compute_bands(nullptr, lat3, cliff3, basis, {4, 4, 4}, 0, 2);
    const FlatBandReport rep = flat_band_scan(bs, 1e-3);
    REQUIRE(rep.flagged.empty());
  }
  {
    const FourierPotential V1 = preset_constant_scalar(lat3, 1.0);
    const FourierPotential W = combine_potential(lat3, cliff3, nullptr, &V1, nullptr);
    const BandStructure bs = compute_bands(&W, lat3, cliff3, basis, {4, 4, 4}, 0, 2);
    const FlatBandReport rep = flat_band_scan(bs, 1e-3);
    REQUIRE(rep.flagged.empty());
  }
}

TEST_CASE("spectrum union: symmetry, gap, and merging") {
  const auto basis = enumerate_box(lat3, 1);
  // free case: union symmetric about 0, gapless at 0
  {
    const BandStructure bs = compute_bands(nullptr, lat3, cliff3, basis, {4, 4, 4}, 0, 2);
    const auto iv = spectrum_union(bs);
    REQUIRE(!iv.empty());
    REQUIRE(iv.front().first == Approx(-iv.back().second).margin(1e-9));
    bool covers_zero = false;
    for (const auto& r : iv) covers_zero = covers_zero || (r.first <= 0.0 && r.second >= 0.0);
    REQUIRE(covers_zero);
  }
  // mass case: gap (-m, m) up to grid resolution; the k-grid contains 0 so
  // the edges are exact
  {
    const double m = 1.0;
    const FourierPotential V1 = preset_constant_scalar(lat3, m);
    const FourierPotential W = combine_potential(lat3, cliff3, nullptr, &V1, nullptr);
    const BandStructure bs = compute_bands(&W, lat3, cliff3, basis, {4, 4, 4}, 0, 2);
    const auto iv = spectrum_union(bs);
    double gap_lo = 0.0, gap_hi = 0.0;
    for (std::size_t i = 0; i + 1 < iv.size(); ++i) {
      if (iv[i].second < 0.0 && iv[i + 1].first > 0.0) {
        gap_lo = iv[i].second;
        gap_hi = iv[i + 1].first;
      }
    }
    REQUIRE(gap_lo == Approx(-m).margin(1e-9));
    REQUIRE(gap_hi == Approx(m).margin(1e-9));
  }
  // overlapping band ranges merge into one interval
  {
    BandStructure bs;
    bs.bands = {{0.0, 1.0, 3.0}, {1.5, 2.0, 3.2}};
    bs.kpoints = {Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
    // per-band ranges [0,1.5], [1,2], [3,3.2]: the first two overlap
    const auto iv = spectrum_union(bs);
    REQUIRE(iv.size() == 2);
    REQUIRE(iv[0].first == 0.0);
    REQUIRE(iv[0].second == 2.0);
    REQUIRE(iv[1].first == 3.0);
  }
}

TEST_CASE("determinism: thread count does not change the result") {
  const auto basis = enumerate_box(lat3, 1);
  const FourierPotential V = preset_single_mode_scalar(lat3, {1, 0, 0}, 0.2);
  const FourierPotential W = combine_potential(lat3, cliff3, &V, nullptr, nullptr);
  const BandStructure a = compute_bands(&W, lat3, cliff3, basis, {3, 3, 3}, 0, 1);
  const BandStructure b = compute_bands(&W, lat3, cliff3, basis, {3, 3, 3}, 0, 2);
  REQUIRE(a.bands.size() == b.bands.size());
  for (std::size_t i = 0; i < a.bands.size(); ++i)
    for (std::size_t j = 0; j < a.bands[i].size(); ++j)
      REQUIRE(a.bands[i][j] == b.bands[i][j]);
}

TEST_CASE("band values converge as the truncation grows") {
  const FourierPotential V = preset_single_mode_scalar(lat3, {1, 0, 0}, 0.15);
  const FourierPotential W = combine_potential(lat3, cliff3, &V, nullptr, nullptr);
  // Cauchy differences of the central bands shrink with n_max
  Eigen::VectorXd k = Eigen::Vector3d(0.3, 0.7, 1.1);
  std::vector<double> center_gap;
  for (int n_max : {1, 2, 3}) {
    const auto basis = enumerate_box(lat3, n_max);
    const FiberPoint fp(k, 0.0, Eigen::Vector3d(0, 0, 1));
    const Eigen::VectorXd ev = hermitian_eigenvalues(assemble(fp, &W, basis, cliff3), 1e-8);
    // smallest positive eigenvalue as the tracked feature
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 0.0) best = std::min(best, ev(i));
    center_gap.push_back(best);
  }
  const double d12 = std::abs(center_gap[1] - center_gap[0]);
  const double d23 = std::abs(center_gap[2] - center_gap[1]);
  REQUIRE(d23 <= d12 + 1e-12);
  REQUIRE(d23 < 1e-3);
}
