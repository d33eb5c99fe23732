#pragma once

// Band functions lambda_nu(k) over the Brillouin zone 2 pi K*, spectrum
// assembly as a union of per-band ranges, and flat-band detection (a
// constant band function signals an eigenvalue of the periodic operator).

#include "diracbloch/clifford.hpp"
#include "diracbloch/fiber.hpp"
#include "diracbloch/lattice.hpp"
#include "diracbloch/potential.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace diracbloch {

struct BandStructure {
  std::vector<Eigen::VectorXd> kpoints;        // grid over 2 pi K*
  std::vector<std::vector<double>> bands;      // per k: retained eigenvalues, ascending
  std::vector<int> grid_res;
  int window = 0;       // retained band count (those nearest 0)
  int total_bands = 0;  // full truncated matrix size M |basis|
  int n_max = 0;        // truncation used
};

/// Central window of an ascending spectrum: floor(w/2) bands below zero and
/// the rest at or above it, as available. Splitting by sign rather than by
/// |lambda| keeps the band indexing stable across k when the spectrum is
/// symmetric (near-zero values count as nonnegative).
inline std::vector<double> central_window(const Eigen::VectorXd& ev, int window) {
  const int total = static_cast<int>(ev.size());
  window = std::min(window, total);
  double scale = 0.0;
  for (int i = 0; i < total; ++i) scale = std::max(scale, std::abs(ev(i)));
  const double tol_zero = 1e-10 * std::max(1.0, scale);
  int neg = 0;
  while (neg < total && ev(neg) < -tol_zero) ++neg;
  int keep_neg = std::min(neg, window / 2);
  int keep_pos = std::min(total - neg, window - keep_neg);
  keep_neg = std::min(neg, window - keep_pos);
  const int lo = neg - keep_neg;
  return std::vector<double>(ev.data() + lo, ev.data() + lo + keep_neg + keep_pos);
}

/// Eigenvalues of the self-adjoint fiber matrices over a uniform k-grid in
/// 2 pi K*. Only `window` bands nearest 0 are retained; truncation-edge
/// bands are unreliable and excluded (default window keeps the central 70%).
inline BandStructure compute_bands(const FourierPotential* W, const Lattice& lat,
                                   const CliffordSystem& cliff,
                                   const std::vector<LatticeIndex>& basis,
                                   const std::vector<int>& grid_res, int window = 0,
                                   int threads = 1) {
  if (W && !W->hermitian_field())
    throw std::invalid_argument("compute_bands: Hermitian-valued potential required");
  const int d = lat.dim();
  if (static_cast<int>(grid_res.size()) != d)
    throw std::invalid_argument("compute_bands: one grid resolution per axis expected");
  BandStructure bs;
  bs.grid_res = grid_res;
  bs.total_bands = cliff.size() * static_cast<int>(basis.size());
  if (window <= 0) window = std::max(1, (bs.total_bands * 7) / 10);
  window = std::min(window, bs.total_bands);
  bs.window = window;

  std::size_t total = 1;
  for (int r : grid_res) total *= static_cast<std::size_t>(r);
  bs.kpoints.resize(total);
  bs.bands.resize(total);
  // unit direction: irrelevant at kappa = 0, any unit vector works
  const Eigen::VectorXd e_unit = Eigen::VectorXd::Unit(d, 0);

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      std::vector<int> idx(static_cast<std::size_t>(d));
      for (int a = d - 1; a >= 0; --a) {
        idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(grid_res[static_cast<std::size_t>(a)]));
        rem /= static_cast<std::size_t>(grid_res[static_cast<std::size_t>(a)]);
      }
      Eigen::VectorXd k = Eigen::VectorXd::Zero(d);
      for (int j = 0; j < d; ++j)
        k += kTwoPi *
             (static_cast<double>(idx[static_cast<std::size_t>(j)]) /
              static_cast<double>(grid_res[static_cast<std::size_t>(j)])) *
             lat.dual_vector(j);
      const FiberPoint fp(k, 0.0, e_unit);
      const Eigen::MatrixXcd mat = assemble(fp, W, basis, cliff);
      const Eigen::VectorXd ev = hermitian_eigenvalues(mat, 1e-8);
      bs.kpoints[flat] = k;
      bs.bands[flat] = central_window(ev, window);
    }
  };

  if (threads <= 1) {
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
  return bs;
}

struct FlatBandReport {
  std::vector<double> band_widths;  // max - min over the grid, per band index
  std::vector<int> flagged;         // band indices with width < tol
  double min_adjacent_gap = 0.0;    // crossing indicator for ascending indexing
};

/// Width of each retained band over the k-grid; bands narrower than tol are
/// flagged as flat-band candidates.
inline FlatBandReport flat_band_scan(const BandStructure& bs, double tol) {
  FlatBandReport rep;
  if (bs.bands.empty()) return rep;
  const std::size_t nb = bs.bands.front().size();
  rep.band_widths.assign(nb, 0.0);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& v : bs.bands) {
      lo = std::min(lo, v[b]);
      hi = std::max(hi, v[b]);
    }
    rep.band_widths[b] = hi - lo;
    if (hi - lo < tol) rep.flagged.push_back(static_cast<int>(b));
  }
  for (const auto& v : bs.bands)
    for (std::size_t b = 0; b + 1 < nb; ++b) min_gap = std::min(min_gap, v[b + 1] - v[b]);
  rep.min_adjacent_gap = min_gap;
  return rep;
}

/// Union of the per-band ranges merged into maximal disjoint intervals.
inline std::vector<std::pair<double, double>> spectrum_union(const BandStructure& bs) {
  std::vector<std::pair<double, double>> ranges;
  if (bs.bands.empty()) return ranges;
  const std::size_t nb = bs.bands.front().size();
  for (std::size_t b = 0; b < nb; ++b) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& v : bs.bands) {
      lo = std::min(lo, v[b]);
      hi = std::max(hi, v[b]);
    }
    ranges.emplace_back(lo, hi);
  }
  std::sort(ranges.begin(), ranges.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& r : ranges) {
    if (!merged.empty() && r.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, r.second);
    else
      merged.push_back(r);
  }
  return merged;
}

}  // namespace diracbloch
