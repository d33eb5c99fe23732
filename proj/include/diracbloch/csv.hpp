#pragma once

// Text export helpers: decimal formatting with 17 significant digits
// (round-trip safe), line-oriented CSV writers, and small shared pieces of
// the output layout.

#include "diracbloch/fiber.hpp"
#include "diracbloch/lattice.hpp"
#include "diracbloch/potential.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracbloch {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt17(Complex z) { return fmt17(z.real()) + "," + fmt17(z.imag()); }

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  void raw_line(const std::string& line) { out_ << line << '\n'; }

 private:
  std::ofstream out_;
};

/// Index-set export: integer tuple, point coordinates, G^-, G^+.
inline void export_index_set(const std::string& path, const std::vector<LatticeIndex>& set,
                             const FiberPoint& fp) {
  CsvWriter w(path);
  const SpectralWeights sw = weights(fp, set);
  std::vector<std::string> header;
  const int d = static_cast<int>(fp.k.size());
  for (int j = 0; j < d; ++j) header.push_back("n" + std::to_string(j + 1));
  for (int j = 0; j < d; ++j) header.push_back("N" + std::to_string(j + 1));
  header.push_back("G_minus");
  header.push_back("G_plus");
  w.row(header);
  for (std::size_t i = 0; i < set.size(); ++i) {
    std::vector<std::string> cells;
    for (int v : set[i].n) cells.push_back(std::to_string(v));
    for (int j = 0; j < d; ++j) cells.push_back(fmt17(set[i].point(j)));
    cells.push_back(fmt17(sw.g_minus[i]));
    cells.push_back(fmt17(sw.g_plus[i]));
    w.row(cells);
  }
}

/// Coefficient-table export: index tuple then interleaved re/im entries.
inline void export_potential(const std::string& path, const FourierPotential& pot) {
  CsvWriter w(path);
  const int d = pot.lattice().dim();
  std::vector<std::string> header;
  for (int j = 0; j < d; ++j) header.push_back("n" + std::to_string(j + 1));
  for (int r = 0; r < pot.rows(); ++r)
    for (int c = 0; c < pot.cols(); ++c) {
      header.push_back("re_" + std::to_string(r + 1) + "_" + std::to_string(c + 1));
      header.push_back("im_" + std::to_string(r + 1) + "_" + std::to_string(c + 1));
    }
  w.row(header);
  for (const auto& [n, c] : pot.coeffs()) {
    std::vector<std::string> cells;
    for (int v : n) cells.push_back(std::to_string(v));
    for (int r = 0; r < pot.rows(); ++r)
      for (int cc = 0; cc < pot.cols(); ++cc) {
        cells.push_back(fmt17(c(r, cc).real()));
        cells.push_back(fmt17(c(r, cc).imag()));
      }
    w.row(cells);
  }
}

/// Dense matrix export (debug): interleaved real/imag entries per row.
inline void export_matrix(const std::string& path, const Eigen::MatrixXcd& m) {
  CsvWriter w(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<std::string> cells;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      cells.push_back(fmt17(m(r, c).real()));
      cells.push_back(fmt17(m(r, c).imag()));
    }
    w.row(cells);
  }
}

}  // namespace diracbloch
