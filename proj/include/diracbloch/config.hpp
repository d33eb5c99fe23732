#pragma once

// Line-based key-value run configuration with [section] headers. The format
// is deliberately diff-friendly:
//
//   # comment
//   [lattice]
//   dim = 3
//   basis = 1 0 0 ; 0 1 0 ; 0 0 1
//   [potential]
//   kind = coulomb
//   charge = 0.2
//
// Keys are unique per section; values are whitespace-separated tokens.

#include "diracbloch/lattice.hpp"
#include "diracbloch/potential.hpp"
#include "diracbloch/presets.hpp"

#include <Eigen/Dense>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace diracbloch {

class Config {
 public:
  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static Config parse(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw std::runtime_error("config: malformed section header at line " + std::to_string(lineno));
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config: expected key = value at line " + std::to_string(lineno));
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
      cfg.values_[section + "." + key] = value;
    }
    return cfg;
  }

  bool has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
  }

  std::string get_string(const std::string& section, const std::string& key) const {
    auto it = values_.find(section + "." + key);
    if (it == values_.end())
      throw std::runtime_error("config: missing key [" + section + "] " + key);
    return it->second;
  }
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
  }

  double get_double(const std::string& section, const std::string& key) const {
    return std::stod(get_string(section, key));
  }
  double get_double(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
  }

  long get_int(const std::string& section, const std::string& key) const {
    return std::stol(get_string(section, key));
  }
  long get_int(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
  }

  std::vector<double> get_doubles(const std::string& section, const std::string& key) const {
    std::istringstream in(get_string(section, key));
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    return out;
  }

  std::vector<int> get_ints(const std::string& section, const std::string& key) const {
    std::istringstream in(get_string(section, key));
    std::vector<int> out;
    int v;
    while (in >> v) out.push_back(v);
    return out;
  }

  /// Rows separated by ';', entries by whitespace. Vectors E_j are the rows
  /// of the config text and become the columns of the basis matrix.
  Eigen::MatrixXd get_matrix(const std::string& section, const std::string& key) const {
    const std::string text = get_string(section, key);
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) {
      std::istringstream rin(part);
      std::vector<double> row;
      double v;
      while (rin >> v) row.push_back(v);
      if (!row.empty()) rows.push_back(row);
    }
    if (rows.empty()) throw std::runtime_error("config: empty matrix for key " + key);
    const std::size_t cols = rows.front().size();
    for (const auto& r : rows)
      if (r.size() != cols) throw std::runtime_error("config: ragged matrix for key " + key);
    Eigen::MatrixXd m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
  }

  // -- domain object builders ------------------------------------------------

  Lattice lattice() const {
    const long d = get_int("lattice", "dim");
    if (has("lattice", "basis")) {
      Eigen::MatrixXd rows = get_matrix("lattice", "basis");
      if (rows.rows() != d || rows.cols() != d)
        throw std::runtime_error("config: basis must be dim x dim");
      return Lattice(rows.transpose());  // rows of the file are the vectors E_j
    }
    return Lattice::cubic(static_cast<int>(d));
  }

  LatticeVector gamma(const Lattice& lat) const {
    std::vector<int> coords(static_cast<std::size_t>(lat.dim()), 0);
    coords.back() = 1;
    if (has("gamma", "coords")) {
      auto c = get_ints("gamma", "coords");
      if (static_cast<int>(c.size()) != lat.dim())
        throw std::runtime_error("config: gamma coords must have dim entries");
      coords = c;
    }
    return lat.lattice_vector(coords);
  }

  AveragingMeasure measure() const {
    const std::string kind = get_string("measure", "kind", "dirac");
    if (kind == "dirac") return AveragingMeasure::dirac();
    if (kind == "vallee-poussin")
      return AveragingMeasure::vallee_poussin(get_double("measure", "h", 1.0));
    throw std::runtime_error("config: unknown measure kind " + kind);
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
};

/// Potential description shared by the CLI subcommands: scalar electric
/// parts V0, V1 (V1 multiplies beta), vector magnetic part A, or analytic
/// Coulomb wells handled separately at sampling time.
struct PotentialSpec {
  std::optional<FourierPotential> V0;
  std::optional<FourierPotential> V1;
  std::optional<FourierPotential> A;
  std::optional<CoulombWell> coulomb;
  std::string kind;
};

inline FourierPotential parse_coefficient_table(const Lattice& lat, const std::string& path,
                                                ValueShape shape, int value_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("potential table: cannot open " + path);
  FourierPotential out(lat, shape, value_dim, true);
  std::string line;
  bool first = true;
  const int d = lat.dim();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {  // header row
      first = false;
      continue;
    }
    std::vector<int> n(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) n[static_cast<std::size_t>(j)] = std::stoi(cells[static_cast<std::size_t>(j)]);
    Eigen::MatrixXcd c(out.rows(), out.cols());
    std::size_t pos = static_cast<std::size_t>(d);
    for (int r = 0; r < out.rows(); ++r)
      for (int cc = 0; cc < out.cols(); ++cc) {
        const double re = std::stod(cells.at(pos++));
        const double im = std::stod(cells.at(pos++));
        c(r, cc) = Complex(re, im);
      }
    out.set_coeff(n, c);
  }
  return out;
}

inline PotentialSpec potential_spec(const Config& cfg, const Lattice& lat) {
  PotentialSpec spec;
  spec.kind = cfg.get_string("potential", "kind", "free");
  const int d = lat.dim();
  if (spec.kind == "free") {
    return spec;
  }
  if (spec.kind == "constant") {
    spec.V0 = preset_constant_scalar(lat, cfg.get_double("potential", "value"));
    return spec;
  }
  if (spec.kind == "mass") {
    spec.V1 = preset_constant_scalar(lat, cfg.get_double("potential", "m"));
    return spec;
  }
  if (spec.kind == "single-mode") {
    auto n0 = cfg.get_ints("potential", "index");
    spec.V0 = preset_single_mode_scalar(lat, n0, cfg.get_double("potential", "amplitude"));
    return spec;
  }
  if (spec.kind == "magnetic-mode") {
    auto n0 = cfg.get_ints("potential", "index");
    auto dir = cfg.get_doubles("potential", "direction");
    Eigen::VectorXd u(d);
    for (int j = 0; j < d; ++j) u(j) = dir.at(static_cast<std::size_t>(j));
    spec.A = preset_single_mode_vector(lat, n0, u, cfg.get_double("potential", "amplitude"));
    return spec;
  }
  if (spec.kind == "coulomb") {
    Eigen::VectorXd center(d);
    auto cvals = cfg.has("potential", "center") ? cfg.get_doubles("potential", "center")
                                                : std::vector<double>(static_cast<std::size_t>(d), 0.5);
    for (int j = 0; j < d; ++j) center(j) = cvals.at(static_cast<std::size_t>(j));
    spec.coulomb = CoulombWell(lat, center, cfg.get_double("potential", "charge", 1.0),
                               cfg.get_double("potential", "r0", 0.15),
                               cfg.get_double("potential", "r1", 0.3));
    return spec;
  }
  if (spec.kind == "table") {
    spec.V0 = parse_coefficient_table(lat, cfg.get_string("potential", "file"),
                                      ValueShape::scalar, 1);
    return spec;
  }
  throw std::runtime_error("config: unknown potential kind " + spec.kind);
}

}  // namespace diracbloch
