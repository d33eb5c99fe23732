#pragma once

// Seeded deterministic random numbers for test vectors and scans.
// splitmix64 core so the stream does not depend on the standard library
// implementation; results are reproducible bit-for-bit for a given seed.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>

namespace diracbloch {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  Eigen::VectorXd normal_vector(int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = normal();
    return v;
  }

  Eigen::VectorXcd complex_normal_vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  Eigen::VectorXd unit_vector(int d) {
    Eigen::VectorXd v = normal_vector(d);
    while (v.norm() < 1e-8) v = normal_vector(d);
    return v / v.norm();
  }

  /// Unit vector orthogonal to e (|e| = 1).
  Eigen::VectorXd unit_vector_orthogonal_to(const Eigen::VectorXd& e) {
    Eigen::VectorXd v = normal_vector(static_cast<int>(e.size()));
    v -= v.dot(e) * e;
    while (v.norm() < 1e-8) {
      v = normal_vector(static_cast<int>(e.size()));
      v -= v.dot(e) * e;
    }
    return v / v.norm();
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace diracbloch
