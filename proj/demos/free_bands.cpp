// Minimal library walkthrough: band structure of the free operator along
// one reciprocal axis, printed as CSV to stdout.

#include "diracbloch/bands.hpp"

#include <cstdio>

using namespace diracbloch;

int main() {
  const Lattice lat = Lattice::cubic(3);
  const CliffordSystem cliff = CliffordSystem::build(3);
  const auto basis = enumerate_box(lat, 1);

  // sweep k = 2 pi t E*_3 over one zone edge
  std::printf("t,nu,lambda\n");
  const int steps = 16;
  for (int i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const Eigen::VectorXd k = kTwoPi * t * lat.dual_vector(2);
    const FiberPoint fp(k, 0.0, Eigen::Vector3d(0, 0, 1));
    const Eigen::VectorXd ev = hermitian_eigenvalues(assemble(fp, nullptr, basis, cliff));
    const std::vector<double> central = central_window(ev, 8);
    for (std::size_t b = 0; b < central.size(); ++b)
      std::printf("%.6f,%zu,%.12f\n", t, b, central[b]);
  }
  return 0;
}
