#pragma once

#include <cmath>
#include <random>

#include "arnold/harmonic.hpp"

namespace testutil {

inline arnold::BasisPtr annulus(double res) {
  return arnold::solve_basis(arnold::build_annulus(1.0, 2.0, res), 1e-12, arnold::Backend::cholesky);
}

inline double radius(const arnold::GridDomain& d, std::size_t p) { return std::hypot(d.x(p), d.y(p)); }

inline arnold::ScalarField random_interior(const arnold::DomainPtr& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  arnold::ScalarField f(d);
  for (std::size_t p : d->interior_nodes()) f[p] = U(rng);
  return f;
}

}  // namespace testutil
