#include <cmath>
#include <numbers>

#include "arnold/field.hpp"
#include "arnold/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace arnold;

TEST_CASE("P is symmetric positive definite and inverts the Laplacian") {
  const BasisPtr b = testutil::annulus(16.0);
  const ScalarField f = testutil::random_interior(b->domain(), 1);
  const ScalarField g = testutil::random_interior(b->domain(), 2);
  const ScalarField Pf = p_apply(*b, f), Pg = p_apply(*b, g);
  CHECK(inner(f, Pg) == doctest::Approx(inner(Pf, g)).epsilon(1e-12));
  CHECK(inner(f, Pf) > 0.0);
  const ScalarField L = neg_laplacian(Pf);
  for (std::size_t p : b->grid().interior_nodes()) CHECK(std::abs(L[p] - f[p]) < 1e-10);
  CHECK(std::abs(boundary_flux(Pf, 1)) < 1e-10);
  CHECK(max_abs_interior(Pf - p_apply_condensed(*b, f)) < 1e-9);
  const ScalarField Gf = green_solve(*b, f);
  const ScalarField LG = neg_laplacian(Gf);
  for (std::size_t p : b->grid().interior_nodes()) CHECK(std::abs(LG[p] - f[p]) < 1e-10);
  for (std::size_t p : b->grid().boundary_nodes(1)) CHECK(Gf[p] == 0.0);
}

TEST_CASE("stream solve for a pure circulation flow") {
  const BasisPtr b = testutil::annulus(32.0);
  const auto& d = b->grid();
  const double gamma = 1.3;
  const StreamSolution s = stream_solve(*b, ScalarField(b->domain()), {gamma});
  CHECK(s.residual < 1e-10);
  CHECK(s.flux_errors[0] < 1e-10);
  for (std::size_t p : d.interior_nodes()) {
    const double exact = gamma / (2.0 * std::numbers::pi) * std::log(testutil::radius(d, p) / 2.0);
    CHECK(std::abs(s.psi[p] - exact) < 0.01 * gamma);
  }
  const VelocityField v = velocity(s.psi);
  CHECK(circulation(v, 1) == doctest::Approx(gamma).epsilon(0.02));
  CHECK(circulation(v, 1, ScalarField(b->domain())) == doctest::Approx(gamma).epsilon(0.02));
  // Central differences commute away from the wall.
  const ScalarField div = divergence(v);
  double far = 0.0, near = 0.0;
  for (std::size_t p : d.interior_nodes()) {
    const double r = testutil::radius(d, p);
    double& m = r > 1.0 + 3.0 * d.h() && r < 2.0 - 3.0 * d.h() ? far : near;
    m = std::max(m, std::abs(div[p]));
  }
  CHECK(far < 1e-10);
  CHECK(near < 0.01);
  CHECK(kinetic_energy(v) == doctest::Approx(0.5 * dirichlet_form(s.psi, s.psi)).epsilon(0.02));
}

TEST_CASE("direct and composed stream solves agree") {
  const BasisPtr b = testutil::annulus(16.0);
  const ScalarField w = testutil::random_interior(b->domain(), 3);
  const StreamSolution s = stream_solve(*b, w, {0.4});
  const ScalarField direct = stream_direct(*b, w, {0.4}, Backend::cholesky);
  double diff = 0.0;
  for (std::size_t p = 0; p < b->grid().size(); ++p) diff = std::max(diff, std::abs(direct[p] - s.psi[p]));
  CHECK(diff < 1e-10);
  CHECK(max_abs_interior(s.psi - p_apply(*b, w) - h_field(*b, {0.4})) < 1e-12);
}

TEST_CASE("ghost fill reproduces quadratics") {
  const DomainPtr d = build_annulus(1.0, 2.0, 16.0);
  const GhostFill gf(d, 3);
  CHECK(gf.size() > 0);
  CHECK(gf.max_noise_gain() > 0.0);
  auto q = [&](std::size_t p) { return 0.3 * d->x(p) * d->x(p) - d->x(p) * d->y(p) + 2.0 * d->y(p) + 1.0; };
  ScalarField f(d);
  for (std::size_t p : d->interior_nodes()) f[p] = q(p);
  const ScalarField g = gf.apply(f);
  for (std::size_t p : d->boundary_nodes(0)) CHECK(g[p] == doctest::Approx(q(p)).epsilon(1e-9));
  for (std::size_t p : d->boundary_nodes(1)) CHECK(g[p] == doctest::Approx(q(p)).epsilon(1e-9));
}

TEST_CASE("extension fill keeps interior values and honours the clamp") {
  const DomainPtr d = build_annulus(1.0, 2.0, 16.0);
  ScalarField f(d);
  for (std::size_t p : d->interior_nodes()) f[p] = d->x(p);
  for (Extrapolation m : {Extrapolation::linear, Extrapolation::quadratic, Extrapolation::limited}) {
    const ScalarField g = extension_fill(f, 2, m, true);
    for (std::size_t p : d->interior_nodes()) CHECK(g[p] == f[p]);
    for (std::size_t p = 0; p < d->size(); ++p) {
      CHECK(g[p] <= 2.0);
      CHECK(g[p] >= -2.0);
    }
  }
}
