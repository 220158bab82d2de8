#include <cmath>
#include <numbers>

#include "arnold/grid.hpp"
#include "doctest.h"

using namespace arnold;

TEST_CASE("annulus has one hole and the expected area") {
  const DomainPtr d = build_annulus(1.0, 2.0, 32.0);
  CHECK(d->n_components() == 2);
  CHECK(d->n_holes() == 1);
  const double exact = 3.0 * std::numbers::pi;
  CHECK(std::abs(d->area() - exact) / exact < 0.05);
  for (std::size_t p : d->interior_nodes()) {
    const double r = std::hypot(d->x(p), d->y(p));
    CHECK(r > 1.0);
    CHECK(r < 2.0);
  }
}

TEST_CASE("tiny ring has eight interior nodes around one boundary node") {
  const DomainPtr d = build_tiny_ring();
  CHECK(d->interior_nodes().size() == 8);
  CHECK(d->boundary_nodes(1).size() == 1);
  CHECK(d->boundary_nodes(0).size() == 16);
}

TEST_CASE("rectangle with holes labels each hole") {
  const DomainPtr d = build_rect_with_holes(2.0, 1.0, 1.0 / 16, {{0.25, 0.25, 0.5, 0.75}, {1.25, 0.25, 1.5, 0.5}});
  CHECK(d->n_holes() == 2);
  CHECK_FALSE(d->boundary_nodes(2).empty());
}

TEST_CASE("malformed masks are rejected") {
  CHECK_THROWS_AS(label_components(3, 3, 1.0, 0.0, 0.0, std::vector<bool>(4, true)), DomainError);
  CHECK_THROWS_AS(label_components(5, 5, 1.0, 0.0, 0.0, std::vector<bool>(25, false)), DomainError);
  CHECK_THROWS_AS(build_annulus(1.0, 2.0, -4.0), std::exception);
}

TEST_CASE("discrete calculus on a quadratic") {
  const DomainPtr d = build_rect_with_holes(1.0, 1.0, 1.0 / 16, {{0.375, 0.375, 0.625, 0.625}});
  ScalarField u(d), one(d);
  for (std::size_t p = 0; p < d->size(); ++p) {
    if (d->is_exterior(p)) continue;
    u[p] = d->x(p) * d->x(p) + d->y(p) * d->y(p);
  }
  for (std::size_t p : d->interior_nodes()) one[p] = 1.0;
  const ScalarField L = neg_laplacian(u);
  for (std::size_t p : d->interior_nodes()) CHECK(L[p] == doctest::Approx(-4.0).epsilon(1e-10));
  CHECK(integrate(one) == doctest::Approx(d->area()));
  CHECK(inner(one, u) == doctest::Approx(integrate(u)));
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(d->area())));
  CHECK(lp_norm(one, 3.0) == doctest::Approx(std::cbrt(d->area())));
  CHECK(dirichlet_form(one, one) >= 0.0);
}

TEST_CASE("dirichlet form matches the Green identity") {
  const DomainPtr d = build_annulus(1.0, 2.0, 16.0);
  ScalarField u(d), v(d);
  for (std::size_t p : d->interior_nodes()) {
    u[p] = std::sin(d->x(p)) + d->y(p);
    v[p] = std::cos(d->y(p)) * d->x(p);
  }
  // Both vanish on the boundary, so a(u, v) = (-Delta u, v).
  CHECK(dirichlet_form(u, v) == doctest::Approx(inner(neg_laplacian(u), v)).epsilon(1e-12));
  CHECK(dirichlet_form(u, v) == doctest::Approx(dirichlet_form(v, u)).epsilon(1e-14));
}

TEST_CASE("field arithmetic") {
  const DomainPtr d = build_tiny_ring();
  ScalarField a(d, 1.0), b(d, 2.0);
  const ScalarField c = a + 2.0 * b - a;
  CHECK(c[0] == 4.0);
  a.zero_exterior();
  CHECK(a.finite());
}
