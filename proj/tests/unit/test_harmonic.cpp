#include <cmath>

#include "arnold/oracle.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace arnold;

TEST_CASE("zeta has the prescribed boundary values and tracks the closed form") {
  const BasisPtr b = testutil::annulus(32.0);
  const auto& d = b->grid();
  for (std::size_t p : d.boundary_nodes(1)) CHECK(b->zeta(1)[p] == 1.0);
  for (std::size_t p : d.boundary_nodes(0)) CHECK(b->zeta(1)[p] == 0.0);
  const AnnulusForms cf = annulus_closed_forms(1.0, 2.0);
  double err = 0.0;
  for (std::size_t p : d.interior_nodes()) err = std::max(err, std::abs(b->zeta(1)[p] - cf.zeta(testutil::radius(d, p))));
  CHECK(err <= 0.01);
  CHECK(b->p()(0, 0) == doctest::Approx(cf.p11).epsilon(0.02));
  CHECK(b->q()(0, 0) * b->p()(0, 0) == doctest::Approx(1.0));
  CHECK(b->max_residual() < 1e-10);
}

TEST_CASE("iterative and direct backends agree") {
  const DomainPtr d = build_annulus(1.0, 2.0, 16.0);
  const BasisPtr cg = solve_basis(d, 1e-12, Backend::cg);
  const BasisPtr ch = solve_basis(d, 1e-12, Backend::cholesky);
  double diff = 0.0;
  for (std::size_t p = 0; p < d->size(); ++p) diff = std::max(diff, std::abs(cg->zeta(1)[p] - ch->zeta(1)[p]));
  CHECK(diff < 1e-9);
  CHECK(cg->p()(0, 0) == doctest::Approx(ch->p()(0, 0)).epsilon(1e-10));
}

TEST_CASE("Gram matrix is symmetric positive definite with two holes") {
  const DomainPtr d = build_rect_with_holes(2.0, 1.0, 1.0 / 16, {{0.25, 0.25, 0.5, 0.75}, {1.25, 0.25, 1.5, 0.5}});
  const BasisPtr b = solve_basis(d, 1e-12, Backend::cholesky);
  REQUIRE(b->n() == 2);
  CHECK(b->p()(0, 1) == doctest::Approx(b->p()(1, 0)).epsilon(1e-12));
  CHECK(b->p()(0, 1) < 0.0);
  CHECK(b->p().determinant() > 0.0);
  const Eigen::MatrixXd id = b->p() * b->q();
  CHECK((id - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("x decomposition splits off the harmonic part") {
  const BasisPtr b = testutil::annulus(16.0);
  const auto& d = b->grid();
  ScalarField v(b->domain());
  for (std::size_t p : d.interior_nodes()) v[p] = std::sin(d.x(p));
  const ScalarField u = v + 0.8 * b->zeta(1);
  const XDecomposition x = x_decompose(*b, u);
  REQUIRE(x.theta.size() == 1);
  CHECK(x.theta[0] == doctest::Approx(0.8));
  ScalarField bad = u;
  bad[d.boundary_nodes(1).front()] += 0.5;
  CHECK_THROWS(x_decompose(*b, bad));
}
