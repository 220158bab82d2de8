#include <cmath>

#include "arnold/oracle.hpp"
#include "arnold/steady.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace arnold;

TEST_CASE("smallest eigenvalue tracks the radial oracle") {
  const BasisPtr b = testutil::annulus(32.0);
  const SpectralResult l = lambda_plain(*b);
  CHECK(l.value == doctest::Approx(radial_eigen({1.0, 2.0, 4096}).mu).epsilon(0.01));
  CHECK(l.residual < 1e-6);
  CHECK(l2_norm(l.minimizer) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate(l.minimizer) > 0.0);
  CHECK(std::abs(l.flux_diag[0]) < 1e-6);
}

TEST_CASE("reciprocity and shift identities") {
  const BasisPtr b = testutil::annulus(16.0);
  const auto& d = b->grid();
  const double l = lambda_plain(*b).value;
  CHECK(l * lambda_big(*b).value == doctest::Approx(1.0).epsilon(1e-8));
  ScalarField c(b->domain()), cg(b->domain());
  for (std::size_t p : d.interior_nodes()) {
    c[p] = d.x(p) * d.y(p);
    cg[p] = c[p] - 0.4;
  }
  CHECK(lambda_c(*b, cg).value == doctest::Approx(lambda_c(*b, c).value - 0.4).epsilon(1e-9));
  CHECK(lambda_dirichlet(*b).value > l);
}

TEST_CASE("weak positive definiteness") {
  const BasisPtr b = testutil::annulus(16.0);
  const double l = lambda_plain(*b).value;
  ScalarField gp(b->domain());
  const WeakPosDef trivial = weak_pos_def(*b, gp);
  CHECK(trivial.trivial);
  for (std::size_t p : b->grid().interior_nodes()) gp[p] = 0.5 * l;
  const WeakPosDef w = weak_pos_def(*b, gp);
  CHECK_FALSE(w.trivial);
  CHECK(w.delta0 >= l - 0.5 * l - 1e-6);
}

TEST_CASE("stability verdicts for linear g") {
  const BasisPtr b = testutil::annulus(16.0);
  const double l = lambda_plain(*b).value;
  const CriterionReport lo = check_stability(*b, steady_linear(*b, 0.5 * l, {1.0}));
  CHECK(lo.satisfied());
  CHECK(lo.min_positive_ok);
  CHECK(lo.max_below_lambda_ok);
  CHECK(lo.reciprocity_defect < 1e-8);
  CHECK(lo.mu_min == doctest::Approx(0.5 * l).epsilon(1e-6));
  const CriterionReport hi = check_stability(*b, steady_linear(*b, 1.5 * l, {1.0}));
  CHECK_FALSE(hi.satisfied());
  CHECK_FALSE(hi.max_below_lambda_ok);
  const CriterionReport zero = check_stability(*b, steady_linear(*b, 0.0, {1.0}));
  CHECK(zero.constant_branch);
  CHECK(zero.satisfied());
}
