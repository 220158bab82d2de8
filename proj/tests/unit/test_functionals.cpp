#include <cmath>

#include "arnold/steady.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace arnold;

TEST_CASE("linear g and its Legendre pair") {
  const double k = 2.5;
  const GFunc g = GFunc::linear(k);
  CHECK(g(1.2) == doctest::Approx(3.0));
  CHECK(g.deriv(-7.0) == doctest::Approx(k));
  CHECK(g.integral(2.0) == doctest::Approx(0.5 * k * 4.0));
  const LegendrePair lp = legendre(g);
  for (double s : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
    CHECK(lp.f(s) == doctest::Approx(s / k));
    CHECK(lp.Ghat(s) == doctest::Approx(s * s / (2.0 * k)).epsilon(1e-12));
    CHECK(lp.ghat_by_quadrature(s) == doctest::Approx(lp.Ghat(s)).epsilon(1e-8));
  }
  CHECK(lp.ghat0_golden() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("affine and tabulated g") {
  const GFunc a = GFunc::affine(2.0, -1.0);
  CHECK(a(0.0) == doctest::Approx(-1.0));
  CHECK(a.integral(1.0) == doctest::Approx(0.0));
  const GFunc t = GFunc::tabulated({0.0, 1.0, 2.0, 3.0}, {0.0, 0.5, 2.0, 2.5});
  CHECK(t(1.0) == doctest::Approx(0.5));
  CHECK(t.min_slope() >= 0.0);
  for (double s = -1.0; s < 4.0; s += 0.05) CHECK(t(s + 0.05) >= t(s));
  CHECK_THROWS(GFunc::tabulated({0.0, 1.0}, {1.0, 0.0}));
  CHECK_THROWS(GFunc::tabulated({0.0, 0.0}, {1.0, 2.0}));
}

TEST_CASE("extension keeps g on the range and fixes the tails") {
  const GFunc g = GFunc::tabulated({0.0, 1.0, 2.0}, {0.0, 0.1, 0.2});
  const GFunc e = extend_g(g, 0.0, 2.0);
  CHECK(e.extended());
  for (double s : {0.0, 0.4, 1.3, 2.0}) CHECK(e(s) == doctest::Approx(g(s)).epsilon(1e-12));
  CHECK(e.right_slope() == doctest::Approx(1.0));
  CHECK(e.left_slope() == doctest::Approx(1.0));
  CHECK(e.c1() >= 1.0);
  CHECK(e.c2() >= 1.0);
}

TEST_CASE("Young inequality for an extended tabulated g") {
  const GFunc e = extend_g(GFunc::tabulated({-1.0, 0.0, 1.0}, {-2.0, 0.0, 0.3}), -1.0, 1.0);
  const LegendrePair lp = legendre(e);
  for (double s = -4.0; s <= 4.0; s += 0.25)
    for (double t = -4.0; t <= 4.0; t += 0.25) CHECK(lp.G(t) + lp.Ghat(s) - s * t >= -1e-10);
  for (double s : {-1.5, 0.1, 2.0}) CHECK(lp.G(lp.f(s)) + lp.Ghat(s) == doctest::Approx(s * lp.f(s)).epsilon(1e-10));
}

TEST_CASE("energy equals half the Dirichlet form of the stream function") {
  const BasisPtr b = testutil::annulus(16.0);
  const ScalarField w = testutil::random_interior(b->domain(), 4);
  const StreamSolution s = stream_solve(*b, w, {0.7});
  CHECK(energy(*b, w, {0.7}) == doctest::Approx(0.5 * dirichlet_form(s.psi, s.psi)).epsilon(1e-10));
}

TEST_CASE("chain functionals coincide at a steady state") {
  const BasisPtr b = testutil::annulus(16.0);
  const SteadyState s = steady_linear(*b, 1.0, {1.0});
  REQUIRE(s.certified);
  const LegendrePair lp = legendre(extend_g(s.g, s.m_lo, s.m_hi));
  ScalarField w(b->domain());
  for (std::size_t p : b->grid().interior_nodes()) w[p] = s.omega_bar[p];
  const ChainValues cv = evaluate_chain(*b, w, s.a, lp, s.m, {-1.0, 1.0});
  CHECK(cv.EC == doctest::Approx(cv.D).epsilon(1e-8));
  CHECK(cv.dhat.value == doctest::Approx(cv.D).epsilon(1e-8));
  CHECK(std::abs(cv.dhat.mu) < 1e-8);
  for (double v : cv.D_s) CHECK(v >= cv.dhat.value - 1e-8 * std::abs(cv.D));
  CHECK(energy_casimir(*b, w, s.a, lp) == doctest::Approx(cv.EC));
  CHECK(supporting_d(*b, w, s.a, lp.g()) == doctest::Approx(cv.D));
}

TEST_CASE("sandwich bounds on the stream functional") {
  const BasisPtr b = testutil::annulus(16.0);
  const SteadyState s = steady_linear(*b, 1.0, {1.0});
  const LegendrePair lp = legendre(extend_g(s.g, s.m_lo, s.m_hi));
  const ScalarField chi = 0.05 * testutil::random_interior(b->domain(), 9);
  const Sandwich sw = sandwich_bounds(*b, s.psi_bar, chi, lp);
  CHECK(sw.holds(1e-10));
  CHECK(sw.lower <= sw.upper);
}
