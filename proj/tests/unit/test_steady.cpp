#include <cmath>

#include "arnold/oracle.hpp"
#include "arnold/steady.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace arnold;

TEST_CASE("linear steady state is certified and radial") {
  const BasisPtr b = testutil::annulus(32.0);
  const double l = lambda_plain(*b).value;
  const SteadyState s = steady_linear(*b, 0.5 * l, {1.0});
  CHECK(s.certified);
  CHECK(s.residual_pde < 1e-9);
  CHECK(s.flux_errors[0] < 1e-9);
  CHECK(s.m_lo <= s.m_hi);
  const RadialProfile u = radial_stream({1.0, 2.0, 4096}, [](double) { return 0.0; }, 1.0, 0.5 * l);
  double e = 0.0, m = 0.0;
  for (std::size_t p : b->grid().interior_nodes()) {
    e = std::max(e, std::abs(s.psi_bar[p] - u(testutil::radius(b->grid(), p))));
    m = std::max(m, std::abs(u(testutil::radius(b->grid(), p))));
  }
  CHECK(e / m < 0.01);
}

TEST_CASE("Picard iteration reproduces the linear state") {
  const BasisPtr b = testutil::annulus(16.0);
  const SteadyState lin = steady_linear(*b, 1.0, {1.0});
  PicardOptions opt;
  opt.damping = 0.5;
  const SteadyState pic = steady_picard(*b, GFunc::linear(1.0), {1.0}, ScalarField(b->domain()), opt);
  CHECK(pic.certified);
  CHECK(pic.iterations > 1);
  double diff = 0.0;
  for (std::size_t p : b->grid().interior_nodes()) diff = std::max(diff, std::abs(pic.psi_bar[p] - lin.psi_bar[p]));
  CHECK(diff < 1e-9);
}

TEST_CASE("nonlinear Picard state satisfies the PDE") {
  const BasisPtr b = testutil::annulus(16.0);
  const GFunc g = GFunc::tabulated({-1.0, 0.0, 1.0}, {-0.5, 0.0, 1.0});
  const SteadyState s = steady_picard(*b, g, {1.0});
  CHECK(s.certified);
  for (std::size_t p : b->grid().interior_nodes()) CHECK(s.omega_bar[p] == doctest::Approx(g(s.psi_bar[p])));
}

TEST_CASE("resonant and invalid inputs are rejected") {
  const BasisPtr b = testutil::annulus(16.0);
  const double l = lambda_plain(*b).value;
  CHECK_THROWS_AS(steady_linear(*b, l, {1.0}), ResonanceError);
  CHECK_THROWS_AS(steady_linear(*b, 1.0, {1.0, 2.0}), std::invalid_argument);
  PicardOptions bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(steady_picard(*b, GFunc::linear(1.0), {1.0}, {}, bad), std::invalid_argument);
  CHECK_THROWS_AS(steady_picard(*b, GFunc::linear(-1.0), {1.0}), std::invalid_argument);
}

TEST_CASE("certification flags a wrong state") {
  const BasisPtr b = testutil::annulus(16.0);
  const SteadyState s = steady_linear(*b, 1.0, {1.0});
  CHECK_FALSE(certify_state(*b, s.psi_bar, GFunc::linear(2.0), {1.0}).certified);
  CHECK_FALSE(certify_state(*b, s.psi_bar, GFunc::linear(1.0), {3.0}).certified);
  CHECK(certify_state(*b, s.psi_bar, GFunc::linear(1.0), {1.0}).certified);
}
