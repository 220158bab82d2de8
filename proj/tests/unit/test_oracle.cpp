#include <cmath>
#include <numbers>

#include "arnold/oracle.hpp"
#include "doctest.h"

using namespace arnold;

TEST_CASE("closed forms on the annulus") {
  const AnnulusForms f = annulus_closed_forms(1.0, 2.0);
  CHECK(f.p11 == doctest::Approx(2.0 * std::numbers::pi / std::log(2.0)).epsilon(1e-15));
  CHECK(f.q11 * f.p11 == doctest::Approx(1.0));
  CHECK(f.zeta(1.0) == doctest::Approx(1.0));
  CHECK(std::abs(f.zeta(2.0)) < 1e-15);
  CHECK(annulus_closed_forms(1.0, std::numbers::e).p11 == doctest::Approx(2.0 * std::numbers::pi));
  CHECK_THROWS(annulus_closed_forms(2.0, 1.0));
}

TEST_CASE("radial stream with zero vorticity is logarithmic") {
  const double gamma = 1.7;
  const RadialProfile u = radial_stream({1.0, 2.0, 4096}, [](double) { return 0.0; }, gamma);
  for (double r : {1.0, 1.25, 1.5, 1.9, 2.0})
    CHECK(u(r) == doctest::Approx(gamma / (2.0 * std::numbers::pi) * std::log(r / 2.0)).epsilon(1e-6));
  CHECK(2.0 * std::numbers::pi * u.slope_at_inner() == doctest::Approx(gamma).epsilon(1e-5));
}

TEST_CASE("radial stream with uniform vorticity matches the quadratic-log profile") {
  // -(1/r)(r u')' = 1 with u'(1) = 0, u(2) = 0.
  auto exact = [](double r) { return -0.25 * (r * r - 4.0) + 0.5 * std::log(r / 2.0); };
  const RadialProfile u = radial_stream({1.0, 2.0, 4096}, [](double) { return 1.0; }, 0.0);
  for (double r : {1.0, 1.3, 1.7}) CHECK(u(r) == doctest::Approx(exact(r)).epsilon(1e-6));
}

TEST_CASE("radial stream is second order") {
  auto exact = [](double r) { return -0.25 * (r * r - 4.0) + 0.5 * std::log(r / 2.0); };
  auto err = [&](std::size_t n) {
    const RadialProfile u = radial_stream({1.0, 2.0, n}, [](double) { return 1.0; }, 0.0);
    double e = 0.0;
    for (std::size_t i = 0; i < u.r.size(); ++i) e = std::max(e, std::abs(u.u[i] - exact(u.r[i])));
    return e;
  };
  const double ratio = err(256) / err(512);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("radial eigenvalue shooting") {
  const RadialEigen e = radial_eigen({1.0, 2.0, 4096});
  CHECK(e.mismatch_lo * e.mismatch_hi <= 0.0);
  CHECK(e.bracket_lo <= e.mu);
  CHECK(e.mu <= e.bracket_hi);
  CHECK(std::abs(shooting_mismatch({1.0, 2.0, 4096}, e.mu)) < 1e-6);
  CHECK(radial_eigen({1.0, 2.0, 8192}).mu == doctest::Approx(e.mu).epsilon(1e-8));
  // Lowest mode sits between the quarter-wave bounds of the slab problem.
  CHECK(e.mu > 2.0);
  CHECK(e.mu < 3.0 * std::numbers::pi * std::numbers::pi / 4.0);
}

TEST_CASE("radial eigenvalue grows as the gap shrinks") {
  double prev = 0.0;
  for (double ro : {2.0, 1.5, 1.25}) {
    const double mu = radial_eigen({1.0, ro, 4096}).mu;
    CHECK(mu > prev);
    prev = mu;
  }
}

TEST_CASE("radial problem validation") {
  CHECK_THROWS(RadialProblem{1.0, 2.0, 100}.validate());
  CHECK_THROWS(RadialProblem{0.0, 2.0, 4096}.validate());
  CHECK_NOTHROW(RadialProblem{1.0, 2.0, 256}.validate());
}
