#include <algorithm>
#include <cmath>

#include "arnold/rearrange.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace arnold;

namespace {

std::vector<double> sorted_interior(const ScalarField& f) {
  std::vector<double> v;
  for (std::size_t p : f.grid().interior_nodes()) v.push_back(f[p]);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("Hardy-Littlewood assignment") {
  const std::vector<double> out = hl_assign({1.0, 3.0, 2.0}, {0.5, -1.0, 4.0});
  CHECK(out == std::vector<double>{2.0, 1.0, 3.0});
  // Ties in w keep index order.
  CHECK(hl_assign({5.0, 7.0}, {1.0, 1.0}) == std::vector<double>{7.0, 5.0});
  CHECK_THROWS(hl_assign({1.0}, {1.0, 2.0}));
}

TEST_CASE("Hardy-Littlewood assignment maximizes the pairing") {
  const std::vector<double> v0{0.0, 1.0, 1.0, 2.0, 3.0};
  const std::vector<double> w{0.3, -2.0, 0.3, 1.0, -0.1};
  const auto hl = hl_assign(v0, w);
  double best = 0.0, val = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) val += hl[i] * w[i];
  auto perm = v0;
  best = -1e300;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += perm[i] * w[i];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(val == best);
}

TEST_CASE("random swaps are deterministic rearrangements") {
  const BasisPtr b = testutil::annulus(16.0);
  const ScalarField w = testutil::random_interior(b->domain(), 5);
  const RearrangementSample s1 = random_swaps(w, 10, 42), s2 = random_swaps(w, 10, 42);
  CHECK(s1.swap_count == 10);
  CHECK(s1.w.values() == s2.w.values());
  CHECK(sorted_interior(s1.w) == sorted_interior(w));
  CHECK(s1.distance_lp == doctest::Approx(l2_norm(s1.w - w)));
  CHECK(histogram_distance(s1.w, w) == 0.0);
  CHECK(splitmix64(1) == splitmix64(1));
  CHECK(splitmix64(1) != splitmix64(2));
}

TEST_CASE("bounded swaps stay inside the radius") {
  const BasisPtr b = testutil::annulus(16.0);
  const ScalarField w = testutil::random_interior(b->domain(), 6);
  const double r = 0.05 * l2_norm(w);
  for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(random_swaps_within(w, 30, r, seed).distance_lp < r);
  CHECK_THROWS(random_swaps_within(w, 3, 0.0, 1));
}

TEST_CASE("histogram distance of disjoint fields is twice the area") {
  const DomainPtr d = build_annulus(1.0, 2.0, 8.0);
  ScalarField a(d), c(d);
  for (std::size_t p : d->interior_nodes()) {
    a[p] = 0.0;
    c[p] = 1.0;
  }
  CHECK(histogram_distance(a, c) == doctest::Approx(2.0 * d->area()));
  CHECK(histogram_distance(a, a) == 0.0);
  CHECK_THROWS(histogram_distance(a, c, 0));
}

TEST_CASE("probes on a stable steady state") {
  const BasisPtr b = testutil::annulus(16.0);
  const double l = lambda_plain(*b).value;
  const SteadyState s = steady_linear(*b, 0.5 * l, {1.0});
  ScalarField w(b->domain());
  for (std::size_t p : b->grid().interior_nodes()) w[p] = s.omega_bar[p];
  const ProbeReport lm = local_max_probe(*b, s, 0.1 * l2_norm(w), 40, 7);
  CHECK(lm.rows.size() == 40);
  CHECK(lm.violations == 0);
  CHECK(lm.max_distance < 0.1 * l2_norm(w));
  const LegendrePair lp = legendre(extend_g(s.g, s.m_lo, s.m_hi));
  const ProbeReport sp = supporting_probe(*b, s, lp, 20, 7);
  CHECK(sp.rows.size() == 21);
  CHECK(sp.violations == 0);
  CHECK(std::abs(sp.rows.front().mu) < 1e-8);
}

TEST_CASE("exhaustive probe on the tiny ring") {
  const BasisPtr b = solve_basis(build_tiny_ring(), 1e-12, Backend::cholesky);
  const double l = lambda_plain(*b).value;
  const SteadyState s = steady_linear(*b, 0.5 * l, {1.0});
  const ProbeReport r = exhaustive_swap_probe(*b, s);
  CHECK(r.rows.size() == 28);
  CHECK(r.max_excess <= 16.0 * 2.3e-16 * std::abs(r.E_bar));
  const BasisPtr big = testutil::annulus(8.0);
  CHECK_THROWS(exhaustive_swap_probe(*big, steady_linear(*big, 1.0, {1.0})));
}

TEST_CASE("local probe refuses an uncertified state") {
  const BasisPtr b = testutil::annulus(8.0);
  SteadyState s = steady_linear(*b, 1.0, {1.0});
  s.certified = false;
  CHECK_THROWS(local_max_probe(*b, s, 1.0, 2, 1));
}
