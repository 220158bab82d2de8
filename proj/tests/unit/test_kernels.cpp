#include <cmath>
#include <random>
#include <vector>

#include "arnold/grid.hpp"
#include "doctest.h"

using namespace arnold;

namespace {

std::vector<double> rnd(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = U(rng);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(kernels::supported(kernels::Isa::scalar));
  CHECK(kernels::name(kernels::active().isa).size() > 0);
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const kernels::Table& ref = kernels::table(kernels::Isa::scalar);
  const DomainPtr d = build_annulus(1.0, 2.0, 20.0);
  const kernels::Stencil st = d->stencil();
  for (kernels::Isa isa : {kernels::Isa::avx2, kernels::Isa::neon}) {
    if (!kernels::supported(isa)) continue;
    const kernels::Table& t = kernels::table(isa);
    CAPTURE(kernels::name(isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
      const auto x = rnd(n, 1 + n), y = rnd(n, 2 + n), w = rnd(n, 3 + n);
      CHECK(rel(t.dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n)) <= 1e-13);
      CHECK(rel(t.wdot(w.data(), x.data(), y.data(), n), ref.wdot(w.data(), x.data(), y.data(), n)) <= 1e-13);
      auto y1 = y, y2 = y;
      t.axpy(0.37, x.data(), y1.data(), n);
      ref.axpy(0.37, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
      y1 = y, y2 = y;
      t.xpay(x.data(), -1.3, y1.data(), n);
      ref.xpay(x.data(), -1.3, y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
      y1 = y, y2 = y;
      t.mul(w.data(), x.data(), y1.data(), n);
      ref.mul(w.data(), x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);
      y1 = y, y2 = y;
      t.fma_diag(w.data(), x.data(), y1.data(), n);
      ref.fma_diag(w.data(), x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
    }
    const auto u = rnd(d->size(), 11), v = rnd(d->size(), 12);
    std::vector<double> k1(d->size()), k2(d->size());
    t.apply(st, u.data(), k1.data());
    ref.apply(st, u.data(), k2.data());
    double err = 0.0;
    for (std::size_t i = 0; i < k1.size(); ++i) err = std::max(err, std::abs(k1[i] - k2[i]));
    CHECK(err <= 1e-12);
    CHECK(rel(t.edge_form(st, u.data(), v.data()), ref.edge_form(st, u.data(), v.data())) <= 1e-12);
  }
}

TEST_CASE("edge form is symmetric and matches apply") {
  const kernels::Table& t = kernels::active();
  const DomainPtr d = build_annulus(1.0, 2.0, 12.0);
  const kernels::Stencil st = d->stencil();
  const auto u = rnd(d->size(), 5), v = rnd(d->size(), 6);
  CHECK(t.edge_form(st, u.data(), v.data()) == doctest::Approx(t.edge_form(st, v.data(), u.data())).epsilon(1e-13));
  CHECK(t.edge_form(st, u.data(), u.data()) >= 0.0);
}
