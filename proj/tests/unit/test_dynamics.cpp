#include <cmath>

#include "arnold/dynamics.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace arnold;

namespace {

struct Setup {
  BasisPtr b;
  SteadyState s;
  ScalarField ref;
};

Setup stable(double res) {
  Setup st;
  st.b = testutil::annulus(res);
  st.s = steady_linear(*st.b, 0.5 * lambda_plain(*st.b).value, {1.0});
  st.ref = ScalarField(st.b->domain());
  for (std::size_t p : st.b->grid().interior_nodes()) st.ref[p] = st.s.omega_bar[p];
  return st;
}

}  // namespace

TEST_CASE("zero vorticity stays zero under a circulation flow") {
  const BasisPtr b = testutil::annulus(16.0);
  SimConfig cfg;
  cfg.t_final = 1.0;
  const DiagnosticsSeries s = run(b, ScalarField(b->domain()), {0.8}, cfg);
  CHECK(max_abs_interior(s.final_state.omega) == 0.0);
  CHECK(s.circulation_drift() < 1e-12);
  CHECK(s.final_state.t == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("steady state is nearly a fixed point") {
  const Setup st = stable(16.0);
  Simulator sim(st.b, st.ref, st.s.a, SimConfig{});
  const double dt = 0.5 * st.b->grid().h() / sim.max_speed();
  for (int i = 0; i < 100; ++i) sim.step(dt);
  CHECK(l2_norm(sim.state().omega - st.ref) / l2_norm(st.ref) <= 1e-3);
  CHECK(sim.state().step == 100);
}

TEST_CASE("monitors over a short run") {
  const Setup st = stable(32.0);
  PerturbSpec ps;
  ps.mode = PerturbMode::bump;
  ps.amplitude = 0.01 * l2_norm(st.ref);
  const Perturbation pt = perturb(st.s, ps);
  SimConfig cfg;
  cfg.turnovers = 1.0;
  const DiagnosticsSeries s = run(st.b, pt.omega0, pt.b, cfg, st.ref);
  CHECK(s.rows.size() >= 2);
  CHECK(s.turnover > 0.0);
  CHECK(s.energy_drift() < 0.02);
  CHECK(s.circulation_drift() < 1e-3);
  // Coarse grid: the histogram bound at full resolution is an acceptance check.
  CHECK(s.hist_drift() < 0.05);
  CHECK(s.min_omega() >= s.rows.front().omega_min);
  CHECK(s.max_omega() <= s.rows.front().omega_max);
  for (const auto& r : s.rows) CHECK(r.kinetic == doctest::Approx(r.energy).epsilon(0.02));
}

TEST_CASE("upwind scheme conserves circulation and range") {
  const Setup st = stable(16.0);
  SimConfig cfg;
  cfg.scheme = Scheme::upwind2;
  cfg.turnovers = 0.5;
  const DiagnosticsSeries s = run(st.b, st.ref, st.s.a, cfg, st.ref);
  CHECK(s.circulation_drift() < 1e-3);
  CHECK(s.sup_deviation() / l2_norm(st.ref) < 0.05);
  // Flux form with a divergence-free face field conserves total vorticity.
  CHECK(integrate(s.final_state.omega) == doctest::Approx(integrate(st.ref)).epsilon(1e-12));
}

TEST_CASE("perturbations") {
  const Setup st = stable(16.0);
  const Perturbation none = perturb(st.s, PerturbSpec{});
  CHECK(l2_norm(none.omega0 - st.ref) == 0.0);
  CHECK(none.b == st.s.a);
  PerturbSpec sw;
  sw.mode = PerturbMode::swap;
  sw.amplitude = 0.01 * l2_norm(st.ref);
  const Perturbation ps = perturb(st.s, sw);
  CHECK(histogram_distance(ps.omega0, st.ref) == 0.0);
  CHECK(ps.distance >= sw.amplitude);
  PerturbSpec bu;
  bu.mode = PerturbMode::bump;
  bu.amplitude = 0.02;
  bu.b = CirculationVector{1.01};
  const Perturbation pb = perturb(st.s, bu);
  CHECK(std::abs(l2_norm(pb.omega0 - st.ref) - 0.02) < 1e-12);
  CHECK(pb.b[0] == 1.01);
}

TEST_CASE("stability experiment rows") {
  const Setup st = stable(16.0);
  const double delta = 0.01 * l2_norm(st.ref);
  SimConfig cfg;
  cfg.turnovers = 1.0;
  const ExperimentReport rep =
      stability_experiment(st.b, st.s, {{PerturbMode::bump, delta, 0.0}, {PerturbMode::none, 0.0, 0.0}}, cfg, 3);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].ratio <= 3.0);
  CHECK(rep.rows[0].ratio >= 1.0);
  CHECK(rep.rows[1].ratio < 1e-3);
  CHECK(rep.omega_bar_norm == doctest::Approx(l2_norm(st.ref)));
}

TEST_CASE("configuration parsing") {
  CHECK(parse_scheme("semi-lagrangian") == Scheme::semi_lagrangian);
  CHECK(parse_scheme(scheme_name(Scheme::upwind2)) == Scheme::upwind2);
  CHECK_THROWS(parse_scheme("leapfrog"));
  CHECK(parse_perturb_mode(perturb_mode_name(PerturbMode::bump)) == PerturbMode::bump);
  SimConfig bad;
  bad.cfl = -1.0;
  CHECK_THROWS(bad.validate());
}
