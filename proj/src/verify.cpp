#include "arnold/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "arnold/dynamics.hpp"
#include "arnold/oracle.hpp"

namespace arnold {

namespace {

constexpr double kRin = 1.0;
constexpr double kRout = 2.0;
constexpr double kRes = 32.0;

class Builder {
 public:
  Builder(int id, std::string title) { r_.id = id, r_.title = std::move(title); }
  void check(const std::string& name, double value, const std::string& rel, double limit) {
    bool ok = false;
    if (rel == "<=") ok = value <= limit;
    else if (rel == ">=") ok = value >= limit;
    else if (rel == "<") ok = value < limit;
    else if (rel == ">") ok = value > limit;
    else if (rel == "==") ok = value == limit;
    if (!std::isfinite(value)) ok = false;
    r_.metrics.push_back({name, value, rel, limit, ok});
  }
  void flag(const std::string& name, bool value) { check(name, value ? 1.0 : 0.0, "==", 1.0); }
  void table(const std::string& stem, CsvTable t) { r_.tables.emplace_back(stem, std::move(t)); }
  void note(const std::string& s) { r_.note = s; }
  CriterionResult finish() {
    r_.passed = !r_.metrics.empty() &&
                std::all_of(r_.metrics.begin(), r_.metrics.end(), [](const Metric& m) { return m.ok; });
    return std::move(r_);
  }

 private:
  CriterionResult r_;
};

BasisPtr annulus_basis(double res) {
  return solve_basis(build_annulus(kRin, kRout, res), 1e-12, Backend::cholesky);
}

double radius(const GridDomain& d, std::size_t p) { return std::hypot(d.x(p), d.y(p)); }

ScalarField random_field(const DomainPtr& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  ScalarField f(d);
  for (std::size_t p : d->interior_nodes()) f[p] = U(rng);
  return f;
}

ScalarField interior_only(const ScalarField& f) {
  ScalarField out(f.domain());
  for (std::size_t p : f.grid().interior_nodes()) out[p] = f[p];
  return out;
}

struct StableSetup {
  BasisPtr basis;
  double lambda_h = 0.0;
  SteadyState state;
};

StableSetup stable_setup(double res) {
  StableSetup s;
  s.basis = annulus_basis(res);
  s.lambda_h = lambda_plain(*s.basis).value;
  LinearOptions lo;
  lo.lambda_h = s.lambda_h;
  s.state = steady_linear(*s.basis, 0.5 * s.lambda_h, {1.0}, lo);
  return s;
}

CriterionResult criterion1() {
  Builder b(1, "Harmonic basis");
  const AnnulusForms cf = annulus_closed_forms(kRin, kRout);
  CsvTable t({"res", "h", "zeta_max_err", "p11", "p11_closed", "p11_rel_err"});
  std::vector<double> err, prel;
  for (double res : {16.0, 32.0, 64.0}) {
    const BasisPtr bs = annulus_basis(res);
    const auto& d = bs->grid();
    double e = 0.0;
    for (std::size_t p : d.interior_nodes()) e = std::max(e, std::abs(bs->zeta(1)[p] - cf.zeta(radius(d, p))));
    const double p11 = bs->p()(0, 0);
    err.push_back(e);
    prel.push_back(std::abs(p11 - cf.p11) / cf.p11);
    t.add_row({res, d.h(), e, p11, cf.p11, prel.back()});
  }
  b.table("c01_harmonic", t);
  b.check("zeta_max_err_h32", err[1], "<=", 0.01);
  b.check("p11_rel_err_h32", prel[1], "<=", 0.02);
  b.check("err_ratio_h32_h64", err[1] / err[2], ">=", 3.0);
  b.check("err_ratio_h16_h32", err[0] / err[1], ">=", 3.0);
  return b.finish();
}

CriterionResult criterion2(std::uint64_t seed) {
  Builder b(2, "Operator identities");
  const BasisPtr bs = annulus_basis(kRes);
  const auto& d = bs->domain();
  std::mt19937_64 rng(seed);
  double sym = 0.0, pos = std::numeric_limits<double>::infinity(), lap = 0.0, cond = 0.0;
  CsvTable t({"pair", "phi_P_psi", "P_phi_psi", "sym_defect_rel", "phi_P_phi", "lap_residual_inf"});
  for (int k = 0; k < 20; ++k) {
    const ScalarField phi = random_field(d, rng);
    const ScalarField psi = random_field(d, rng);
    const ScalarField Pphi = p_apply(*bs, phi);
    const ScalarField Ppsi = p_apply(*bs, psi);
    const double a = inner(phi, Ppsi), c = inner(Pphi, psi);
    const double pp = inner(phi, Pphi), qq = inner(psi, Ppsi);
    const double rel = std::abs(a - c) / std::sqrt(pp * qq);
    const ScalarField L = neg_laplacian(Pphi);
    double res = 0.0;
    for (std::size_t p : d->interior_nodes()) res = std::max(res, std::abs(L[p] - phi[p]));
    cond = std::max(cond, max_abs_interior(Pphi - p_apply_condensed(*bs, phi, Backend::cholesky)));
    sym = std::max(sym, rel);
    pos = std::min({pos, pp, qq});
    lap = std::max(lap, res);
    t.add_row({static_cast<double>(k), a, c, rel, pp, res});
  }
  b.table("c02_identities", t);
  b.check("symmetry_defect_rel", sym, "<=", 1e-8);
  b.check("min_phi_P_phi", pos, ">", 0.0);
  b.check("lap_P_phi_minus_phi_inf", lap, "<=", 1e-8);
  b.check("green_vs_condensed_inf", cond, "<=", 1e-8);
  // Flux of P phi through Gamma_1 for a fixed smooth phi on three grids.
  CsvTable f({"res", "h", "flux_P_phi", "bound_h_norm"});
  bool trend = true;
  for (double res : {16.0, 32.0, 64.0}) {
    const BasisPtr bh = annulus_basis(res);
    const auto& g = bh->grid();
    ScalarField phi(bh->domain());
    for (std::size_t p : g.interior_nodes()) phi[p] = std::cos(g.x(p)) * std::sin(2.0 * g.y(p)) + 1.0;
    const double flux = std::abs(boundary_flux(p_apply(*bh, phi), 1));
    const double bound = g.h() * l2_norm(phi);
    trend = trend && flux <= bound;
    f.add_row({res, g.h(), flux, bound});
  }
  b.table("c02_flux", f);
  b.flag("flux_within_h_bound", trend);
  return b.finish();
}

CriterionResult criterion3() {
  Builder b(3, "Stream solve");
  const BasisPtr bs = annulus_basis(kRes);
  const auto& d = bs->grid();
  RadialProblem rp{kRin, kRout, 4096};
  struct Case {
    std::string name;
    std::function<double(double)> omega;
    double a;
  };
  const std::vector<Case> cases{{"zero_vorticity", [](double) { return 0.0; }, 1.0},
                                {"uniform_vorticity", [](double) { return 1.0; }, 1.0},
                                {"quadratic_vorticity", [](double r) { return r * r - 1.0; }, -0.5}};
  CsvTable t({"case", "a", "psi_rel_err", "circulation", "circulation_rel_err", "flux_error"});
  double worst_psi = 0.0, worst_circ = 0.0, worst_flux = 0.0;
  for (const auto& c : cases) {
    ScalarField w(bs->domain());
    for (std::size_t p : d.interior_nodes()) w[p] = c.omega(radius(d, p));
    const StreamSolution s = stream_solve(*bs, w, {c.a});
    const RadialProfile u = radial_stream(rp, c.omega, c.a);
    double e = 0.0, m = 0.0;
    for (std::size_t p : d.interior_nodes()) {
      const double ur = u(radius(d, p));
      e = std::max(e, std::abs(s.psi[p] - ur));
      m = std::max(m, std::abs(ur));
    }
    const double circ = circulation(velocity(s.psi), 1, w);
    const double crel = std::abs(circ - c.a) / std::abs(c.a);
    worst_psi = std::max(worst_psi, e / m);
    worst_circ = std::max(worst_circ, crel);
    worst_flux = std::max(worst_flux, s.flux_errors[0]);
    t.add_row({c.name, fmt17(c.a), fmt17(e / m), fmt17(circ), fmt17(crel), fmt17(s.flux_errors[0])});
  }
  b.table("c03_stream", t);
  b.check("psi_rel_err_max", worst_psi, "<=", 0.01);
  b.check("circulation_rel_err_max", worst_circ, "<=", 0.02);
  b.check("flux_identity_err", worst_flux, "<=", 1e-9);
  return b.finish();
}

CriterionResult criterion4() {
  Builder b(4, "Spectra");
  const BasisPtr bs = annulus_basis(kRes);
  const auto& d = bs->grid();
  const SpectralResult lam = lambda_plain(*bs);
  const SpectralResult big = lambda_big(*bs);
  const RadialEigen re = radial_eigen(RadialProblem{kRin, kRout, 4096});
  ScalarField c(bs->domain());
  for (std::size_t p : d.interior_nodes()) c[p] = std::sin(d.x(p)) * std::cos(d.y(p));
  const double gamma = 0.75;
  ScalarField cg = c;
  for (std::size_t p : d.interior_nodes()) cg[p] += gamma;
  const SpectralResult lc = lambda_c(*bs, c);
  const SpectralResult lcg = lambda_c(*bs, cg);
  ScalarField shift(bs->domain());
  for (std::size_t p : d.interior_nodes()) shift[p] = gamma;
  const SpectralResult l0g = lambda_c(*bs, shift);
  const double shift_defect = std::max(std::abs(lcg.value - lc.value - gamma), std::abs(l0g.value - lam.value - gamma));
  const double el = std::max({lam.residual, lc.residual, lcg.residual, l0g.residual});
  CsvTable t({"quantity", "value"});
  t.add_row(std::vector<std::string>{"lambda_h", fmt17(lam.value)});
  t.add_row(std::vector<std::string>{"lambda_oracle", fmt17(re.mu)});
  t.add_row(std::vector<std::string>{"Lambda_h", fmt17(big.value)});
  t.add_row(std::vector<std::string>{"lambda_Lambda_minus_1", fmt17(lam.value * big.value - 1.0)});
  t.add_row(std::vector<std::string>{"lambda_c", fmt17(lc.value)});
  t.add_row(std::vector<std::string>{"lambda_c_plus_gamma", fmt17(lcg.value)});
  t.add_row(std::vector<std::string>{"shift_defect", fmt17(shift_defect)});
  t.add_row(std::vector<std::string>{"el_residual_max", fmt17(el)});
  b.table("c04_spectra", t);
  b.check("lambda_rel_err_vs_oracle", std::abs(lam.value - re.mu) / re.mu, "<=", 0.01);
  b.check("lambda_Lambda_minus_1", std::abs(lam.value * big.value - 1.0), "<=", 1e-8);
  b.check("shift_identity_defect", shift_defect, "<=", 1e-8);
  b.check("euler_lagrange_residual", el, "<=", 1e-6);
  return b.finish();
}

CriterionResult criterion5() {
  Builder b(5, "Criterion logic");
  const BasisPtr bs = annulus_basis(kRes);
  const double lh = lambda_plain(*bs).value;
  LinearOptions lo;
  lo.lambda_h = lh;
  CsvTable t({"kappa_over_lambda", "kappa", "certified", "satisfied", "mu_min", "delta0", "lambda_minus_kappa",
              "gprime_min", "gprime_max"});
  bool stable_ok = false, unstable_flagged = false, certified = true;
  double margin = 0.0;
  for (double f : {0.5, 1.5}) {
    const double kappa = f * lh;
    const SteadyState s = steady_linear(*bs, kappa, {1.0}, lo);
    const CriterionReport cr = check_stability(*bs, s);
    certified = certified && s.certified;
    if (f == 0.5) {
      stable_ok = cr.satisfied();
      margin = cr.delta0 - (lh - kappa);
    } else {
      unstable_flagged = !cr.satisfied();
    }
    t.add_row({f, kappa, s.certified ? 1.0 : 0.0, cr.satisfied() ? 1.0 : 0.0, cr.mu_min, cr.delta0, lh - kappa,
               cr.gprime_min, cr.gprime_max});
  }
  b.table("c05_criterion", t);
  b.flag("states_certified", certified);
  b.flag("satisfied_at_half_lambda", stable_ok);
  b.flag("violated_at_one_and_half_lambda", unstable_flagged);
  b.check("delta0_minus_gap", margin, ">=", -1e-6);
  return b.finish();
}

CriterionResult criterion6(std::uint64_t seed) {
  Builder b(6, "Functional chain");
  const StableSetup st = stable_setup(kRes);
  const SteadyState& s = st.state;
  const LegendrePair lp = legendre(extend_g(s.g, s.m_lo, s.m_hi));
  // Young inequality on a 100 x 100 grid.
  const double t0 = s.m_lo - 2.0, t1 = s.m_hi + 2.0;
  const double s0 = lp.g()(t0), s1 = lp.g()(t1);
  double young = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double sv = s0 + (s1 - s0) * i / 99.0;
    const double gh = lp.Ghat(sv);
    for (int j = 0; j < 100; ++j) {
      const double tv = t0 + (t1 - t0) * j / 99.0;
      young = std::min(young, lp.G(tv) + gh - sv * tv);
    }
  }
  const ProbeReport pr = supporting_probe(*st.basis, s, lp, 100, seed, 1e-6);
  const ProbeRow& r0 = pr.rows.front();
  const double scale = std::max({std::abs(r0.EC), std::abs(r0.D_hat), std::abs(r0.D)});
  const double eq = std::max({std::abs(r0.EC - r0.D_hat), std::abs(r0.D_hat - r0.D), std::abs(r0.EC - r0.D)}) / scale;
  double mu_res = 0.0;
  for (const auto& r : pr.rows) mu_res = std::max(mu_res, r.mu_residual);
  CsvTable t({"seed", "swap_count", "distance", "E", "EC", "D_hat", "D", "mu", "mu_residual", "chain_excess",
              "violation"});
  for (const auto& r : pr.rows)
    t.add_row({std::to_string(r.seed), std::to_string(r.swap_count), fmt17(r.distance), fmt17(r.E), fmt17(r.EC),
               fmt17(r.D_hat), fmt17(r.D), fmt17(r.mu), fmt17(r.mu_residual), fmt17(r.dE),
               r.chain_violation ? "1" : "0"});
  b.table("c06_chain", t);
  b.check("young_min", young, ">=", -1e-8);
  b.check("chain_violations", static_cast<double>(pr.violations), "==", 0.0);
  b.check("equality_at_omega_bar_rel", eq, "<=", 1e-6);
  b.check("mu_at_omega_bar", std::abs(r0.mu), "<=", 1e-6);
  b.check("mu_residual_max", mu_res, "<=", 1e-8);
  return b.finish();
}

CriterionResult criterion7(std::uint64_t seed) {
  Builder b(7, "Local-maximizer probe");
  const StableSetup st = stable_setup(kRes);
  const double radius = 0.1 * l2_norm(interior_only(st.state.omega_bar));
  const ProbeReport pr = local_max_probe(*st.basis, st.state, radius, 200, seed, 1e-8);
  CsvTable t({"seed", "swap_count", "distance", "E", "dE", "violation"});
  for (const auto& r : pr.rows)
    t.add_row({std::to_string(r.seed), std::to_string(r.swap_count), fmt17(r.distance), fmt17(r.E), fmt17(r.dE),
               r.energy_violation ? "1" : "0"});
  b.table("c07_probe", t);
  // Tiny ring: every transposition of its 8 interior cells.
  const BasisPtr tiny = solve_basis(build_tiny_ring(), 1e-12, Backend::cholesky);
  const double lt = lambda_plain(*tiny).value;
  const SteadyState ts = steady_linear(*tiny, 0.5 * lt, {1.0});
  const ProbeReport ex = exhaustive_swap_probe(*tiny, ts);
  CsvTable e({"pair", "dE"});
  for (const auto& r : ex.rows) e.add_row({static_cast<double>(r.seed), r.dE});
  b.table("c07_exhaustive", e);
  b.check("violations", static_cast<double>(pr.violations), "==", 0.0);
  b.check("max_distance_over_radius", pr.max_distance / radius, "<", 1.0);
  b.check("tiny_transpositions", static_cast<double>(ex.rows.size()), "==", 28.0);
  // Non-positive up to the rounding resolution of E.
  b.check("tiny_max_dE_over_ulpE", ex.max_excess / (std::numeric_limits<double>::epsilon() * std::abs(ex.E_bar)),
          "<=", 16.0);
  b.note("tiny max dE = " + fmt17(ex.max_excess));
  return b.finish();
}

CriterionResult criterion8() {
  Builder b(8, "Hardy-Littlewood coupling");
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> W(-3, 3);
  long cases = 0, mismatches = 0, dominated = 0;
  // All multisets over {0,1,2,3} of sizes 1..8, three weight vectors each.
  for (int n = 1; n <= 8; ++n) {
    std::vector<int> counts(4, 0);
    std::function<void(int, int)> rec = [&](int letter, int left) {
      if (letter == 3) {
        counts[3] = left;
        std::vector<double> v0;
        for (int l = 0; l < 4; ++l) v0.insert(v0.end(), static_cast<std::size_t>(counts[static_cast<std::size_t>(l)]), l);
        for (int rep = 0; rep < 3; ++rep) {
          std::vector<double> w(static_cast<std::size_t>(n));
          for (auto& x : w) x = W(rng);
          const std::vector<double> hl = hl_assign(v0, w);
          double hv = 0.0;
          for (int i = 0; i < n; ++i) hv += hl[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
          std::vector<double> perm = v0;
          std::sort(perm.begin(), perm.end());
          double best = -std::numeric_limits<double>::infinity();
          do {
            double sv = 0.0;
            for (int i = 0; i < n; ++i) sv += perm[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
            best = std::max(best, sv);
            if (sv > hv) ++dominated;
          } while (std::next_permutation(perm.begin(), perm.end()));
          ++cases;
          if (hv != best) ++mismatches;
        }
        return;
      }
      for (int c = 0; c <= left; ++c) {
        counts[static_cast<std::size_t>(letter)] = c;
        rec(letter + 1, left - c);
      }
    };
    rec(0, n);
  }
  CsvTable t({"cases", "mismatches", "permutations_exceeding_hl"});
  t.add_row({static_cast<double>(cases), static_cast<double>(mismatches), static_cast<double>(dominated)});
  b.table("c08_coupling", t);
  b.check("cases", static_cast<double>(cases), "==", 3.0 * 494.0);
  b.check("mismatches", static_cast<double>(mismatches), "==", 0.0);
  b.check("permutations_exceeding_hl", static_cast<double>(dominated), "==", 0.0);
  return b.finish();
}

CsvTable series_table(const DiagnosticsSeries& s) {
  std::vector<std::string> head{"t", "step", "energy", "kinetic"};
  for (std::size_t k = 0; k < s.rows.front().circulations.size(); ++k) head.push_back("circulation_" + std::to_string(k + 1));
  for (const char* c : {"deviation", "hist_distance", "omega_min", "omega_max"}) head.emplace_back(c);
  CsvTable t(head);
  for (const auto& r : s.rows) {
    std::vector<double> v{r.t, static_cast<double>(r.step), r.energy, r.kinetic};
    v.insert(v.end(), r.circulations.begin(), r.circulations.end());
    v.insert(v.end(), {r.deviation, r.hist_distance, r.omega_min, r.omega_max});
    t.add_row(v);
  }
  return t;
}

CriterionResult criterion9() {
  Builder b(9, "Dynamics conservation");
  const double res = 64.0;
  const StableSetup st = stable_setup(res);
  const ScalarField ref = interior_only(st.state.omega_bar);
  PerturbSpec ps;
  ps.mode = PerturbMode::bump;
  ps.amplitude = 0.01 * l2_norm(ref);
  const Perturbation pt = perturb(st.state, ps);
  SimConfig cfg;
  cfg.cfl = 0.5;
  cfg.turnovers = 10.0;
  const DiagnosticsSeries s = run(st.basis, pt.omega0, pt.b, cfg, ref);
  double ek = 0.0;
  for (const auto& r : s.rows) ek = std::max(ek, std::abs(r.energy - r.kinetic) / std::abs(r.energy));
  const bool range = s.min_omega() >= s.rows.front().omega_min && s.max_omega() <= s.rows.front().omega_max;
  b.table("c09_series", series_table(s));
  b.check("energy_drift_rel", s.energy_drift(), "<=", 0.02);
  b.check("circulation_drift_rel", s.circulation_drift(), "<=", 1e-3);
  b.check("histogram_drift_rel", s.hist_drift(), "<=", 0.02);
  b.check("energy_vs_kinetic_rel", ek, "<=", 0.02);
  b.flag("range_preserved", range);
  b.note("h = 1/" + fmt17(res) + ", steps = " + std::to_string(s.final_state.step));
  return b.finish();
}

CriterionResult criterion10(const AcceptanceOptions& opt) {
  Builder b(10, "Stability experiment");
  const StableSetup st = stable_setup(kRes);
  const double delta = 0.01 * l2_norm(interior_only(st.state.omega_bar));
  const std::vector<ExperimentCase> cases{{PerturbMode::swap, delta, 0.0},
                                          {PerturbMode::bump, delta, 0.0},
                                          {PerturbMode::swap, delta, 0.01},
                                          {PerturbMode::bump, delta, 0.01},
                                          {PerturbMode::none, 0.0, 0.0}};
  SimConfig cfg;
  cfg.turnovers = 10.0;
  const ExperimentReport rep = stability_experiment(st.basis, st.state, cases, cfg, opt.seed);
  CsvTable t({"label", "amplitude", "b_shift", "initial_deviation", "sup_deviation", "ratio", "energy_drift",
              "circulation_drift", "hist_drift", "steps"});
  double worst = 0.0, control = 0.0;
  for (const auto& r : rep.rows) {
    t.add_row({r.label, fmt17(r.amplitude), fmt17(r.b_shift), fmt17(r.initial_deviation), fmt17(r.sup_deviation),
               fmt17(r.ratio), fmt17(r.energy_drift), fmt17(r.circulation_drift), fmt17(r.hist_drift),
               std::to_string(r.steps)});
    if (r.mode == PerturbMode::none)
      control = r.ratio;
    else
      worst = std::max(worst, r.ratio);
  }
  b.table("c10_experiment", t);
  b.check("max_ratio_perturbed", worst, "<=", 3.0);
  b.check("control_sup_dev_over_norm", control, "<=", 1e-3);
  return b.finish();
}

std::string concat_tables(const std::vector<CriterionResult>& rs) {
  std::string s;
  for (const auto& r : rs)
    for (const auto& [stem, t] : r.tables) s += "## " + stem + "\n" + t.to_string();
  return s;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  switch (id) {
    case 1: return criterion1();
    case 2: return criterion2(opt.seed);
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6(opt.seed);
    case 7: return criterion7(opt.seed);
    case 8: return criterion8();
    case 9: return criterion9();
    case 10: return criterion10(opt);
    default: throw std::invalid_argument("criterion id must lie in 1..10 (11 needs run_acceptance)");
  }
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream* log) {
  auto selected = [&](int id) { return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end(); };
  auto timed = [&](int id) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run_criterion(id, opt);
    } catch (const std::exception& e) {
      r.id = id;
      r.title = "criterion " + std::to_string(id);
      r.passed = false;
      r.note = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };
  std::vector<CriterionResult> out;
  std::vector<int> ids;
  for (int id = 1; id <= 10; ++id)
    if (selected(id)) ids.push_back(id);
  for (int id : ids) {
    out.push_back(timed(id));
    if (log) *log << result_line(out.back()) << std::endl;
  }
  if (selected(11)) {
    const auto t0 = std::chrono::steady_clock::now();
    const int last = opt.quick ? 8 : 10;
    std::vector<CriterionResult> first;
    for (const auto& r : out)
      if (r.id <= last) first.push_back(r);
    if (first.empty())
      for (int id = 1; id <= last; ++id) first.push_back(timed(id));
    std::vector<CriterionResult> second;
    for (const auto& r : first) second.push_back(timed(r.id));
    const std::string a = concat_tables(first), c = concat_tables(second);
    Builder b(11, "Determinism");
    b.check("csv_bytes", static_cast<double>(a.size()), ">", 0.0);
    b.flag("bit_identical_rerun", a == c);
    CsvTable t({"criterion", "csv_bytes"});
    for (const auto& r : first) {
      std::size_t n = 0;
      for (const auto& [stem, tb] : r.tables) n += tb.to_string().size();
      t.add_row({static_cast<double>(r.id), static_cast<double>(n)});
    }
    b.table("c11_determinism", t);
    CriterionResult r = b.finish();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
    if (log) *log << result_line(out.back()) << std::endl;
  }
  return out;
}

std::string result_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.title << ":";
  for (const auto& m : r.metrics) {
    char buf[160];
    std::snprintf(buf, sizeof buf, " %s=%.6g%s%.3g%s", m.name.c_str(), m.value, m.relation.c_str(), m.limit,
                  m.ok ? "" : "(!)");
    s << buf;
  }
  if (!r.note.empty()) s << " [" << r.note << "]";
  char tb[32];
  std::snprintf(tb, sizeof tb, " (%.1fs)", r.seconds);
  s << tb;
  return s.str();
}

CsvTable summary_table(const std::vector<CriterionResult>& results) {
  CsvTable t({"criterion", "title", "passed"});
  for (const auto& r : results) t.add_row({std::to_string(r.id), r.title, r.passed ? "1" : "0"});
  return t;
}

CsvTable metrics_table(const CriterionResult& r) {
  CsvTable t({"criterion", "metric", "value", "relation", "limit", "ok"});
  for (const auto& m : r.metrics)
    t.add_row({std::to_string(r.id), m.name, fmt17(m.value), m.relation, fmt17(m.limit), m.ok ? "1" : "0"});
  return t;
}

}  // namespace arnold
