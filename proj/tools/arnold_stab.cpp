#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "arnold/config.hpp"
#include "arnold/csv.hpp"
#include "arnold/dynamics.hpp"
#include "arnold/field_io.hpp"
#include "arnold/oracle.hpp"
#include "arnold/parallel.hpp"
#include "arnold/svg.hpp"
#include "arnold/verify.hpp"
#include "json.hpp"

#ifndef ARNOLD_VERSION
#define ARNOLD_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace arnold;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAcceptance = 4;

struct AcceptanceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kDomainKeys{"domain", "rin", "rout", "res", "mask", "mask-h", "backend", "tol"};
const std::vector<std::string> kGKeys{"g", "kappa", "g-offset", "g-table", "a", "method", "damping", "max-iter"};

struct Subcommand {
  std::string name;
  std::string help;
  std::vector<std::string> keys;
};

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> subs{
      {"gen", "Build a domain and write its node layout", join({kDomainKeys, {"seed", "out"}})},
      {"harmonic", "Harmonic boundary basis and Gram matrix", join({kDomainKeys, {"seed", "out"}})},
      {"stream", "Stream function for a vorticity field and circulations",
       join({kDomainKeys, {"omega", "a", "seed", "out"}})},
      {"functional", "Energy, energy-Casimir and supporting functionals on rearrangements",
       join({kDomainKeys, kGKeys, {"samples", "seed", "out"}})},
      {"spectra", "Extremal eigenvalues and the stability verdict", join({kDomainKeys, kGKeys, {"seed", "out"}})},
      {"steady", "Steady state for a vorticity function g", join({kDomainKeys, kGKeys, {"seed", "out"}})},
      {"probe", "Rearrangement probes around a steady state",
       join({kDomainKeys, kGKeys, {"mode", "samples", "radius", "seed", "out"}})},
      {"simulate", "Time integration with conservation monitors",
       join({kDomainKeys, kGKeys,
             {"b", "scheme", "cfl", "dt", "turnovers", "t-final", "cadence", "perturb", "amplitude", "snapshot-every",
              "seed", "out"}})},
      {"oracle", "One-dimensional radial reference values",
       {"kind", "rin", "rout", "n", "omega", "a", "kappa", "tol", "seed", "out"}},
      {"report", "Render CSV columns as an SVG line plot", {"input", "x", "y", "title", "out"}},
      {"verify-all", "Run the acceptance suite", {"domain", "quick", "only", "seed", "out"}},
  };
  return subs;
}

std::string key_help(const std::string& key) {
  static const std::map<std::string, std::string> h{
      {"domain", "annulus | tiny | rect2 | mask"},
      {"rin", "inner radius"},
      {"rout", "outer radius"},
      {"res", "grid cells per unit length"},
      {"mask", "mask file (PGM or run-length text) for --domain mask"},
      {"mask-h", "grid spacing of a mask domain"},
      {"backend", "cholesky | cg"},
      {"tol", "solver tolerance"},
      {"g", "linear | affine | table"},
      {"kappa", "slope of g; a trailing L scales the smallest eigenvalue (0.5L)"},
      {"g-offset", "constant term of an affine g"},
      {"g-table", "samples s:g,s:g,... of a tabulated g"},
      {"a", "circulations, comma separated"},
      {"b", "circulations of the evolved flow (defaults to a)"},
      {"method", "linear | picard"},
      {"damping", "Picard damping in (0,1]"},
      {"max-iter", "Picard iteration cap"},
      {"omega", "zero | one | r2m1 | random"},
      {"samples", "number of samples"},
      {"mode", "local | supporting | exhaustive"},
      {"radius", "probe radius relative to the steady vorticity norm"},
      {"scheme", "semi-lagrangian | upwind2"},
      {"cfl", "CFL number"},
      {"dt", "fixed time step (0 = from CFL)"},
      {"turnovers", "horizon in turnover times"},
      {"t-final", "explicit horizon"},
      {"cadence", "steps between diagnostics rows"},
      {"perturb", "none | swap | bump"},
      {"amplitude", "perturbation size relative to the steady vorticity norm"},
      {"snapshot-every", "write the vorticity every N diagnostics rows (0 = off)"},
      {"kind", "closed | stream | eigen"},
      {"n", "radial intervals"},
      {"input", "CSV file to plot"},
      {"x", "x column"},
      {"y", "y columns, comma separated"},
      {"title", "plot title"},
      {"quick", "rerun only criteria 1-8 for the determinism check"},
      {"only", "criteria to run, comma separated"},
      {"seed", "random seed"},
      {"out", "output directory"},
  };
  const auto it = h.find(key);
  return it == h.end() ? key : it->second;
}

class Context {
 public:
  Context(std::string sub, ConfigMap cfg) : sub_(std::move(sub)), cfg_(std::move(cfg)) {
    out_ = str("out", "out");
    fs::create_directories(out_);
  }

  bool has(const std::string& k) const { return cfg_.count(k) != 0; }
  std::string str(const std::string& k, const std::string& def) const { return has(k) ? cfg_.at(k) : def; }
  double num(const std::string& k, double def) const { return has(k) ? config_double(k, cfg_.at(k)) : def; }
  long integer(const std::string& k, long def) const { return has(k) ? config_long(k, cfg_.at(k)) : def; }
  std::vector<double> list(const std::string& k, std::vector<double> def) const {
    return has(k) ? parse_real_list(k, cfg_.at(k)) : def;
  }
  double positive(const std::string& k, double def) const {
    const double v = num(k, def);
    if (!(v > 0.0)) throw ConfigError(k + " must be positive");
    return v;
  }
  std::uint64_t seed() const {
    const long s = integer("seed", 20240607);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    return static_cast<std::uint64_t>(s);
  }

  fs::path path(const std::string& name) {
    outputs_.push_back(name);
    return out_ / name;
  }
  void write_csv(const std::string& name, const CsvTable& t) { t.write(path(name).string()); }
  void write_text(const std::string& name, const std::string& text) {
    std::ofstream f(path(name), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (out_ / name).string());
    f << text;
  }

  nlohmann::json& extra() { return extra_; }
  const nlohmann::json& extra() const { return extra_; }
  const ConfigMap& config() const { return cfg_; }
  const std::string& sub() const { return sub_; }
  const fs::path& out() const { return out_; }
  const std::vector<std::string>& outputs() const { return outputs_; }

 private:
  std::string sub_;
  ConfigMap cfg_;
  fs::path out_;
  std::vector<std::string> outputs_;
  nlohmann::json extra_ = nlohmann::json::object();
};

// Domain and basis.

Backend backend(const Context& c) {
  const std::string b = c.str("backend", "cholesky");
  if (b == "cholesky") return Backend::cholesky;
  if (b == "cg") return Backend::cg;
  throw ConfigError("backend must be cholesky or cg");
}

DomainPtr make_domain(const Context& c) {
  const std::string kind = c.str("domain", "annulus");
  if (kind == "annulus") {
    const double rin = c.positive("rin", 1.0), rout = c.positive("rout", 2.0);
    if (!(rout > rin)) throw ConfigError("rout must exceed rin");
    return build_annulus(rin, rout, c.positive("res", 32.0));
  }
  if (kind == "tiny") return build_tiny_ring();
  if (kind == "rect2") {
    const double res = c.positive("res", 32.0);
    return build_rect_with_holes(2.0, 1.0, 1.0 / res, {{0.25, 0.25, 0.5, 0.75}, {1.25, 0.25, 1.5, 0.5}});
  }
  if (kind == "mask") {
    if (!c.has("mask")) throw ConfigError("--domain mask needs --mask");
    return load_mask_domain(c.str("mask", ""), c.positive("mask-h", 1.0));
  }
  throw ConfigError("unknown domain: " + kind);
}

BasisPtr make_basis(const Context& c) { return solve_basis(make_domain(c), c.positive("tol", 1e-12), backend(c)); }

CirculationVector circulations(const Context& c, const std::string& key, const HarmonicBasis& b,
                               const CirculationVector& def) {
  CirculationVector a = c.list(key, def.empty() ? CirculationVector(static_cast<std::size_t>(b.n()), 1.0) : def);
  if (static_cast<int>(a.size()) != b.n())
    throw ConfigError(key + " needs " + std::to_string(b.n()) + " entries for this domain");
  return a;
}

// Steady state from the g keys.

double parse_kappa(const Context& c, const HarmonicBasis& b, double def_rel) {
  std::string k = c.str("kappa", "");
  if (k.empty()) return def_rel * lambda_plain(b).value;
  if (k.back() == 'L' || k.back() == 'l') {
    k.pop_back();
    return config_double("kappa", k) * lambda_plain(b).value;
  }
  return config_double("kappa", k);
}

GFunc make_g(const Context& c, double kappa) {
  const std::string kind = c.str("g", "linear");
  if (kind == "linear") return GFunc::linear(kappa);
  if (kind == "affine") return GFunc::affine(kappa, c.num("g-offset", 0.0));
  if (kind == "table") {
    if (!c.has("g-table")) throw ConfigError("--g table needs --g-table");
    std::vector<double> s, g;
    std::stringstream ss(c.str("g-table", ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ConfigError("g-table entries look like s:g");
      s.push_back(config_double("g-table", item.substr(0, colon)));
      g.push_back(config_double("g-table", item.substr(colon + 1)));
    }
    try {
      return GFunc::tabulated(s, g);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("g-table: ") + e.what());
    }
  }
  throw ConfigError("unknown g: " + kind);
}

SteadyState make_state(Context& c, const HarmonicBasis& b) {
  const double kappa = parse_kappa(c, b, 0.5);
  const GFunc g = make_g(c, kappa);
  const CirculationVector a = circulations(c, "a", b, {});
  const std::string method = c.str("method", c.str("g", "linear") == "linear" ? "linear" : "picard");
  SteadyState s;
  if (method == "linear") {
    if (g.kind() != GFunc::Kind::linear) throw ConfigError("method linear needs g linear");
    s = steady_linear(b, kappa, a);
  } else if (method == "picard") {
    PicardOptions po;
    po.damping = c.num("damping", 1.0);
    po.max_iter = static_cast<int>(c.integer("max-iter", 2000));
    s = steady_picard(b, g, a, {}, po);
  } else {
    throw ConfigError("method must be linear or picard");
  }
  c.extra()["kappa"] = kappa;
  c.extra()["g"] = g.describe();
  return s;
}

ScalarField interior_of(const ScalarField& f) {
  ScalarField out(f.domain());
  for (std::size_t p : f.grid().interior_nodes()) out[p] = f[p];
  return out;
}

CsvTable key_values(const std::vector<std::pair<std::string, double>>& kv) {
  CsvTable t({"quantity", "value"});
  for (const auto& [k, v] : kv) t.add_row(std::vector<std::string>{k, fmt17(v)});
  return t;
}

// Subcommands.

void cmd_gen(Context& c) {
  const DomainPtr d = make_domain(c);
  c.write_csv("domain.csv", key_values({{"nx", static_cast<double>(d->nx())},
                                        {"ny", static_cast<double>(d->ny())},
                                        {"h", d->h()},
                                        {"x0", d->x0()},
                                        {"y0", d->y0()},
                                        {"interior_nodes", static_cast<double>(d->interior_nodes().size())},
                                        {"holes", static_cast<double>(d->n_holes())},
                                        {"area", d->area()}}));
  write_field(c.path("domain.sfld"), ScalarField(d));
}

void cmd_harmonic(Context& c) {
  const BasisPtr b = make_basis(c);
  CsvTable t({"i", "j", "p", "q"});
  for (int i = 0; i < b->n(); ++i)
    for (int j = 0; j < b->n(); ++j) t.add_row({double(i + 1), double(j + 1), b->p()(i, j), b->q()(i, j)});
  c.write_csv("harmonic.csv", t);
  if (const auto& geo = b->grid().geometry()) {
    const AnnulusForms cf = annulus_closed_forms(geo->r_in, geo->r_out);
    double err = 0.0;
    for (std::size_t p : b->grid().interior_nodes())
      err = std::max(err, std::abs(b->zeta(1)[p] - cf.zeta(std::hypot(b->grid().x(p), b->grid().y(p)))));
    c.write_csv("harmonic_oracle.csv", key_values({{"p11", b->p()(0, 0)},
                                                   {"p11_closed", cf.p11},
                                                   {"p11_rel_err", std::abs(b->p()(0, 0) - cf.p11) / cf.p11},
                                                   {"zeta_max_err", err}}));
  }
  for (int k = 1; k <= b->n(); ++k) write_field(c.path("zeta_" + std::to_string(k) + ".sfld"), b->zeta(k));
}

ScalarField named_vorticity(const Context& c, const HarmonicBasis& b, const std::string& name) {
  const auto& d = b.grid();
  ScalarField w(b.domain());
  std::mt19937_64 rng(splitmix64(c.seed()));
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (std::size_t p : d.interior_nodes()) {
    const double r2 = d.x(p) * d.x(p) + d.y(p) * d.y(p);
    if (name == "zero") w[p] = 0.0;
    else if (name == "one") w[p] = 1.0;
    else if (name == "r2m1") w[p] = r2 - 1.0;
    else if (name == "random") w[p] = U(rng);
    else throw ConfigError("unknown omega: " + name);
  }
  return w;
}

void cmd_stream(Context& c) {
  const BasisPtr b = make_basis(c);
  const ScalarField w = named_vorticity(c, *b, c.str("omega", "zero"));
  const CirculationVector a = circulations(c, "a", *b, {});
  const StreamSolution s = stream_solve(*b, w, a);
  const VelocityField v = velocity(s.psi);
  std::vector<std::pair<std::string, double>> kv{{"residual", s.residual}, {"energy", energy(*b, w, a)},
                                                 {"kinetic", kinetic_energy(v)}};
  for (int k = 1; k <= b->n(); ++k) {
    const std::string id = std::to_string(k);
    kv.emplace_back("a_" + id, a[static_cast<std::size_t>(k - 1)]);
    kv.emplace_back("flux_error_" + id, s.flux_errors[static_cast<std::size_t>(k - 1)]);
    kv.emplace_back("circulation_" + id, circulation(v, k, w));
  }
  c.write_csv("stream.csv", key_values(kv));
  write_field(c.path("omega.sfld"), w);
  write_field(c.path("psi.sfld"), s.psi);
}

void cmd_functional(Context& c) {
  const BasisPtr b = make_basis(c);
  const SteadyState s = make_state(c, *b);
  if (!s.certified) throw SolverError("steady state failed certification");
  const LegendrePair lp = legendre(extend_g(s.g, s.m_lo, s.m_hi));
  const ProbeReport r = supporting_probe(*b, s, lp, static_cast<std::size_t>(c.integer("samples", 20)), c.seed());
  CsvTable t({"seed", "swap_count", "distance", "E", "EC", "D_hat", "D", "mu", "mu_residual", "chain_excess"});
  for (const auto& row : r.rows)
    t.add_row({std::to_string(row.seed), std::to_string(row.swap_count), fmt17(row.distance), fmt17(row.E),
               fmt17(row.EC), fmt17(row.D_hat), fmt17(row.D), fmt17(row.mu), fmt17(row.mu_residual), fmt17(row.dE)});
  c.write_csv("functional.csv", t);
  c.extra()["violations"] = r.violations;
}

void cmd_spectra(Context& c) {
  const BasisPtr b = make_basis(c);
  const SpectralResult lam = lambda_plain(*b);
  const SpectralResult big = lambda_big(*b);
  const SpectralResult dir = lambda_dirichlet(*b);
  const SteadyState s = make_state(c, *b);
  const CriterionReport cr = check_stability(*b, s);
  c.write_csv("spectra.csv", key_values({{"lambda_h", lam.value},
                                         {"lambda_residual", lam.residual},
                                         {"Lambda_h", big.value},
                                         {"lambda_dirichlet", dir.value}}));
  CsvTable t({"kappa", "lambda_h", "Lambda_h", "lambda_Lambda_minus_1", "gprime_min", "gprime_max", "mu_min",
              "delta0", "min_positive", "max_below_lambda", "min_nonnegative", "quadform_nonnegative",
              "constant_branch", "satisfied"});
  auto flag = [](bool v) { return v ? 1.0 : 0.0; };
  t.add_row({c.extra()["kappa"].get<double>(), lam.value, big.value, lam.value * big.value - 1.0, cr.gprime_min,
             cr.gprime_max, cr.mu_min, cr.delta0, flag(cr.min_positive_ok), flag(cr.max_below_lambda_ok),
             flag(cr.min_nonneg_ok), flag(cr.quadform_ok), flag(cr.constant_branch), flag(cr.satisfied())});
  c.write_csv("criterion.csv", t);
  write_field(c.path("minimizer.sfld"), lam.minimizer);
  c.extra()["satisfied"] = cr.satisfied();
}

void cmd_steady(Context& c) {
  const BasisPtr b = make_basis(c);
  const SteadyState s = make_state(c, *b);
  std::vector<std::pair<std::string, double>> kv{{"kappa", c.extra()["kappa"].get<double>()},
                                                 {"certified", s.certified ? 1.0 : 0.0},
                                                 {"residual_pde", s.residual_pde},
                                                 {"m_lo", s.m_lo},
                                                 {"m_hi", s.m_hi},
                                                 {"m", s.m},
                                                 {"iterations", static_cast<double>(s.iterations)}};
  for (std::size_t k = 0; k < s.flux_errors.size(); ++k) kv.emplace_back("flux_error_" + std::to_string(k + 1), s.flux_errors[k]);
  c.write_csv("steady.csv", key_values(kv));
  write_field(c.path("psi_bar.sfld"), s.psi_bar);
  write_field(c.path("omega_bar.sfld"), s.omega_bar);
  if (!s.certified) throw SolverError("steady state failed certification");
}

void cmd_probe(Context& c) {
  const BasisPtr b = make_basis(c);
  const SteadyState s = make_state(c, *b);
  const std::string mode = c.str("mode", "local");
  const auto n = static_cast<std::size_t>(c.integer("samples", 200));
  ProbeReport r;
  if (mode == "local") {
    r = local_max_probe(*b, s, c.positive("radius", 0.1) * l2_norm(interior_of(s.omega_bar)), n, c.seed());
  } else if (mode == "exhaustive") {
    r = exhaustive_swap_probe(*b, s);
  } else if (mode == "supporting") {
    r = supporting_probe(*b, s, legendre(extend_g(s.g, s.m_lo, s.m_hi)), n, c.seed());
  } else {
    throw ConfigError("mode must be local, supporting or exhaustive");
  }
  CsvTable t({"seed", "swap_count", "distance", "E", "dE_or_excess", "violation"});
  for (const auto& row : r.rows)
    t.add_row({std::to_string(row.seed), std::to_string(row.swap_count), fmt17(row.distance), fmt17(row.E),
               fmt17(row.dE), row.energy_violation || row.chain_violation ? "1" : "0"});
  c.write_csv("probe.csv", t);
  c.write_csv("probe_summary.csv", key_values({{"samples", static_cast<double>(r.rows.size())},
                                               {"violations", static_cast<double>(r.violations)},
                                               {"max_excess", r.max_excess},
                                               {"E_bar", r.E_bar},
                                               {"tol", r.tol},
                                               {"max_distance", r.max_distance}}));
}

void cmd_simulate(Context& c) {
  const BasisPtr b = make_basis(c);
  const SteadyState s = make_state(c, *b);
  const ScalarField ref = interior_of(s.omega_bar);
  PerturbSpec ps;
  ps.mode = parse_perturb_mode(c.str("perturb", "none"));
  ps.amplitude = c.num("amplitude", 0.0) * l2_norm(ref);
  ps.seed = c.seed();
  if (c.has("b")) ps.b = circulations(c, "b", *b, s.a);
  const Perturbation pt = perturb(s, ps);
  SimConfig cfg;
  cfg.cfl = c.num("cfl", cfg.cfl);
  cfg.dt = c.num("dt", 0.0);
  cfg.turnovers = c.num("turnovers", cfg.turnovers);
  cfg.t_final = c.num("t-final", 0.0);
  cfg.cadence = static_cast<int>(c.integer("cadence", cfg.cadence));
  cfg.scheme = parse_scheme(c.str("scheme", "semi-lagrangian"));
  cfg.validate();
  const long every = c.integer("snapshot-every", 0);
  if (every < 0) throw ConfigError("snapshot-every must be nonnegative");
  long row = 0;
  const DiagnosticsSeries ser = run(b, pt.omega0, pt.b, cfg, ref, nullptr, [&](const SimState& st, const DiagnosticsRow&) {
    if (every > 0 && row % every == 0) {
      char name[48];
      std::snprintf(name, sizeof name, "omega_%08ld.sfld", st.step);
      write_field(c.path(name), st.omega);
    }
    ++row;
  });
  std::vector<std::string> head{"t", "step", "energy", "kinetic"};
  for (int k = 1; k <= b->n(); ++k) head.push_back("circulation_" + std::to_string(k));
  for (const char* h : {"deviation", "hist_distance", "omega_min", "omega_max"}) head.emplace_back(h);
  CsvTable t(head);
  for (const auto& r : ser.rows) {
    std::vector<double> v{r.t, static_cast<double>(r.step), r.energy, r.kinetic};
    v.insert(v.end(), r.circulations.begin(), r.circulations.end());
    v.insert(v.end(), {r.deviation, r.hist_distance, r.omega_min, r.omega_max});
    t.add_row(v);
  }
  c.write_csv("series.csv", t);
  c.write_csv("summary.csv", key_values({{"turnover", ser.turnover},
                                         {"dt", ser.dt},
                                         {"t_final", ser.t_final},
                                         {"initial_deviation", pt.distance},
                                         {"energy_drift", ser.energy_drift()},
                                         {"circulation_drift", ser.circulation_drift()},
                                         {"hist_drift", ser.hist_drift()},
                                         {"sup_deviation", ser.sup_deviation()}}));
  write_field(c.path("omega_final.sfld"), ser.final_state.omega);
}

void cmd_oracle(Context& c) {
  RadialProblem rp{c.positive("rin", 1.0), c.positive("rout", 2.0), static_cast<std::size_t>(c.integer("n", 4096))};
  rp.validate();
  const std::string kind = c.str("kind", "closed");
  if (kind == "closed") {
    const AnnulusForms f = annulus_closed_forms(rp.r_in, rp.r_out);
    CsvTable t({"r", "zeta"});
    for (int i = 0; i <= 32; ++i) {
      const double r = rp.r_in + (rp.r_out - rp.r_in) * i / 32.0;
      t.add_row({r, f.zeta(r)});
    }
    c.write_csv("oracle.csv", t);
    c.write_csv("oracle_constants.csv", key_values({{"p11", f.p11}, {"q11", f.q11}}));
  } else if (kind == "eigen") {
    const RadialEigen e = radial_eigen(rp, c.positive("tol", 1e-10));
    c.write_csv("oracle.csv", key_values({{"mu", e.mu},
                                          {"bracket_lo", e.bracket_lo},
                                          {"bracket_hi", e.bracket_hi},
                                          {"bisections", static_cast<double>(e.bisections)}}));
  } else if (kind == "stream") {
    const std::string w = c.str("omega", "zero");
    std::function<double(double)> f;
    if (w == "zero") f = [](double) { return 0.0; };
    else if (w == "one") f = [](double) { return 1.0; };
    else if (w == "r2m1") f = [](double r) { return r * r - 1.0; };
    else throw ConfigError("oracle omega must be zero, one or r2m1");
    const CirculationVector a = c.list("a", {1.0});
    if (a.size() != 1) throw ConfigError("the radial oracle takes one circulation");
    const RadialProfile u = radial_stream(rp, f, a[0], c.num("kappa", 0.0));
    CsvTable t({"r", "psi"});
    for (std::size_t i = 0; i < u.r.size(); ++i) t.add_row({u.r[i], u.u[i]});
    c.write_csv("oracle.csv", t);
  } else {
    throw ConfigError("kind must be closed, eigen or stream");
  }
}

void cmd_report(Context& c) {
  if (!c.has("input")) throw ConfigError("report needs --input");
  const fs::path in = c.str("input", "");
  const CsvTable t = CsvTable::read(in.string());
  PlotSpec spec;
  spec.title = c.str("title", in.stem().string());
  spec.x_column = c.str("x", t.header().front());
  if (c.has("y")) {
    std::stringstream ss(c.str("y", ""));
    std::string col;
    while (std::getline(ss, col, ',')) spec.y_columns.push_back(col);
  } else {
    for (const auto& h : t.header())
      if (h != spec.x_column) spec.y_columns.push_back(h);
  }
  try {
    c.write_text(in.stem().string() + ".svg", render_line_plot(t, spec));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void cmd_verify_all(Context& c) {
  if (c.str("domain", "annulus") != "annulus") throw ConfigError("the acceptance suite runs on the annulus");
  AcceptanceOptions opt;
  const std::string q = c.str("quick", "0");
  opt.quick = q == "1" || q == "true";
  opt.seed = c.seed();
  for (double id : c.list("only", {})) opt.only.push_back(static_cast<int>(id));
  const auto results = run_acceptance(opt, &std::cerr);
  CsvTable metrics({"criterion", "metric", "value", "relation", "limit", "ok"});
  for (const auto& r : results) {
    for (const auto& [stem, table] : r.tables) c.write_csv(stem + ".csv", table);
    const CsvTable mt = metrics_table(r);
    for (const auto& row : mt.rows()) metrics.add_row(row);
  }
  const CsvTable summary = summary_table(results);
  c.write_csv("summary.csv", summary);
  c.write_csv("metrics.csv", metrics);
  std::cout << summary.to_string();
  bool ok = !results.empty();
  nlohmann::json seconds = nlohmann::json::object();
  for (const auto& r : results) {
    ok = ok && r.passed;
    seconds[std::to_string(r.id)] = r.seconds;
  }
  c.extra()["criterion_seconds"] = seconds;
  c.extra()["passed"] = ok;
  if (!ok) throw AcceptanceFailure("acceptance suite has failures");
}

void write_manifest(const Context& c, double seconds, int exit_code, const std::string& error) {
  nlohmann::json m;
  m["subcommand"] = c.sub();
  m["config"] = c.config();
  m["version"] = ARNOLD_VERSION;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["kernels"] = std::string(kernels::name(kernels::active().isa));
  m["threads"] = thread_count();
  m["seed"] = c.str("seed", "20240607");
  m["wall_time_s"] = seconds;
  m["exit_code"] = exit_code;
  if (!error.empty()) m["error"] = error;
  m["outputs"] = c.outputs();
  m["results"] = c.extra();
  std::ofstream f(c.out() / "manifest.json");
  f << m.dump(2) << "\n";
}

using Handler = void (*)(Context&);

Handler handler(const std::string& name) {
  static const std::map<std::string, Handler> h{
      {"gen", cmd_gen},         {"harmonic", cmd_harmonic}, {"stream", cmd_stream}, {"functional", cmd_functional},
      {"spectra", cmd_spectra}, {"steady", cmd_steady},     {"probe", cmd_probe},   {"simulate", cmd_simulate},
      {"oracle", cmd_oracle},   {"report", cmd_report},     {"verify-all", cmd_verify_all}};
  return h.at(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability criteria for steady planar Euler flows in multiply connected domains", "arnold-stab"};
  app.set_version_flag("--version", ARNOLD_VERSION);
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> apps;
  for (const auto& s : subcommands()) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_paths[s.name], "key=value file; flags override it");
    for (const auto& k : s.keys) {
      if (k == "quick")
        sub->add_flag_function("--quick", [&values, name = s.name](std::int64_t) { values[name]["quick"] = "1"; },
                               key_help(k));
      else
        sub->add_option("--" + k, values[s.name][k], key_help(k));
    }
    apps[s.name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    const CLI::App* shown = &app;
    for (const auto& [n, sub] : apps)
      if (sub->parsed()) shown = sub;
    std::cerr << shown->help();
    return kExitConfig;
  }

  std::string name;
  for (const auto& [n, sub] : apps)
    if (sub->parsed()) name = n;
  const Subcommand& spec = *std::find_if(subcommands().begin(), subcommands().end(),
                                         [&](const Subcommand& s) { return s.name == name; });
  const auto t0 = std::chrono::steady_clock::now();
  std::unique_ptr<Context> ctx;
  int code = 0;
  std::string error;
  try {
    ConfigMap cfg;
    if (!config_paths[name].empty()) {
      cfg = read_config(config_paths[name]);
      reject_unknown(cfg, spec.keys);
    }
    for (const auto& k : spec.keys) {
      CLI::App* sub = apps[name];
      if (k == "quick") {
        if (values[name].count("quick")) cfg["quick"] = "1";
      } else if (sub->count("--" + k) > 0) {
        cfg[k] = values[name][k];
      }
    }
    ctx = std::make_unique<Context>(name, cfg);
    handler(name)(*ctx);
  } catch (const AcceptanceFailure& e) {
    code = kExitAcceptance, error = e.what();
  } catch (const ConfigError& e) {
    code = kExitConfig, error = e.what();
  } catch (const DomainError& e) {
    code = kExitConfig, error = e.what();
  } catch (const std::invalid_argument& e) {
    code = kExitConfig, error = e.what();
  } catch (const SolverError& e) {
    code = kExitSolver, error = e.what();
  } catch (const std::exception& e) {
    code = kExitSolver, error = e.what();
  }
  if (!error.empty()) {
    std::cerr << "arnold-stab " << name << ": " << error << "\n";
    if (code == kExitConfig) std::cerr << apps[name]->help();
  }
  if (ctx) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(*ctx, secs, code, error);
  }
  return code;
}
