#include "arnold/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "arnold/parallel.hpp"

namespace arnold {

Scheme parse_scheme(const std::string& s) {
  if (s == "semi-lagrangian" || s == "semi-Lagrangian-cubic" || s == "sl") return Scheme::semi_lagrangian;
  if (s == "upwind2") return Scheme::upwind2;
  throw std::invalid_argument("unknown advection scheme: " + s);
}

std::string scheme_name(Scheme s) { return s == Scheme::semi_lagrangian ? "semi-lagrangian" : "upwind2"; }

PerturbMode parse_perturb_mode(const std::string& s) {
  if (s == "none") return PerturbMode::none;
  if (s == "swap") return PerturbMode::swap;
  if (s == "bump") return PerturbMode::bump;
  throw std::invalid_argument("unknown perturbation mode: " + s);
}

std::string perturb_mode_name(PerturbMode m) {
  switch (m) {
    case PerturbMode::swap: return "swap";
    case PerturbMode::bump: return "bump";
    default: return "none";
  }
}

void SimConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 0.9)) throw std::invalid_argument("CFL target must lie in (0, 0.9]");
  if (dt < 0.0) throw std::invalid_argument("dt must be positive");
  if (!(t_final > 0.0) && !(turnovers > 0.0)) throw std::invalid_argument("simulation horizon must be positive");
  if (cadence < 1) throw std::invalid_argument("diagnostics cadence must be at least 1");
  if (!(p >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
  if (hist_bins == 0) throw std::invalid_argument("histogram bins must be positive");
}

namespace {

ScalarField interior_part(const ScalarField& f) {
  ScalarField out(f.domain());
  for (std::size_t p : f.grid().interior_nodes()) out[p] = f[p];
  return out;
}

// Grid sampling helpers on full node arrays.
struct Sampler {
  const GridDomain& d;
  double fx(double x) const { return (x - d.x0()) / d.h(); }
  double fy(double y) const { return (y - d.y0()) / d.h(); }

  bool inside(double x, double y) const {
    const double gx = fx(x), gy = fy(y);
    if (!(gx >= 0.0 && gy >= 0.0)) return false;
    const auto i = static_cast<std::size_t>(gx), j = static_cast<std::size_t>(gy);
    if (i + 1 >= d.nx() || j + 1 >= d.ny()) return false;
    const std::size_t p = j * d.nx() + i;
    return d.is_interior(p) || d.is_interior(p + 1) || d.is_interior(p + d.nx()) || d.is_interior(p + d.nx() + 1);
  }

  double bilinear(const ScalarField& f, double x, double y) const {
    const double gx = std::clamp(fx(x), 0.0, static_cast<double>(d.nx() - 1));
    const double gy = std::clamp(fy(y), 0.0, static_cast<double>(d.ny() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(gx), d.nx() - 2);
    const std::size_t j = std::min(static_cast<std::size_t>(gy), d.ny() - 2);
    const double tx = gx - static_cast<double>(i), ty = gy - static_cast<double>(j);
    const std::size_t p = j * d.nx() + i;
    return (1 - ty) * ((1 - tx) * f[p] + tx * f[p + 1]) + ty * ((1 - tx) * f[p + d.nx()] + tx * f[p + d.nx() + 1]);
  }

  // Catmull-Rom bicubic, limited to the range of its 16 samples.
  double cubic(const ScalarField& f, double x, double y) const {
    const double gx = std::clamp(fx(x), 0.0, static_cast<double>(d.nx() - 1));
    const double gy = std::clamp(fy(y), 0.0, static_cast<double>(d.ny() - 1));
    const long i = std::min(static_cast<long>(gx), static_cast<long>(d.nx()) - 2);
    const long j = std::min(static_cast<long>(gy), static_cast<long>(d.ny()) - 2);
    const double tx = gx - static_cast<double>(i), ty = gy - static_cast<double>(j);
    double wx[4], wy[4];
    weights(tx, wx);
    weights(ty, wy);
    double s = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int b = 0; b < 4; ++b) {
      const long jj = std::clamp(j - 1 + b, 0L, static_cast<long>(d.ny()) - 1);
      double row = 0.0;
      for (int a = 0; a < 4; ++a) {
        const long ii = std::clamp(i - 1 + a, 0L, static_cast<long>(d.nx()) - 1);
        const double v = f[static_cast<std::size_t>(jj) * d.nx() + static_cast<std::size_t>(ii)];
        row += wx[a] * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      s += wy[b] * row;
    }
    return std::clamp(s, lo, hi);
  }

  static void weights(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2 * t2 - t);
    w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
    w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
  }
};

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace

Simulator::Simulator(BasisPtr basis, ScalarField omega0, CirculationVector b, SimConfig cfg)
    : basis_(std::move(basis)), b_(std::move(b)), cfg_(cfg), ghost_(basis_->domain(), 3) {
  cfg_.validate();
  if (static_cast<int>(b_.size()) != basis_->n()) throw std::invalid_argument("circulation vector has wrong length");
  if (omega0.size() != basis_->grid().size()) throw std::invalid_argument("initial vorticity does not match the domain");
  if (!omega0.finite()) throw std::invalid_argument("initial vorticity is not finite");
  s_.omega = interior_part(omega0);
  bool first = true;
  for (std::size_t p : basis_->grid().interior_nodes()) {
    lo_ = first ? s_.omega[p] : std::min(lo_, s_.omega[p]);
    hi_ = first ? s_.omega[p] : std::max(hi_, s_.omega[p]);
    first = false;
  }
  refresh();
}

void Simulator::refresh() {
  s_.psi = stream_direct(*basis_, s_.omega, b_, Backend::cholesky);
  s_.v = velocity(s_.psi);
}

double Simulator::max_speed() const {
  double m = 0.0;
  for (std::size_t p : basis_->grid().interior_nodes())
    m = std::max(m, std::hypot(s_.v.vx[p], s_.v.vy[p]));
  return m;
}

void Simulator::step(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (cfg_.scheme == Scheme::semi_lagrangian)
    step_semi_lagrangian(dt);
  else
    step_upwind(dt);
  if (!s_.omega.finite()) throw SolverError("non-finite vorticity at step " + std::to_string(s_.step + 1));
  s_.t += dt;
  ++s_.step;
}

void Simulator::step_semi_lagrangian(double dt) {
  const auto& d = basis_->grid();
  const Sampler S{d};
  VelocityField vh = s_.v;
  if (v_prev_) {
    for (std::size_t p = 0; p < d.size(); ++p) {
      vh.vx[p] = 1.5 * s_.v.vx[p] - 0.5 * v_prev_->vx[p];
      vh.vy[p] = 1.5 * s_.v.vy[p] - 0.5 * v_prev_->vy[p];
    }
  }
  const ScalarField wf = ghost_.apply(s_.omega);
  ScalarField next(s_.omega.domain());
  const auto& nodes = d.interior_nodes();
  parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t n = lo; n < hi; ++n) {
      const std::size_t p = nodes[n];
      const double x = d.x(p), y = d.y(p);
      const double xm = x - 0.5 * dt * S.bilinear(s_.v.vx, x, y);
      const double ym = y - 0.5 * dt * S.bilinear(s_.v.vy, x, y);
      double xd = x - dt * S.bilinear(vh.vx, xm, ym);
      double yd = y - dt * S.bilinear(vh.vy, xm, ym);
      if (!S.inside(xd, yd)) {
        // Last inside point on the segment from the arrival node.
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 40; ++it) {
          const double m = 0.5 * (a + b);
          if (S.inside(x + m * (xd - x), y + m * (yd - y)))
            a = m;
          else
            b = m;
        }
        xd = x + a * (xd - x);
        yd = y + a * (yd - y);
      }
      next[p] = std::clamp(S.cubic(wf, xd, yd), lo_, hi_);
    }
  });
  v_prev_ = s_.v;
  s_.omega = std::move(next);
  refresh();
}

ScalarField Simulator::upwind_rate(const ScalarField& w) const {
  const auto& d = basis_->grid();
  const std::size_t nx = d.nx();
  const ScalarField& psi = s_.psi;
  ScalarField rate(w.domain());
  auto val = [&](std::size_t p, std::size_t fallback) { return d.is_interior(p) ? w[p] : w[fallback]; };
  // Face fluxes are differences of psi at cell corners. A corner touching the
  // wall takes the wall value, so wall faces carry no flux and the fluxes
  // around every cell sum to zero.
  auto corner = [&](std::size_t c) {
    double sum = 0.0;
    for (std::size_t q : {c, c + 1, c + nx, c + nx + 1}) {
      if (!d.is_interior(q)) return psi[q];
      sum += psi[q];
    }
    return 0.25 * sum;
  };
  const double ih = 1.0 / d.h();
  auto face = [&](std::size_t p, std::size_t off) {
    const std::size_t q = p + off;
    if (!d.is_interior(q)) return 0.0;
    const double u = off == 1 ? (corner(p) - corner(p - nx)) * ih : -(corner(p) - corner(p - 1)) * ih;
    if (u >= 0.0) {
      const double s = minmod(w[p] - val(p - off, p), w[q] - w[p]);
      return u * (w[p] + 0.5 * s);
    }
    const double s = minmod(w[q] - w[p], val(q + off, q) - w[q]);
    return u * (w[q] - 0.5 * s);
  };
  for (std::size_t p : d.interior_nodes()) {
    const double fe = face(p, 1);
    const double fn = face(p, nx);
    rate[p] -= (fe + fn) * ih;
    if (d.is_interior(p + 1)) rate[p + 1] += fe * ih;
    if (d.is_interior(p + nx)) rate[p + nx] += fn * ih;
  }
  return rate;
}

void Simulator::step_upwind(double dt) {
  const ScalarField w0 = s_.omega;
  ScalarField w1 = w0 + dt * upwind_rate(w0);
  ScalarField w2 = w1 + dt * upwind_rate(w1);
  ScalarField out(w0.domain());
  for (std::size_t p : basis_->grid().interior_nodes()) out[p] = 0.5 * (w0[p] + w2[p]);
  v_prev_ = s_.v;
  s_.omega = std::move(out);
  refresh();
}

DiagnosticsRow Simulator::diagnostics(const ScalarField& omega_ref, const ScalarField& omega0,
                                      const LegendrePair* lp) const {
  const auto& d = basis_->grid();
  DiagnosticsRow r;
  r.t = s_.t;
  r.step = s_.step;
  r.energy = 0.5 * dirichlet_form(s_.psi, s_.psi);
  r.kinetic = kinetic_energy(s_.v);
  for (int k = 1; k <= basis_->n(); ++k) r.circulations.push_back(circulation(s_.v, k, s_.omega));
  r.deviation = lp_norm(s_.omega - interior_part(omega_ref), cfg_.p);
  r.hist_distance = histogram_distance(s_.omega, omega0, cfg_.hist_bins);
  bool first = true;
  for (std::size_t p : d.interior_nodes()) {
    r.omega_min = first ? s_.omega[p] : std::min(r.omega_min, s_.omega[p]);
    r.omega_max = first ? s_.omega[p] : std::max(r.omega_max, s_.omega[p]);
    first = false;
  }
  if (lp) r.ec = r.energy - casimir(s_.omega, *lp);
  return r;
}

double turnover_time(const VelocityField& v) {
  const auto& d = v.vx.grid();
  double s = 0.0;
  for (std::size_t p : d.interior_nodes()) s += std::hypot(v.vx[p], v.vy[p]);
  s *= d.h() * d.h();
  return s > 0.0 ? d.area() / s : std::numeric_limits<double>::infinity();
}

double DiagnosticsSeries::energy_drift() const {
  double m = 0.0;
  const double e0 = rows.front().energy;
  for (const auto& r : rows) m = std::max(m, std::abs(r.energy - e0));
  return e0 != 0.0 ? m / std::abs(e0) : m;
}

double DiagnosticsSeries::circulation_drift() const {
  double m = 0.0;
  const auto& c0 = rows.front().circulations;
  for (const auto& r : rows)
    for (std::size_t k = 0; k < c0.size(); ++k)
      m = std::max(m, std::abs(r.circulations[k] - c0[k]) / std::max(std::abs(c0[k]), 1e-300));
  return m;
}

double DiagnosticsSeries::hist_drift() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.hist_distance);
  return m / area;
}

double DiagnosticsSeries::sup_deviation() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.deviation);
  return m;
}

double DiagnosticsSeries::min_omega() const {
  double m = rows.front().omega_min;
  for (const auto& r : rows) m = std::min(m, r.omega_min);
  return m;
}

double DiagnosticsSeries::max_omega() const {
  double m = rows.front().omega_max;
  for (const auto& r : rows) m = std::max(m, r.omega_max);
  return m;
}

DiagnosticsSeries run(BasisPtr basis, const ScalarField& omega0, const CirculationVector& b, const SimConfig& cfg,
                      const ScalarField& omega_ref, const LegendrePair* lp, const RowObserver& observer) {
  Simulator sim(basis, omega0, b, cfg);
  const ScalarField w0 = sim.state().omega;
  const ScalarField& ref = omega_ref.size() ? omega_ref : w0;
  const double h = basis->grid().h();
  DiagnosticsSeries out;
  out.area = basis->grid().area();
  out.turnover = turnover_time(sim.state().v);
  out.t_final = cfg.t_final > 0.0 ? cfg.t_final : cfg.turnovers * out.turnover;
  if (!std::isfinite(out.t_final)) throw std::invalid_argument("run: zero flow needs an explicit t_final");
  const double vmax0 = sim.max_speed();
  double dt = cfg.dt > 0.0 ? cfg.dt : (vmax0 > 0.0 ? cfg.cfl * h / vmax0 : out.t_final);
  // Equal steps that land on t_final.
  const auto nsteps = static_cast<long>(std::ceil(out.t_final / dt - 1e-9));
  dt = out.t_final / static_cast<double>(std::max(1L, nsteps));
  out.dt = dt;
  auto record = [&] {
    out.rows.push_back(sim.diagnostics(ref, w0, lp));
    if (observer) observer(sim.state(), out.rows.back());
  };
  record();
  for (long n = 0; n < nsteps; ++n) {
    double step_dt = dt;
    const double vmax = sim.max_speed();
    if (cfg.dt <= 0.0 && vmax * step_dt > cfg.cfl * h * (1.0 + 1e-12)) step_dt = cfg.cfl * h / vmax;
    sim.step(step_dt);
    if ((n + 1) % cfg.cadence == 0 || n + 1 == nsteps) record();
  }
  out.final_state = sim.state();
  return out;
}

Perturbation perturb(const SteadyState& state, const PerturbSpec& spec) {
  const auto& d = state.omega_bar.grid();
  Perturbation out;
  const ScalarField base = interior_part(state.omega_bar);
  out.omega0 = base;
  out.b = spec.b ? *spec.b : state.a;
  if (out.b.size() != state.a.size()) throw std::invalid_argument("perturb: circulation vector has wrong length");
  if (spec.amplitude < 0.0) throw std::invalid_argument("perturb: amplitude must be nonnegative");
  if (spec.mode == PerturbMode::none || spec.amplitude == 0.0) return out;
  const auto& nodes = d.interior_nodes();
  const double h2 = d.h() * d.h();
  if (spec.mode == PerturbMode::swap) {
    std::mt19937_64 rng(splitmix64(spec.seed));
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    std::uniform_int_distribution<int> dir(0, 3);
    const long off[4] = {1, -1, static_cast<long>(d.nx()), -static_cast<long>(d.nx())};
    const double target = spec.amplitude * spec.amplitude / h2;
    double acc = 0.0;
    auto term = [&](std::size_t q, double v) { return (v - base[q]) * (v - base[q]); };
    for (std::size_t draws = 0; acc < target; ++draws) {
      if (draws > 100 * nodes.size() + 1000000) throw std::runtime_error("perturb: swap amplitude not reachable");
      const std::size_t p = nodes[pick(rng)];
      const auto q = static_cast<std::size_t>(static_cast<long>(p) + off[dir(rng)]);
      if (!d.is_interior(q) || out.omega0[p] == out.omega0[q]) continue;
      auto& w = out.omega0;
      acc += term(p, w[q]) + term(q, w[p]) - term(p, w[p]) - term(q, w[q]);
      std::swap(w[p], w[q]);
      ++out.swap_count;
    }
  } else {
    double cx = spec.cx, cy = spec.cy, R = spec.radius;
    if (std::isnan(cx) || std::isnan(cy)) {
      if (d.geometry()) {
        cx = 0.5 * (d.geometry()->r_in + d.geometry()->r_out);
        cy = 0.0;
      } else {
        cx = cy = 0.0;
        for (std::size_t p : nodes) {
          cx += d.x(p);
          cy += d.y(p);
        }
        cx /= static_cast<double>(nodes.size());
        cy /= static_cast<double>(nodes.size());
      }
    }
    if (!(R > 0.0)) R = d.geometry() ? 0.25 * (d.geometry()->r_out - d.geometry()->r_in) : 4.0 * d.h();
    ScalarField bump(state.omega_bar.domain());
    for (std::size_t p : nodes) {
      const double rho2 = ((d.x(p) - cx) * (d.x(p) - cx) + (d.y(p) - cy) * (d.y(p) - cy)) / (R * R);
      if (rho2 < 1.0) bump[p] = std::exp(1.0 - 1.0 / (1.0 - rho2));
    }
    const double nb = l2_norm(bump);
    if (!(nb > 0.0)) throw std::invalid_argument("perturb: bump support contains no interior node");
    out.omega0 += (spec.amplitude / nb) * bump;
  }
  out.distance = l2_norm(out.omega0 - base);
  return out;
}

ExperimentReport stability_experiment(BasisPtr basis, const SteadyState& state,
                                      const std::vector<ExperimentCase>& cases, const SimConfig& cfg,
                                      std::uint64_t seed) {
  ExperimentReport rep;
  const ScalarField ref = interior_part(state.omega_bar);
  rep.omega_bar_norm = l2_norm(ref);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const ExperimentCase& c = cases[i];
    PerturbSpec spec;
    spec.mode = c.mode;
    spec.amplitude = c.amplitude;
    spec.seed = splitmix64(seed + i);
    CirculationVector b = state.a;
    for (double& x : b) x += c.b_shift;
    spec.b = b;
    const Perturbation pt = perturb(state, spec);
    const DiagnosticsSeries s = run(basis, pt.omega0, pt.b, cfg, ref);
    ExperimentRow row;
    row.mode = c.mode;
    row.amplitude = c.amplitude;
    row.b_shift = std::abs(c.b_shift);
    row.label = perturb_mode_name(c.mode) + (c.b_shift != 0.0 ? "+b" : "");
    row.initial_deviation = pt.distance;
    row.sup_deviation = s.sup_deviation();
    row.ratio = pt.distance > 0.0 ? row.sup_deviation / pt.distance : row.sup_deviation / rep.omega_bar_norm;
    row.energy_drift = s.energy_drift();
    row.circulation_drift = s.circulation_drift();
    row.hist_drift = s.hist_drift();
    row.steps = s.final_state.step;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace arnold
