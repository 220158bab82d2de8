#include "arnold/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace arnold {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

double lp_distance(const ScalarField& a, const ScalarField& b, double p) {
  const auto& d = a.grid();
  double s = 0.0;
  for (std::size_t q : d.interior_nodes()) s += std::pow(std::abs(a[q] - b[q]), p);
  return std::pow(s * d.h() * d.h(), 1.0 / p);
}

RearrangementSample swaps_impl(const ScalarField& omega_bar, std::size_t k, double radius, std::uint64_t seed,
                               double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("rearrangement distance needs p >= 1");
  const auto& d = omega_bar.grid();
  const auto& nodes = d.interior_nodes();
  RearrangementSample s{omega_bar, 0.0, 0, seed};
  if (k == 0 || nodes.size() < 2) return s;
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  const double h2 = d.h() * d.h();
  const bool bounded = std::isfinite(radius);
  const double limit = bounded ? std::pow(radius, p) / h2 : 0.0;
  double acc = 0.0;
  auto term = [&](std::size_t q, double v) { return std::pow(std::abs(v - omega_bar[q]), p); };
  const std::size_t draws = bounded ? 50 * k : k;
  for (std::size_t n = 0; n < draws && s.swap_count < k; ++n) {
    const std::size_t i = nodes[pick(rng)];
    std::size_t j = nodes[pick(rng)];
    while (j == i) j = nodes[pick(rng)];
    if (bounded) {
      const double next = acc - term(i, s.w[i]) - term(j, s.w[j]) + term(i, s.w[j]) + term(j, s.w[i]);
      if (next >= limit) continue;
      acc = next;
    }
    std::swap(s.w[i], s.w[j]);
    ++s.swap_count;
  }
  s.distance_lp = lp_distance(s.w, omega_bar, p);
  return s;
}

// Interior-only copy: rearrangements act on interior cells.
ScalarField interior_part(const ScalarField& f) {
  ScalarField out(f.domain());
  for (std::size_t p : f.grid().interior_nodes()) out[p] = f[p];
  return out;
}

struct EnergyContext {
  ScalarField omega;  // interior part of omega_bar
  ScalarField psi;    // P omega + h_a
  double E_bar = 0.0;
};

EnergyContext energy_context(const HarmonicBasis& b, const SteadyState& s) {
  EnergyContext c;
  c.omega = interior_part(s.omega_bar);
  c.psi = stream_direct(b, c.omega, s.a, Backend::cholesky);
  c.E_bar = energy(b, c.omega, s.a);
  return c;
}

// E(w) - E(omega) = (delta, psi) + 1/2 (delta, P delta).
double energy_change(const HarmonicBasis& b, const EnergyContext& c, const ScalarField& w) {
  ScalarField delta = interior_part(w) - c.omega;
  bool zero = true;
  for (std::size_t p : b.grid().interior_nodes()) zero = zero && delta[p] == 0.0;
  if (zero) return 0.0;
  const ScalarField Pd = p_apply_condensed(b, delta, Backend::cholesky);
  return inner(delta, c.psi) + 0.5 * inner(delta, Pd);
}

void record(ProbeReport& r, ProbeRow row) {
  r.max_distance = std::max(r.max_distance, row.distance);
  row.energy_violation = row.dE > r.tol;
  if (row.energy_violation) ++r.violations;
  r.max_excess = r.rows.empty() ? row.dE : std::max(r.max_excess, row.dE);
  r.rows.push_back(row);
}

}  // namespace

RearrangementSample random_swaps(const ScalarField& omega_bar, std::size_t k, std::uint64_t seed, double p) {
  return swaps_impl(omega_bar, k, std::numeric_limits<double>::infinity(), seed, p);
}

RearrangementSample random_swaps_within(const ScalarField& omega_bar, std::size_t k, double radius,
                                        std::uint64_t seed, double p) {
  if (!(radius > 0.0)) throw std::invalid_argument("random_swaps_within: radius must be positive");
  return swaps_impl(omega_bar, k, radius, seed, p);
}

std::vector<double> hl_assign(std::vector<double> v0, const std::vector<double>& w) {
  if (v0.size() != w.size()) throw std::invalid_argument("hl_assign: multiset size does not match the cell count");
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return w[i] > w[j]; });
  std::sort(v0.begin(), v0.end(), std::greater<>());
  std::vector<double> out(w.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]] = v0[r];
  return out;
}

ScalarField hl_coupling(const std::vector<double>& v0, const ScalarField& w_tilde) {
  const auto& nodes = w_tilde.grid().interior_nodes();
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = w_tilde[nodes[i]];
  const std::vector<double> v = hl_assign(v0, w);
  ScalarField out(w_tilde.domain());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[nodes[i]] = v[i];
  return out;
}

double histogram_distance(const ScalarField& w1, const ScalarField& w2, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram_distance: bins must be positive");
  const auto& d = w1.grid();
  if (w2.size() != w1.size()) throw std::invalid_argument("histogram_distance: fields live on different grids");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t p : d.interior_nodes()) {
    lo = std::min({lo, w1[p], w2[p]});
    hi = std::max({hi, w1[p], w2[p]});
  }
  if (d.interior_nodes().empty() || !(hi > lo)) return 0.0;
  std::vector<double> h1(bins, 0.0), h2(bins, 0.0);
  const double m = d.h() * d.h();
  auto bin = [&](double v) {
    const auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    return std::min(b, bins - 1);
  };
  for (std::size_t p : d.interior_nodes()) {
    h1[bin(w1[p])] += m;
    h2[bin(w2[p])] += m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < bins; ++i) s += std::abs(h1[i] - h2[i]);
  return s;
}

ProbeReport local_max_probe(const HarmonicBasis& b, const SteadyState& state, double radius, std::size_t n_samples,
                            std::uint64_t seed, double tol_rel, double p) {
  if (!state.certified) throw std::invalid_argument("local_max_probe: steady state is not certified");
  const EnergyContext c = energy_context(b, state);
  ProbeReport r;
  r.E_bar = c.E_bar;
  r.radius = radius;
  r.tol = tol_rel * std::abs(c.E_bar);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const std::uint64_t sd = splitmix64(seed ^ (0x100000001b3ULL * (n + 1)));
    const std::size_t k = 1 + static_cast<std::size_t>(sd % 32);
    RearrangementSample s = random_swaps_within(c.omega, k, radius, sd, p);
    ProbeRow row;
    row.seed = sd;
    row.swap_count = s.swap_count;
    row.distance = s.distance_lp;
    row.dE = energy_change(b, c, s.w);
    row.E = c.E_bar + row.dE;
    record(r, row);
  }
  return r;
}

ProbeReport exhaustive_swap_probe(const HarmonicBasis& b, const SteadyState& state, double tol_rel) {
  const auto& nodes = b.grid().interior_nodes();
  if (nodes.size() > 8) throw std::invalid_argument("exhaustive_swap_probe: more than 8 interior cells");
  const EnergyContext c = energy_context(b, state);
  ProbeReport r;
  r.E_bar = c.E_bar;
  r.tol = tol_rel * std::abs(c.E_bar);
  r.radius = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      ScalarField w = c.omega;
      std::swap(w[nodes[i]], w[nodes[j]]);
      ProbeRow row;
      row.seed = i * nodes.size() + j;
      row.swap_count = 1;
      row.distance = lp_distance(w, c.omega, 2.0);
      row.dE = energy_change(b, c, w);
      row.E = c.E_bar + row.dE;
      record(r, row);
    }
  }
  return r;
}

ProbeReport supporting_probe(const HarmonicBasis& b, const SteadyState& state, const LegendrePair& lp,
                             std::size_t n_samples, std::uint64_t seed, double rel_tol, std::size_t max_swaps) {
  const ScalarField omega = interior_part(state.omega_bar);
  const double span = state.m_hi - state.m_lo + 1.0;
  const std::vector<double> s_values{-span, -0.5 * span, -0.1 * span, 0.1 * span, 0.5 * span, span};
  ProbeReport r;
  r.tol = rel_tol;
  r.radius = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n <= n_samples; ++n) {
    const std::uint64_t sd = n == 0 ? seed : splitmix64(seed ^ (0x100000001b3ULL * n));
    RearrangementSample s = n == 0 ? RearrangementSample{omega, 0.0, 0, seed}
                                   : random_swaps(omega, 1 + static_cast<std::size_t>(sd % max_swaps), sd);
    const ChainValues cv = evaluate_chain(b, s.w, state.a, lp, state.m, s_values);
    ProbeRow row;
    row.seed = sd;
    row.swap_count = s.swap_count;
    row.distance = s.distance_lp;
    row.E = cv.E;
    row.EC = cv.EC;
    row.D_hat = cv.dhat.value;
    row.D = cv.D;
    row.mu = cv.dhat.mu;
    row.mu_residual = cv.dhat.residual;
    if (n == 0) r.E_bar = cv.E;
    double dmin = cv.D;
    for (double v : cv.D_s) dmin = std::min(dmin, v);
    const double scale = std::max({std::abs(cv.EC), std::abs(cv.dhat.value), std::abs(cv.D), 1e-300});
    const double excess = std::max(cv.EC - cv.dhat.value, cv.dhat.value - dmin) / scale;
    row.dE = excess;
    row.chain_violation = excess > rel_tol;
    if (row.chain_violation) ++r.violations;
    r.max_excess = n == 0 ? excess : std::max(r.max_excess, excess);
    r.max_distance = std::max(r.max_distance, row.distance);
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace arnold
