#include "arnold/steady.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arnold {

SteadyState certify_state(const HarmonicBasis& b, const ScalarField& psi, const GFunc& g, const CirculationVector& a,
                          double cert_tol) {
  const auto& d = b.grid();
  if (static_cast<int>(a.size()) != b.n()) throw std::invalid_argument("circulation vector has wrong length");
  SteadyState s;
  s.psi_bar = psi;
  s.psi_bar.zero_exterior();
  s.a = a;
  s.g = g;
  s.omega_bar = ScalarField(b.domain());
  bool first = true;
  double wmax = 0.0;
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.is_exterior(p)) continue;
    const double v = s.psi_bar[p];
    s.omega_bar[p] = g(v);
    s.m_lo = first ? v : std::min(s.m_lo, v);
    s.m_hi = first ? v : std::max(s.m_hi, v);
    first = false;
    wmax = std::max(wmax, std::abs(s.omega_bar[p]));
  }
  const ScalarField lap = neg_laplacian(s.psi_bar);
  for (std::size_t p : d.interior_nodes())
    s.residual_pde = std::max(s.residual_pde, std::abs(lap[p] - s.omega_bar[p]));
  s.m = integrate(s.omega_bar);
  double amax = 0.0, ferr = 0.0;
  for (int k = 1; k <= b.n(); ++k) {
    const double ak = a[static_cast<std::size_t>(k - 1)];
    s.flux_errors.push_back(std::abs(boundary_flux(s.psi_bar, k) + ak));
    amax = std::max(amax, std::abs(ak));
    ferr = std::max(ferr, s.flux_errors.back());
  }
  const double mflux = std::abs(s.m) + amax;
  s.certified = s.psi_bar.finite() && s.residual_pde <= cert_tol * std::max(1.0, wmax) &&
                ferr <= cert_tol * std::max(1.0, mflux);
  return s;
}

SteadyState steady_linear(const HarmonicBasis& b, double kappa, const CirculationVector& a,
                          const LinearOptions& opt) {
  const auto& d = b.grid();
  if (static_cast<int>(a.size()) != b.n()) throw std::invalid_argument("circulation vector has wrong length");
  GFunc g = GFunc::linear(kappa);
  if (kappa > 0.0) {
    const double lh = opt.lambda_h > 0.0 ? opt.lambda_h : lambda_plain(b, opt.eig).value;
    const double ld = opt.lambda_dirichlet > 0.0 ? opt.lambda_dirichlet : lambda_dirichlet(b, opt.eig).value;
    for (double ev : {lh, ld}) {
      if (std::abs(kappa - ev) <= opt.rel_guard * ev) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "steady_linear: kappa = " << kappa << " is resonant with eigenvalue " << ev;
        throw ResonanceError(msg.str(), ev);
      }
    }
  }
  std::vector<double> coef(d.size(), 0.0);
  for (std::size_t p : d.interior_nodes()) coef[p] = -kappa;
  Factorization fac(SpaceOperator(b.domain(), Space::circulation, coef));
  std::vector<double> rhs(d.size(), 0.0);
  for (int k = 1; k <= b.n(); ++k)
    for (std::size_t q : d.boundary_nodes(k)) rhs[q] = -a[static_cast<std::size_t>(k - 1)];
  ScalarField psi(b.domain());
  fac.solve(rhs.data(), psi.data());
  SteadyState s = certify_state(b, psi, g, a);
  s.iterations = 1;
  return s;
}

SteadyState steady_picard(const HarmonicBasis& b, const GFunc& g, const CirculationVector& a,
                          const ScalarField& init, const PicardOptions& opt) {
  const auto& d = b.grid();
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw std::invalid_argument("steady_picard: damping must lie in (0,1]");
  if (g.min_slope() < 0.0) throw std::invalid_argument("steady_picard: g must be nondecreasing");
  ScalarField psi = init.size() ? init : steady_linear(b, g.median_slope(), a).psi_bar;
  if (psi.size() != d.size()) throw std::invalid_argument("steady_picard: init does not match the domain");
  ScalarField best = psi;
  double best_change = std::numeric_limits<double>::infinity();
  int it = 0;
  bool converged = false;
  while (it < opt.max_iter) {
    ++it;
    ScalarField w(b.domain());
    for (std::size_t p : d.interior_nodes()) w[p] = g(psi[p]);
    ScalarField next = stream_direct(b, w, a, Backend::cholesky);
    double change = 0.0;
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (d.is_exterior(p)) continue;
      next[p] = (1.0 - opt.damping) * psi[p] + opt.damping * next[p];
      change = std::max(change, std::abs(next[p] - psi[p]));
    }
    if (!next.finite()) throw SolverError("steady_picard: iterate became non-finite");
    psi = std::move(next);
    if (change < best_change) {
      best_change = change;
      best = psi;
    }
    if (change <= opt.tol) {
      converged = true;
      break;
    }
  }
  SteadyState s = certify_state(b, converged ? psi : best, g, a, opt.cert_tol);
  s.iterations = it;
  if (!converged) s.certified = false;
  return s;
}

}  // namespace arnold
