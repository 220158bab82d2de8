#include "arnold/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arnold {

void RadialProblem::validate() const {
  if (!(r_in > 0.0)) throw std::invalid_argument("radial problem: r_in must be positive");
  if (!(r_out > r_in)) throw std::invalid_argument("radial problem: r_out must exceed r_in");
  if (n < 256) throw std::invalid_argument("radial problem: at least 256 intervals required");
}

double RadialProfile::operator()(double x) const {
  x = std::clamp(x, r.front(), r.back());
  const double dr = r[1] - r[0];
  const auto i = std::min(static_cast<std::size_t>((x - r.front()) / dr), r.size() - 2);
  const double t = (x - r[i]) / dr;
  return (1.0 - t) * u[i] + t * u[i + 1];
}

double RadialProfile::slope_at_inner() const {
  const double dr = r[1] - r[0];
  return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dr);
}

RadialProfile radial_stream(const RadialProblem& rp, const std::function<double(double)>& omega, double a1,
                            double kappa) {
  rp.validate();
  const std::size_t n = rp.n;
  const double dr = (rp.r_out - rp.r_in) / static_cast<double>(n);
  RadialProfile out;
  out.r.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.r[i] = rp.r_in + dr * static_cast<double>(i);
  out.r[n] = rp.r_out;
  // Rows 0..n-1 in the form lo*u_{i-1} + di*u_i + up*u_{i+1} = rhs, integrated
  // against r dr over each control volume.
  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = out.r[i];
    const double rp_half = ri + 0.5 * dr;
    double vol;
    double cm = 0.0;
    if (i == 0) {
      vol = 0.5 * (rp_half * rp_half - ri * ri);
      rhs[i] = -a1 / (2.0 * std::numbers::pi);
    } else {
      const double rm_half = ri - 0.5 * dr;
      vol = 0.5 * (rp_half * rp_half - rm_half * rm_half);
      cm = rm_half / dr;
    }
    const double cp = rp_half / dr;
    lo[i] = -cm;
    up[i] = -cp;
    di[i] = cm + cp - kappa * vol;
    rhs[i] += omega(ri) * vol;
  }
  // Thomas algorithm; u_n = 0 drops the last upper entry.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = di[i] - (i ? lo[i] * c[i - 1] : 0.0);
    if (m == 0.0) throw std::runtime_error("radial_stream: zero pivot");
    c[i] = (i + 1 < n) ? up[i] / m : 0.0;
    d[i] = (rhs[i] - (i ? lo[i] * d[i - 1] : 0.0)) / m;
  }
  out.u.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) out.u[i] = d[i] - (i + 1 < n ? c[i] * out.u[i + 1] : 0.0);
  return out;
}

double shooting_mismatch(const RadialProblem& rp, double mu) {
  rp.validate();
  const double dr = (rp.r_out - rp.r_in) / static_cast<double>(rp.n);
  auto f = [mu](double r, double u, double v, double& du, double& dv) {
    du = v;
    dv = -v / r - mu * u;
  };
  double u = 1.0, v = 0.0;
  for (std::size_t i = 0; i < rp.n; ++i) {
    const double r = rp.r_in + dr * static_cast<double>(i);
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    f(r, u, v, k1u, k1v);
    f(r + 0.5 * dr, u + 0.5 * dr * k1u, v + 0.5 * dr * k1v, k2u, k2v);
    f(r + 0.5 * dr, u + 0.5 * dr * k2u, v + 0.5 * dr * k2v, k3u, k3v);
    f(r + dr, u + dr * k3u, v + dr * k3v, k4u, k4v);
    u += dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += dr / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return u;
}

RadialEigen radial_eigen(const RadialProblem& rp, double tol) {
  rp.validate();
  const double gap = rp.r_out - rp.r_in;
  const double step = 0.02 * (std::numbers::pi / gap) * (std::numbers::pi / gap);
  RadialEigen e;
  double lo = 0.0, flo = shooting_mismatch(rp, lo);
  double hi = lo, fhi = flo;
  for (int k = 0; k < 100000; ++k) {
    hi = lo + step;
    fhi = shooting_mismatch(rp, hi);
    if ((flo > 0.0) != (fhi > 0.0)) break;
    lo = hi;
    flo = fhi;
  }
  if ((flo > 0.0) == (fhi > 0.0)) throw std::runtime_error("radial_eigen: no sign change found");
  e.bracket_lo = lo;
  e.bracket_hi = hi;
  e.mismatch_lo = flo;
  e.mismatch_hi = fhi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = shooting_mismatch(rp, mid);
    ++e.bisections;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  e.mu = 0.5 * (lo + hi);
  return e;
}

double AnnulusForms::zeta(double r) const { return std::log(r_out / r) / std::log(r_out / r_in); }

AnnulusForms annulus_closed_forms(double r_in, double r_out) {
  if (!(r_in > 0.0 && r_out > r_in)) throw std::invalid_argument("annulus_closed_forms: need 0 < r_in < r_out");
  AnnulusForms f;
  f.r_in = r_in;
  f.r_out = r_out;
  f.p11 = 2.0 * std::numbers::pi / std::log(r_out / r_in);
  f.q11 = 1.0 / f.p11;
  return f;
}

}  // namespace arnold
