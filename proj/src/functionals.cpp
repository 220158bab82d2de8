#include "arnold/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace arnold {

namespace {

struct Cubic {
  double a, b, c, e;
  double value(double u) const { return a + u * (b + u * (c + u * e)); }
  double deriv(double u) const { return b + u * (2.0 * c + 3.0 * u * e); }
  double integral(double u) const { return u * (a + u * (b / 2.0 + u * (c / 3.0 + u * e / 4.0))); }
};

Cubic piece(const std::vector<double>& t, const std::vector<double>& v, const std::vector<double>& d,
            std::size_t k) {
  const double H = t[k + 1] - t[k];
  const double delta = (v[k + 1] - v[k]) / H;
  return {v[k], d[k], (3.0 * delta - 2.0 * d[k] - d[k + 1]) / H, (d[k] + d[k + 1] - 2.0 * delta) / (H * H)};
}

}  // namespace

GFunc GFunc::hermite(Kind kind, std::vector<double> t, std::vector<double> v, std::vector<double> d) {
  if (t.size() < 2 || v.size() != t.size() || d.size() != t.size())
    throw std::invalid_argument("g needs at least two knots with matching values and slopes");
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    if (!(t[k + 1] > t[k])) throw std::invalid_argument("g knots must be strictly increasing");
    if (v[k + 1] < v[k]) throw std::invalid_argument("g is not monotone (tabulated values decrease)");
  }
  for (double s : d)
    if (s < 0.0 || !std::isfinite(s)) throw std::invalid_argument("g is not monotone (negative slope)");
  GFunc g;
  g.kind_ = kind;
  g.t_ = std::move(t);
  g.v_ = std::move(v);
  g.d_ = std::move(d);
  g.prepare();
  return g;
}

GFunc GFunc::linear(double kappa) {
  if (kappa < 0.0) throw std::invalid_argument("linear g requires kappa >= 0");
  return hermite(Kind::linear, {0.0, 1.0}, {0.0, kappa}, {kappa, kappa});
}

GFunc GFunc::affine(double kappa, double c) {
  if (kappa < 0.0) throw std::invalid_argument("affine g requires kappa >= 0");
  return hermite(Kind::affine, {0.0, 1.0}, {c, kappa + c}, {kappa, kappa});
}

GFunc GFunc::tabulated(std::vector<double> s, std::vector<double> g) {
  const std::size_t n = s.size();
  if (n < 2 || g.size() != n) throw std::invalid_argument("tabulated g needs at least two (s, g) pairs");
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(s[k + 1] > s[k])) throw std::invalid_argument("tabulated g abscissae must be strictly increasing");
    if (g[k + 1] < g[k]) throw std::invalid_argument("tabulated g is not monotone");
  }
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = s[k + 1] - s[k];
    delta[k] = (g[k + 1] - g[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (m * d0 <= 0.0) return 0.0;
      if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
      return m;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  return hermite(Kind::tabulated, std::move(s), std::move(g), std::move(d));
}

void GFunc::prepare() {
  cum_.assign(t_.size(), 0.0);
  for (std::size_t k = 0; k + 1 < t_.size(); ++k)
    cum_[k + 1] = cum_[k] + piece(t_, v_, d_, k).integral(t_[k + 1] - t_[k]);
}

std::size_t GFunc::segment(double s) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), s);
  std::size_t k = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(k, t_.size() - 2);
}

double GFunc::operator()(double s) const {
  if (s <= t_.front()) return v_.front() + d_.front() * (s - t_.front());
  if (s >= t_.back()) return v_.back() + d_.back() * (s - t_.back());
  const std::size_t k = segment(s);
  return piece(t_, v_, d_, k).value(s - t_[k]);
}

double GFunc::deriv(double s) const {
  if (s <= t_.front()) return d_.front();
  if (s >= t_.back()) return d_.back();
  const std::size_t k = segment(s);
  return piece(t_, v_, d_, k).deriv(s - t_[k]);
}

double GFunc::cumulative(double s) const {
  if (s <= t_.front()) {
    const double u = s - t_.front();
    return u * (v_.front() + 0.5 * d_.front() * u);
  }
  if (s >= t_.back()) {
    const double u = s - t_.back();
    return cum_.back() + u * (v_.back() + 0.5 * d_.back() * u);
  }
  const std::size_t k = segment(s);
  return cum_[k] + piece(t_, v_, d_, k).integral(s - t_[k]);
}

double GFunc::integral(double s) const { return cumulative(s) - cumulative(0.0); }

double GFunc::min_slope() const {
  double m = std::min(d_.front(), d_.back());
  for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
    const Cubic c = piece(t_, v_, d_, k);
    m = std::min({m, d_[k], d_[k + 1]});
    if (c.e != 0.0) {
      const double u = -c.c / (3.0 * c.e);
      if (u > 0.0 && u < t_[k + 1] - t_[k]) m = std::min(m, c.deriv(u));
    }
  }
  return m;
}

double GFunc::max_slope() const {
  double m = std::max(d_.front(), d_.back());
  for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
    const Cubic c = piece(t_, v_, d_, k);
    m = std::max({m, d_[k], d_[k + 1]});
    if (c.e != 0.0) {
      const double u = -c.c / (3.0 * c.e);
      if (u > 0.0 && u < t_[k + 1] - t_[k]) m = std::max(m, c.deriv(u));
    }
  }
  return m;
}

double GFunc::median_slope() const {
  std::vector<double> d = d_;
  std::sort(d.begin(), d.end());
  const std::size_t n = d.size();
  return n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

std::string GFunc::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::linear:
      os << "linear(kappa=" << d_.front() << ")";
      break;
    case Kind::affine:
      os << "affine(kappa=" << d_.front() << ",c=" << v_.front() << ")";
      break;
    case Kind::tabulated:
      os << "tabulated(" << t_.size() << " knots)";
      break;
  }
  if (extended_) os << " extended[" << m_bar_ << "," << M_bar_ << "] c1=" << c1_ << " c2=" << c2_;
  return os.str();
}

GFunc extend_g(const GFunc& g, double m_bar, double M_bar) {
  if (!(m_bar <= M_bar) || !std::isfinite(m_bar) || !std::isfinite(M_bar))
    throw std::invalid_argument("extend_g requires m_bar <= M_bar");
  const double dm = g.deriv(m_bar);
  const double dM = g.deriv(M_bar);
  const double c2 = std::max(dm, 1.0);
  const double c1 = std::max(dM, 1.0);
  std::vector<double> t, v, d;
  auto push = [&](double s, double val, double slope) {
    t.push_back(s);
    v.push_back(val);
    d.push_back(slope);
  };
  push(m_bar - 1.0, g(m_bar) - 0.5 * (dm + c2), c2);
  push(m_bar, g(m_bar), dm);
  for (std::size_t k = 0; k < g.knots().size(); ++k) {
    const double s = g.knots()[k];
    if (s > m_bar && s < M_bar) push(s, g.values()[k], g.slopes()[k]);
  }
  if (M_bar > m_bar) push(M_bar, g(M_bar), dM);
  push(M_bar + 1.0, g(M_bar) + 0.5 * (dM + c1), c1);
  GFunc out = GFunc::hermite(g.kind(), std::move(t), std::move(v), std::move(d));
  out.extended_ = true;
  out.m_bar_ = m_bar;
  out.M_bar_ = M_bar;
  out.c1_ = c1;
  out.c2_ = c2;
  return out;
}

LegendrePair::LegendrePair(GFunc g) : g_(std::move(g)), ghat0_(0.0) {
  if (!(g_.left_slope() > 0.0) || !(g_.right_slope() > 0.0))
    throw std::invalid_argument("Legendre transform needs g with linear growth at both ends; extend g first");
  ghat0_ = Ghat(0.0);
}

LegendrePair legendre(const GFunc& g) { return LegendrePair(g); }

double LegendrePair::f(double s) const {
  const auto& t = g_.knots();
  const auto& v = g_.values();
  if (!std::isfinite(s)) throw std::runtime_error("f: non-finite argument");
  if (s <= v.front()) return t.front() + (s - v.front()) / g_.left_slope();
  if (s > v.back()) return t.back() + (s - v.back()) / g_.right_slope();
  // First knot with value >= s; the answer lies in (t[k-1], t[k]].
  const auto k = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), s) - v.begin());
  double lo = t[k - 1], hi = t[k];
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g_(mid) >= s)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double LegendrePair::Ghat(double s) const {
  const double tau = f(s);
  return s * tau - g_.integral(tau);
}

double LegendrePair::ghat0_golden() const {
  double a = -1.0, b = 1.0;
  for (int it = 0; g_(a) > 0.0; ++it) {
    if (it > 200) throw std::runtime_error("golden section: bracket failure");
    a *= 2.0;
  }
  for (int it = 0; g_(b) < 0.0; ++it) {
    if (it > 200) throw std::runtime_error("golden section: bracket failure");
    b *= 2.0;
  }
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = g_.integral(x1), f2 = g_.integral(x2);
  while (b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g_.integral(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g_.integral(x2);
    }
  }
  return -std::min(f1, f2);
}

double LegendrePair::ghat_by_quadrature(double s, double tol) const {
  const std::function<double(double, double, double, double, double, double, int)> simpson =
      [&](double a, double b, double fa, double fm, double fb, double whole, int depth) -> double {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    return simpson(a, m, fa, flm, fm, left, depth - 1) + simpson(m, b, fm, frm, fb, right, depth - 1);
  };
  const double fa = f(0.0), fb = f(s), fm = f(0.5 * s);
  const double whole = s / 6.0 * (fa + 4.0 * fm + fb);
  return ghat0_golden() + (s == 0.0 ? 0.0 : simpson(0.0, s, fa, fm, fb, whole, 50));
}

namespace {

double aqa(const HarmonicBasis& b, const CirculationVector& a) {
  if (static_cast<int>(a.size()) != b.n()) throw std::invalid_argument("circulation vector has wrong length");
  Eigen::Map<const Eigen::VectorXd> av(a.data(), b.n());
  return av.dot(b.q() * av);
}

double integral_of(const ScalarField& f, const std::function<double(double)>& F) {
  const auto& d = f.grid();
  double s = 0.0;
  for (std::size_t p : d.interior_nodes()) s += F(f[p]);
  return s * d.h() * d.h();
}

struct Prepared {
  ScalarField Pw, psi;
  double wPw, haw, aqa;
};

Prepared prepare(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a) {
  ScalarField Pw = p_apply(b, w);
  ScalarField ha = h_field(b, a);
  Prepared pr{Pw, Pw + ha, inner(w, Pw), inner(ha, w), aqa(b, a)};
  return pr;
}

double d_s_value(const Prepared& pr, const GFunc& g, double s, double m) {
  const double Gint = integral_of(pr.psi, [&](double x) { return g.integral(x - s); });
  return -0.5 * pr.wPw + Gint + s * m + 0.5 * pr.aqa;
}

DHatResult d_hat_value(const Prepared& pr, const GFunc& g, double m) {
  auto phi = [&](double s) { return integral_of(pr.psi, [&](double x) { return g(x - s); }) - m; };
  DHatResult r;
  double S = 1.0;
  double lo = -S, hi = S;
  double flo = phi(lo), fhi = phi(hi);
  while (!(flo >= 0.0 && fhi <= 0.0)) {
    S *= 2.0;
    if (S > std::ldexp(1.0, 20)) throw std::runtime_error("D-hat: no sign change within the bracket [-2^20, 2^20]");
    lo = -S;
    hi = S;
    flo = phi(lo);
    fhi = phi(hi);
  }
  for (r.iterations = 0; r.iterations < 200; ++r.iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = phi(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (fm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  r.mu = 0.5 * (lo + hi);
  r.residual = std::abs(phi(r.mu));
  r.value = d_s_value(pr, g, r.mu, m);
  return r;
}

}  // namespace

double energy(const HarmonicBasis& b, const ScalarField& omega, const CirculationVector& a) {
  const Prepared pr = prepare(b, omega, a);
  return 0.5 * pr.wPw + pr.haw + 0.5 * pr.aqa;
}

double casimir(const ScalarField& w, const LegendrePair& lp) {
  return integral_of(w, [&](double x) { return lp.Ghat(x); });
}

double energy_casimir(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a,
                      const LegendrePair& lp) {
  return energy(b, w, a) - casimir(w, lp);
}

double supporting_d(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a, const GFunc& g) {
  return d_s_value(prepare(b, w, a), g, 0.0, 0.0);
}

double supporting_d_s(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a, const GFunc& g,
                      double s, double m) {
  return d_s_value(prepare(b, w, a), g, s, m);
}

DHatResult supporting_d_hat(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a,
                            const GFunc& g, double m) {
  return d_hat_value(prepare(b, w, a), g, m);
}

ChainValues evaluate_chain(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a,
                           const LegendrePair& lp, double m, const std::vector<double>& s_values) {
  const Prepared pr = prepare(b, w, a);
  ChainValues c;
  c.E = 0.5 * pr.wPw + pr.haw + 0.5 * pr.aqa;
  c.EC = c.E - casimir(w, lp);
  c.D = d_s_value(pr, lp.g(), 0.0, 0.0);
  c.dhat = d_hat_value(pr, lp.g(), m);
  c.s = s_values;
  for (double s : s_values) c.D_s.push_back(d_s_value(pr, lp.g(), s, m));
  return c;
}

double stream_energy_casimir(const ScalarField& psi_bar, const ScalarField& phi, const LegendrePair& lp) {
  const ScalarField u = psi_bar + phi;
  const ScalarField lap = neg_laplacian(u);
  return 0.5 * dirichlet_form(u, u) - integral_of(lap, [&](double x) { return lp.F(x); });
}

Sandwich sandwich_bounds(const HarmonicBasis& b, const ScalarField& psi_bar, const ScalarField& chi,
                         const LegendrePair& lp) {
  const ScalarField phi = p_apply(b, chi);
  ScalarField zero(psi_bar.domain());
  Sandwich s;
  s.value = stream_energy_casimir(psi_bar, phi, lp) - stream_energy_casimir(psi_bar, zero, lp);
  const double quad = 0.5 * dirichlet_form(phi, phi);
  const double chi2 = inner(chi, chi);
  const double gmin = lp.g().min_slope();
  const double gmax = lp.g().max_slope();
  const double fmax = gmin > 0.0 ? 1.0 / gmin : std::numeric_limits<double>::infinity();
  const double fmin = 1.0 / gmax;
  s.lower = quad - 0.5 * fmax * chi2;
  s.upper = quad - 0.5 * fmin * chi2;
  return s;
}

}  // namespace arnold
