#include "arnold/field.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace arnold {

namespace {

std::vector<double> mass_rhs(const ScalarField& phi) {
  const auto& d = phi.grid();
  std::vector<double> b(d.size(), 0.0);
  const double h2 = d.h() * d.h();
  for (std::size_t p : d.interior_nodes()) b[p] = h2 * phi[p];
  return b;
}

}  // namespace

ScalarField green_solve(const ScalarField& phi, const SolverOptions& opt) {
  SpaceOperator op(phi.domain(), Space::dirichlet);
  auto b = mass_rhs(phi);
  ScalarField u(phi.domain());
  solve(op, b.data(), u.data(), opt);
  return u;
}

ScalarField green_solve(const HarmonicBasis& bs, const ScalarField& phi) {
  if (bs.options().backend == Backend::cholesky) {
    auto b = mass_rhs(phi);
    ScalarField u(phi.domain());
    bs.dirichlet_factor().solve(b.data(), u.data());
    return u;
  }
  return green_solve(phi, bs.options());
}

ScalarField p_apply(const HarmonicBasis& b, const ScalarField& phi) {
  ScalarField u = green_solve(b, phi);
  const int N = b.n();
  Eigen::VectorXd m(N);
  for (int i = 0; i < N; ++i) m[i] = inner(b.zetas()[static_cast<std::size_t>(i)], phi);
  Eigen::VectorXd c = b.q() * m;
  for (int j = 0; j < N; ++j) u += c[j] * b.zetas()[static_cast<std::size_t>(j)];
  return u;
}

ScalarField stream_direct(const HarmonicBasis& b, const ScalarField& omega, const CirculationVector& a,
                          Backend backend) {
  const auto& d = b.grid();
  if (static_cast<int>(a.size()) != d.n_holes()) throw std::invalid_argument("circulation vector has wrong length");
  auto rhs = mass_rhs(omega);
  for (int k = 1; k < d.n_components(); ++k)
    for (std::size_t q : d.boundary_nodes(k)) rhs[q] = -a[static_cast<std::size_t>(k - 1)];
  ScalarField u(omega.domain());
  if (backend == Backend::cholesky) {
    b.circulation_factor().solve(rhs.data(), u.data());
  } else {
    SpaceOperator op(omega.domain(), Space::circulation);
    op.cg(rhs.data(), u.data(), b.options());
  }
  return u;
}

ScalarField p_apply_condensed(const HarmonicBasis& b, const ScalarField& phi, Backend backend) {
  return stream_direct(b, phi, CirculationVector(static_cast<std::size_t>(b.n()), 0.0), backend);
}

ScalarField p_apply_condensed(const HarmonicBasis& b, const ScalarField& phi) {
  return p_apply_condensed(b, phi, b.options().backend);
}

ScalarField h_field(const HarmonicBasis& b, const CirculationVector& a) {
  const int N = b.n();
  if (static_cast<int>(a.size()) != N) throw std::invalid_argument("circulation vector has wrong length");
  ScalarField h(b.domain());
  Eigen::Map<const Eigen::VectorXd> av(a.data(), N);
  Eigen::VectorXd c = -(b.q().transpose() * av);
  for (int j = 0; j < N; ++j) h += c[j] * b.zetas()[static_cast<std::size_t>(j)];
  return h;
}

StreamSolution stream_solve(const HarmonicBasis& b, const ScalarField& omega, const CirculationVector& a) {
  StreamSolution s{p_apply(b, omega) + h_field(b, a), omega, a, 0.0, {}};
  ScalarField lap = neg_laplacian(s.psi);
  for (std::size_t p : b.grid().interior_nodes()) s.residual = std::max(s.residual, std::abs(lap[p] - omega[p]));
  for (int k = 1; k <= b.n(); ++k)
    s.flux_errors.push_back(std::abs(boundary_flux(s.psi, k) + a[static_cast<std::size_t>(k - 1)]));
  return s;
}

ScalarField extension_fill(const ScalarField& f, int layers, Extrapolation mode, bool clamp) {
  const auto& d = f.grid();
  const std::size_t nx = d.nx();
  const std::size_t ny = d.ny();
  ScalarField out = f;
  std::vector<char> filled(d.size(), 0);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t p : d.interior_nodes()) {
    filled[p] = 1;
    lo = first ? f[p] : std::min(lo, f[p]);
    hi = first ? f[p] : std::max(hi, f[p]);
    first = false;
  }
  const long di[4] = {1, -1, 0, 0};
  const long dj[4] = {0, 0, 1, -1};
  std::vector<std::size_t> front;
  for (int layer = 0; layer < layers; ++layer) {
    front.clear();
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (filled[p]) continue;
      const long i = static_cast<long>(p % nx);
      const long j = static_cast<long>(p / nx);
      double lin = 0.0, mean = 0.0;
      int nlin = 0, nmean = 0;
      for (int s = 0; s < 4; ++s) {
        const long i1 = i + di[s], j1 = j + dj[s];
        if (i1 < 0 || j1 < 0 || i1 >= static_cast<long>(nx) || j1 >= static_cast<long>(ny)) continue;
        const std::size_t q1 = static_cast<std::size_t>(j1) * nx + static_cast<std::size_t>(i1);
        if (filled[q1] != 1) continue;
        mean += out[q1];
        ++nmean;
        const long i2 = i1 + di[s], j2 = j1 + dj[s];
        if (i2 < 0 || j2 < 0 || i2 >= static_cast<long>(nx) || j2 >= static_cast<long>(ny)) continue;
        const std::size_t q2 = static_cast<std::size_t>(j2) * nx + static_cast<std::size_t>(i2);
        if (filled[q2] != 1) continue;
        const long i3 = i2 + di[s], j3 = j2 + dj[s];
        const bool has3 = i3 >= 0 && j3 >= 0 && i3 < static_cast<long>(nx) && j3 < static_cast<long>(ny) &&
                          filled[static_cast<std::size_t>(j3) * nx + static_cast<std::size_t>(i3)] == 1;
        const double u1 = out[q1], u2 = out[q2];
        if (mode == Extrapolation::limited) {
          const double u3 = has3 ? out[static_cast<std::size_t>(j3) * nx + static_cast<std::size_t>(i3)] : u2;
          const double s1 = u1 - u2, s2 = has3 ? u2 - u3 : s1;
          if (s1 * s2 <= 0.0)
            lin += u1;
          else if (std::abs(s1 - s2) <= 0.5 * std::max(std::abs(s1), std::abs(s2)))
            lin += u1 + 2.0 * s1 - s2;
          else
            lin += u1 + (std::abs(s1) < std::abs(s2) ? s1 : s2);
        } else if (has3 && mode == Extrapolation::quadratic) {
          lin += 3.0 * u1 - 3.0 * u2 + out[static_cast<std::size_t>(j3) * nx + static_cast<std::size_t>(i3)];
        } else {
          lin += 2.0 * u1 - u2;
        }
        ++nlin;
      }
      if (nmean == 0) continue;
      double v = nlin > 0 ? lin / nlin : mean / nmean;
      if (clamp) v = std::clamp(v, lo, hi);
      out[p] = v;
      front.push_back(p);
    }
    for (std::size_t p : front) filled[p] = 1;
    if (front.empty()) break;
  }
  return out;
}

VelocityField velocity(const ScalarField& psi) {
  const auto& d = psi.grid();
  const std::size_t nx = d.nx();
  const double h = d.h();
  const auto& east = d.east();
  const auto& north = d.north();
  ScalarField vx(psi.domain()), vy(psi.domain());
  // Three-point derivative with left/right spacings dl, dr.
  auto deriv = [](double ul, double u0, double ur, double dl, double dr) {
    return (dl * dl * (ur - u0) + dr * dr * (u0 - ul)) / (dl * dr * (dl + dr));
  };
  for (std::size_t p : d.interior_nodes()) {
    const double dxr = h / east[p];
    const double dxl = h / east[p - 1];
    const double dyu = h / north[p];
    const double dyd = h / north[p - nx];
    const double ux = deriv(psi[p - 1], psi[p], psi[p + 1], dxl, dxr);
    const double uy = deriv(psi[p - nx], psi[p], psi[p + nx], dyd, dyu);
    vx[p] = uy;
    vy[p] = -ux;
  }
  return {extension_fill(vx, 3, Extrapolation::quadratic), extension_fill(vy, 3, Extrapolation::quadratic)};
}

namespace {

std::vector<char> contour_region(const GridDomain& d, int k) {
  std::vector<char> in(d.size(), 0);
  for (std::size_t p : d.hole_region(k)) in[p] = 1;
  for (const auto& e : d.boundary_edges(k)) in[e.inner] = 1;
  return in;
}

}  // namespace

double circulation(const VelocityField& v, int k, const ScalarField& omega) {
  const double c = circulation(v, k);
  const auto& d = v.vx.grid();
  const std::vector<char> in = contour_region(d, k);
  double s = 0.0;
  for (std::size_t p : d.interior_nodes())
    if (in[p]) s += omega[p];
  // Fluid between a dual-cell face and the boundary crossing at t h.
  for (const auto& e : d.boundary_edges(k)) s += (1.0 / e.weight - 0.5) * omega[e.inner];
  return c + s * d.h() * d.h();
}

double circulation(const VelocityField& v, int k) {
  const auto& d = v.vx.grid();
  if (k < 1 || k >= d.n_components()) throw std::out_of_range("circulation: component index out of range");
  const std::size_t nx = d.nx();
  const std::vector<char> in = contour_region(d, k);
  const auto& region = d.hole_region(k);
  if (region.empty()) throw std::runtime_error("circulation: degenerate component");
  double s = 0.0;
  const double h = d.h();
  auto face = [&](std::size_t p, std::size_t q, double nxv, double nyv) {
    if (in[q]) return;
    if (!d.is_interior(q) || !d.is_interior(p)) throw std::runtime_error("circulation: contour leaves the interior");
    const double tx = nyv, ty = -nxv;
    s += h * 0.5 * ((v.vx[p] + v.vx[q]) * tx + (v.vy[p] + v.vy[q]) * ty);
  };
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (!in[p] || !d.is_interior(p)) continue;
    face(p, p + 1, 1.0, 0.0);
    face(p, p - 1, -1.0, 0.0);
    face(p, p + nx, 0.0, 1.0);
    face(p, p - nx, 0.0, -1.0);
  }
  return s;
}

double kinetic_energy(const VelocityField& v) {
  const auto& d = v.vx.grid();
  double s = 0.0;
  for (std::size_t p : d.interior_nodes()) s += v.vx[p] * v.vx[p] + v.vy[p] * v.vy[p];
  return 0.5 * s * d.h() * d.h();
}

ScalarField divergence(const VelocityField& v) {
  const auto& d = v.vx.grid();
  const std::size_t nx = d.nx();
  ScalarField out(v.vx.domain());
  const double s = 0.5 / d.h();
  for (std::size_t p : d.interior_nodes()) {
    if (!d.is_interior(p + 1) || !d.is_interior(p - 1) || !d.is_interior(p + nx) || !d.is_interior(p - nx)) continue;
    out[p] = s * (v.vx[p + 1] - v.vx[p - 1] + v.vy[p + nx] - v.vy[p - nx]);
  }
  return out;
}

GhostFill::GhostFill(DomainPtr d, int reach) : d_(std::move(d)) {
  const auto& g = *d_;
  const long nx = static_cast<long>(g.nx()), ny = static_cast<long>(g.ny());
  auto at = [&](long i, long j) { return static_cast<std::size_t>(j * nx + i); };
  offset_.push_back(0);
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const std::size_t p = at(i, j);
      if (g.is_interior(p)) continue;
      double dmin2 = std::numeric_limits<double>::infinity();
      for (long b = std::max(0L, j - reach); b <= std::min(ny - 1, j + reach); ++b)
        for (long a = std::max(0L, i - reach); a <= std::min(nx - 1, i + reach); ++a)
          if (g.is_interior(at(a, b)))
            dmin2 = std::min(dmin2, static_cast<double>((a - i) * (a - i) + (b - j) * (b - j)));
      if (!std::isfinite(dmin2)) continue;
      const double R = std::sqrt(dmin2) + 2.0;
      const long r = static_cast<long>(std::ceil(R));
      std::vector<std::size_t> pts;
      std::vector<std::array<double, 2>> xy;
      for (long b = std::max(0L, j - r); b <= std::min(ny - 1, j + r); ++b) {
        for (long a = std::max(0L, i - r); a <= std::min(nx - 1, i + r); ++a) {
          const double dx = static_cast<double>(a - i), dy = static_cast<double>(b - j);
          if (!g.is_interior(at(a, b)) || dx * dx + dy * dy > R * R + 1e-12) continue;
          pts.push_back(at(a, b));
          xy.push_back({dx, dy});
        }
      }
      // Quadratic, then linear, then constant, whichever the points support.
      Eigen::VectorXd c;
      for (int terms : {6, 3, 1}) {
        if (static_cast<int>(pts.size()) < terms + (terms > 1 ? 2 : 0)) continue;
        Eigen::MatrixXd A(static_cast<Eigen::Index>(pts.size()), terms);
        for (std::size_t n = 0; n < pts.size(); ++n) {
          const double x = xy[n][0], y = xy[n][1];
          const double row[6] = {1.0, x, y, x * x, x * y, y * y};
          for (int t = 0; t < terms; ++t) A(static_cast<Eigen::Index>(n), t) = row[t];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv[terms - 1] < 1e-8 * sv[0]) continue;
        // Row 0 of the pseudo-inverse: value of the fit at the ghost node.
        Eigen::VectorXd v0 = svd.matrixV().row(0).transpose().cwiseQuotient(sv);
        c = svd.matrixU() * v0;
        break;
      }
      if (c.size() == 0) continue;
      target_.push_back(p);
      for (std::size_t n = 0; n < pts.size(); ++n) {
        src_.push_back(pts[n]);
        w_.push_back(c[static_cast<Eigen::Index>(n)]);
      }
      offset_.push_back(src_.size());
    }
  }
}

ScalarField GhostFill::apply(const ScalarField& f) const {
  ScalarField out(f.domain());
  for (std::size_t p : d_->interior_nodes()) out[p] = f[p];
  for (std::size_t n = 0; n < target_.size(); ++n) {
    double s = 0.0;
    for (std::size_t k = offset_[n]; k < offset_[n + 1]; ++k) s += w_[k] * f[src_[k]];
    out[target_[n]] = s;
  }
  return out;
}

double GhostFill::max_noise_gain() const {
  double m = 0.0;
  for (std::size_t n = 0; n < target_.size(); ++n) {
    double s = 0.0;
    for (std::size_t k = offset_[n]; k < offset_[n + 1]; ++k) s += w_[k] * w_[k];
    m = std::max(m, s);
  }
  return m;
}

}  // namespace arnold
