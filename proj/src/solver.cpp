#include "arnold/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arnold {

SpaceOperator::SpaceOperator(DomainPtr d, Space s, std::vector<double> coef)
    : d_(std::move(d)), space_(s), coef_(std::move(coef)) {
  const std::size_t n = d_->size();
  if (coef_.empty()) coef_.assign(n, 0.0);
  if (coef_.size() != n) throw std::invalid_argument("coefficient field has wrong length");
  mass_coef_.assign(n, 0.0);
  inv_diag_.assign(n, 0.0);
  const auto& mass = d_->mass();
  const auto& diag = d_->diag();
  for (std::size_t p : d_->interior_nodes()) {
    mass_coef_[p] = mass[p] * coef_[p];
    const double dp = diag[p] + mass_coef_[p];
    inv_diag_[p] = dp != 0.0 ? 1.0 / dp : 1.0;
  }
  if (space_ == Space::circulation) {
    for (int k = 1; k < d_->n_components(); ++k) {
      double D = 0.0;
      for (const auto& e : d_->boundary_edges(k)) D += e.weight;
      for (std::size_t q : d_->boundary_nodes(k)) inv_diag_[q] = 1.0 / D;
    }
  }
}

void SpaceOperator::apply(const double* x, double* y) const {
  const auto& kt = kernels::active();
  kt.apply(d_->stencil(), x, y);
  kt.fma_diag(mass_coef_.data(), x, y, d_->size());
  for (std::size_t q : d_->boundary_nodes(0)) y[q] = 0.0;
  for (int k = 1; k < d_->n_components(); ++k) {
    const auto& nodes = d_->boundary_nodes(k);
    if (space_ == Space::dirichlet) {
      for (std::size_t q : nodes) y[q] = 0.0;
    } else {
      double s = 0.0;
      for (std::size_t q : nodes) s += y[q];
      for (std::size_t q : nodes) y[q] = s;
    }
  }
}

double SpaceOperator::dot(const double* x, const double* y) const {
  if (space_ == Space::dirichlet) return kernels::active().wdot(d_->mass().data(), x, y, d_->size()) / (d_->h() * d_->h());
  return kernels::active().wdot(d_->dof_weight().data(), x, y, d_->size());
}

void SpaceOperator::project(double* x) const {
  for (std::size_t p = 0; p < d_->size(); ++p)
    if (d_->is_exterior(p)) x[p] = 0.0;
  for (std::size_t q : d_->boundary_nodes(0)) x[q] = 0.0;
  for (int k = 1; k < d_->n_components(); ++k) {
    const auto& nodes = d_->boundary_nodes(k);
    double s = 0.0;
    if (space_ == Space::circulation) {
      for (std::size_t q : nodes) s += x[q];
      s /= static_cast<double>(nodes.size());
    }
    for (std::size_t q : nodes) x[q] = s;
  }
}

void SpaceOperator::collapse(double* r) const {
  for (std::size_t p = 0; p < d_->size(); ++p)
    if (d_->is_exterior(p)) r[p] = 0.0;
  for (std::size_t q : d_->boundary_nodes(0)) r[q] = 0.0;
  for (int k = 1; k < d_->n_components(); ++k) {
    const auto& nodes = d_->boundary_nodes(k);
    double s = 0.0;
    if (space_ == Space::circulation)
      for (std::size_t q : nodes) s += r[q];
    for (std::size_t q : nodes) r[q] = s;
  }
}

void SpaceOperator::precondition(const double* r, double* z) const {
  kernels::active().mul(inv_diag_.data(), r, z, d_->size());
}

SolveStats SpaceOperator::cg(const double* b, double* x, const SolverOptions& opt) const {
  const auto& kt = kernels::active();
  const std::size_t n = d_->size();
  project(x);
  std::vector<double> r(n), z(n), p(n), q(n);
  apply(x, q.data());
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double bnorm = std::sqrt(dot(b, b));
  SolveStats st;
  if (bnorm == 0.0) {
    std::fill(x, x + n, 0.0);
    st.converged = true;
    return st;
  }
  precondition(r.data(), z.data());
  p = z;
  double rz = dot(r.data(), z.data());
  double rnorm = std::sqrt(dot(r.data(), r.data()));
  for (st.iterations = 0; st.iterations < opt.max_iter; ++st.iterations) {
    if (rnorm <= opt.rel_tol * bnorm) break;
    apply(p.data(), q.data());
    const double pq = dot(p.data(), q.data());
    if (!(pq > 0.0)) throw SolverError("CG breakdown: operator not positive definite");
    const double alpha = rz / pq;
    kt.axpy(alpha, p.data(), x, n);
    kt.axpy(-alpha, q.data(), r.data(), n);
    precondition(r.data(), z.data());
    const double rz_new = dot(r.data(), z.data());
    kt.xpay(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
    rnorm = std::sqrt(dot(r.data(), r.data()));
  }
  st.rel_residual = rnorm / bnorm;
  st.converged = st.rel_residual <= opt.rel_tol;
  if (!st.converged) throw SolverError("CG did not converge within the iteration cap");
  return st;
}

SolveStats SpaceOperator::minres(const double* b, double* x, const SolverOptions& opt) const {
  const auto& kt = kernels::active();
  const std::size_t n = d_->size();
  project(x);
  std::vector<double> r1(n), r2(n), y(n), v(n), w(n, 0.0), w1(n), w2(n, 0.0);
  apply(x, y.data());
  for (std::size_t i = 0; i < n; ++i) r1[i] = b[i] - y[i];
  SolveStats st;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    std::fill(x, x + n, 0.0);
    st.converged = true;
    return st;
  }
  precondition(r1.data(), y.data());
  double beta1 = dot(r1.data(), y.data());
  if (beta1 < 0.0) throw SolverError("MINRES: preconditioner is not positive definite");
  beta1 = std::sqrt(beta1);
  r2 = r1;
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1, cs = -1.0, sn = 0.0;
  const double tiny = std::numeric_limits<double>::epsilon();
  for (st.iterations = 1; st.iterations <= opt.max_iter && beta1 > 0.0; ++st.iterations) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    apply(v.data(), y.data());
    if (st.iterations >= 2) kt.axpy(-beta / oldb, r1.data(), y.data(), n);
    const double alfa = dot(v.data(), y.data());
    kt.axpy(-alfa / beta, r2.data(), y.data(), n);
    std::swap(r1, r2);
    r2 = y;
    precondition(r2.data(), y.data());
    oldb = beta;
    beta = dot(r2.data(), y.data());
    if (beta < 0.0) throw SolverError("MINRES: preconditioner is not positive definite");
    beta = std::sqrt(beta);
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    std::swap(w1, w2);
    std::swap(w2, w);
    for (std::size_t i = 0; i < n; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    kt.axpy(phi, w.data(), x, n);
    if (phibar <= 0.1 * opt.rel_tol * beta1 || beta == 0.0) break;
  }
  std::vector<double> res(n);
  apply(x, res.data());
  for (std::size_t i = 0; i < n; ++i) res[i] = b[i] - res[i];
  st.rel_residual = std::sqrt(dot(res.data(), res.data())) / bnorm;
  st.converged = st.rel_residual <= opt.rel_tol * 10.0;
  if (!st.converged) throw SolverError("MINRES did not converge within the iteration cap");
  return st;
}

std::size_t SpaceOperator::n_dofs() const {
  return d_->interior_nodes().size() +
         (space_ == Space::circulation ? static_cast<std::size_t>(d_->n_holes()) : 0);
}

Eigen::SparseMatrix<double> SpaceOperator::assemble() const {
  const auto& d = *d_;
  const std::size_t ni = d.interior_nodes().size();
  std::vector<long> index(d.size(), -1);
  for (std::size_t i = 0; i < ni; ++i) index[d.interior_nodes()[i]] = static_cast<long>(i);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * ni + 8);
  const auto& east = d.east();
  const auto& north = d.north();
  const auto& diag = d.diag();
  std::vector<double> theta_diag(static_cast<std::size_t>(d.n_components()), 0.0);
  for (std::size_t i = 0; i < ni; ++i) {
    const std::size_t p = d.interior_nodes()[i];
    const int row = static_cast<int>(i);
    trip.emplace_back(row, row, diag[p] + mass_coef_[p]);
    auto link = [&](std::size_t q, double w) {
      if (w == 0.0) return;
      if (index[q] >= 0) {
        trip.emplace_back(row, static_cast<int>(index[q]), -w);
        return;
      }
      const int k = d.component(q);
      if (k >= 1 && space_ == Space::circulation) {
        const int col = static_cast<int>(ni) + k - 1;
        trip.emplace_back(row, col, -w);
        trip.emplace_back(col, row, -w);
        theta_diag[static_cast<std::size_t>(k)] += w;
      }
    };
    link(p + 1, east[p]);
    link(p - 1, east[p - 1]);
    link(p + d.nx(), north[p]);
    link(p - d.nx(), north[p - d.nx()]);
  }
  if (space_ == Space::circulation) {
    for (int k = 1; k < d.n_components(); ++k) {
      const int col = static_cast<int>(ni) + k - 1;
      trip.emplace_back(col, col, theta_diag[static_cast<std::size_t>(k)]);
    }
  }
  const auto nd = static_cast<Eigen::Index>(n_dofs());
  Eigen::SparseMatrix<double> A(nd, nd);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

Eigen::VectorXd SpaceOperator::to_dofs(const double* full) const {
  const auto& d = *d_;
  Eigen::VectorXd out(static_cast<Eigen::Index>(n_dofs()));
  const std::size_t ni = d.interior_nodes().size();
  for (std::size_t i = 0; i < ni; ++i) out[static_cast<Eigen::Index>(i)] = full[d.interior_nodes()[i]];
  if (space_ == Space::circulation)
    for (int k = 1; k < d.n_components(); ++k)
      out[static_cast<Eigen::Index>(ni) + k - 1] = full[d.boundary_nodes(k).front()];
  return out;
}

void SpaceOperator::from_dofs(const Eigen::VectorXd& dofs, double* full) const {
  const auto& d = *d_;
  std::fill(full, full + d.size(), 0.0);
  const std::size_t ni = d.interior_nodes().size();
  for (std::size_t i = 0; i < ni; ++i) full[d.interior_nodes()[i]] = dofs[static_cast<Eigen::Index>(i)];
  if (space_ == Space::circulation)
    for (int k = 1; k < d.n_components(); ++k)
      for (std::size_t q : d.boundary_nodes(k)) full[q] = dofs[static_cast<Eigen::Index>(ni) + k - 1];
}

Factorization::Factorization(const SpaceOperator& op) : op_(op) {
  ldlt_.compute(op_.assemble());
  if (ldlt_.info() != Eigen::Success) throw SolverError("sparse LDL^T factorization failed");
}

void Factorization::solve(const double* b, double* x) const {
  Eigen::VectorXd sol = ldlt_.solve(op_.to_dofs(b));
  if (ldlt_.info() != Eigen::Success || !sol.allFinite()) throw SolverError("sparse LDL^T solve failed");
  op_.from_dofs(sol, x);
}

Eigen::VectorXd Factorization::solve_dofs(const Eigen::VectorXd& b) const {
  Eigen::VectorXd sol = ldlt_.solve(b);
  if (ldlt_.info() != Eigen::Success || !sol.allFinite()) throw SolverError("sparse LDL^T solve failed");
  return sol;
}

SolveStats solve(const SpaceOperator& op, const double* b, double* x, const SolverOptions& opt, bool indefinite) {
  if (opt.backend == Backend::cholesky) {
    Factorization f(op);
    f.solve(b, x);
    SolveStats st;
    st.converged = true;
    return st;
  }
  return indefinite ? op.minres(b, x, opt) : op.cg(b, x, opt);
}

}  // namespace arnold
