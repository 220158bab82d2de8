#include "arnold/harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace arnold {

HarmonicBasis::HarmonicBasis(DomainPtr d, std::vector<ScalarField> zetas, Eigen::MatrixXd p, SolverOptions opt,
                             double max_residual)
    : d_(std::move(d)), zetas_(std::move(zetas)), p_(std::move(p)), opt_(opt), max_residual_(max_residual) {
  const auto n = p_.rows();
  if (n == 0) {
    q_ = Eigen::MatrixXd(0, 0);
    return;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(p_);
  if (!lu.isInvertible()) throw SolverError("Gram matrix p is singular (mislabeled components?)");
  q_ = lu.inverse();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p_);
  if (es.eigenvalues().minCoeff() <= 0.0) throw SolverError("Gram matrix p is not positive definite");
}

const Factorization& HarmonicBasis::dirichlet_factor() const {
  std::call_once(dir_once_, [&] { dir_ = std::make_unique<Factorization>(SpaceOperator(d_, Space::dirichlet)); });
  return *dir_;
}

const Factorization& HarmonicBasis::circulation_factor() const {
  std::call_once(circ_once_,
                 [&] { circ_ = std::make_unique<Factorization>(SpaceOperator(d_, Space::circulation)); });
  return *circ_;
}

BasisPtr solve_basis(DomainPtr d, double tol, Backend backend) {
  SolverOptions opt;
  opt.rel_tol = tol;
  opt.backend = backend;
  return solve_basis(std::move(d), opt);
}

BasisPtr solve_basis(DomainPtr d, const SolverOptions& opt) {
  if (!(opt.rel_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const int N = d->n_holes();
  SpaceOperator op(d, Space::dirichlet);
  std::unique_ptr<Factorization> fac;
  if (opt.backend == Backend::cholesky) fac = std::make_unique<Factorization>(op);
  const auto& kt = kernels::active();
  std::vector<ScalarField> zetas;
  double worst = 0.0;
  for (int i = 1; i <= N; ++i) {
    ScalarField e(d);
    for (std::size_t q : d->boundary_nodes(i)) e[q] = 1.0;
    std::vector<double> ke(d->size()), b(d->size(), 0.0);
    kt.apply(d->stencil(), e.data(), ke.data());
    double force = 0.0;
    for (std::size_t p : d->interior_nodes()) {
      b[p] = -ke[p];
      force = std::max(force, std::abs(ke[p]));
    }
    std::vector<double> v(d->size(), 0.0);
    if (fac)
      fac->solve(b.data(), v.data());
    else
      op.cg(b.data(), v.data(), opt);
    ScalarField z = e;
    for (std::size_t p : d->interior_nodes()) z[p] = v[p];
    kt.apply(d->stencil(), z.data(), ke.data());
    double res = 0.0;
    for (std::size_t p : d->interior_nodes()) res = std::max(res, std::abs(ke[p]));
    worst = std::max(worst, force > 0.0 ? res / force : res);
    zetas.push_back(std::move(z));
  }
  Eigen::MatrixXd p(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = dirichlet_form(zetas[static_cast<std::size_t>(i)], zetas[static_cast<std::size_t>(j)]);
      p(i, j) = v;
      p(j, i) = v;
    }
  return std::make_shared<HarmonicBasis>(d, std::move(zetas), std::move(p), opt, worst);
}

XDecomposition x_decompose(const HarmonicBasis& b, const ScalarField& u, double tol) {
  const auto& d = b.grid();
  const double scale = std::max(1.0, max_abs_interior(u));
  for (std::size_t q : d.boundary_nodes(0))
    if (std::abs(u[q]) > tol * scale) throw std::invalid_argument("x_decompose: u does not vanish on Gamma_0");
  for (int k = 1; k < d.n_components(); ++k) {
    const auto& nodes = d.boundary_nodes(k);
    const double ref = u[nodes.front()];
    for (std::size_t q : nodes)
      if (std::abs(u[q] - ref) > tol * scale)
        throw std::invalid_argument("x_decompose: u is not constant on Gamma_" + std::to_string(k));
  }
  const int N = b.n();
  Eigen::VectorXd g(N);
  for (int j = 0; j < N; ++j) g[j] = dirichlet_form(u, b.zetas()[static_cast<std::size_t>(j)]);
  Eigen::VectorXd theta = b.q() * g;
  XDecomposition out{std::vector<double>(theta.data(), theta.data() + N), u};
  for (int i = 0; i < N; ++i) out.v -= theta[i] * b.zetas()[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace arnold
