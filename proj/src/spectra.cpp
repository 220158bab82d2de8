#include "arnold/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "arnold/steady.hpp"

namespace arnold {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Ldlt = Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>>;

struct PencilResult {
  double value = 0.0;
  VectorXd x;
  int iterations = 0;
  double residual = 0.0;
};

// Pencil data in dof coordinates: A (+ optional u u^T / s) against diag(M).
struct Pencil {
  SpMat A;
  VectorXd M;
  VectorXd u;  // rank-one direction, empty when absent
  double s = 1.0;
  double h2 = 1.0;

  VectorXd apply(const VectorXd& x) const {
    VectorXd y = A.selfadjointView<Eigen::Lower>() * x;
    if (u.size()) y += u * (u.dot(x) / s);
    return y;
  }
};

VectorXd mass_diag(const SpaceOperator& op) {
  const auto& d = op.grid();
  VectorXd M = VectorXd::Zero(static_cast<Eigen::Index>(op.n_dofs()));
  const double h2 = d.h() * d.h();
  for (std::size_t i = 0; i < d.interior_nodes().size(); ++i) M[static_cast<Eigen::Index>(i)] = h2;
  return M;
}

MatrixXd initial_block(Eigen::Index n, Eigen::Index ni, int b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  MatrixXd X = MatrixXd::Zero(n, b);
  for (Eigen::Index i = 0; i < ni; ++i) X(i, 0) = 1.0;
  for (int j = 1; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = U(rng);
  return X;
}

MatrixXd orthonormalize(const MatrixXd& Y) {
  Eigen::HouseholderQR<MatrixXd> qr(Y);
  return qr.householderQ() * MatrixXd::Identity(Y.rows(), Y.cols());
}

// Interior-node Euler-Lagrange residual in the discrete L2 norm.
double el_residual(const Pencil& P, const VectorXd& x, double lambda, Eigen::Index ni) {
  VectorXd r = P.apply(x) - lambda * P.M.cwiseProduct(x);
  return r.head(ni).norm() / std::sqrt(P.h2);
}

PencilResult smallest(const Pencil& P, double sigma_hint, Eigen::Index ni, const EigenOptions& opt) {
  const Eigen::Index n = P.A.rows();
  const int b = static_cast<int>(std::min<Eigen::Index>(opt.block, std::max<Eigen::Index>(1, ni)));
  double sigma = sigma_hint;
  Ldlt ldlt;
  for (int attempt = 0;; ++attempt) {
    SpMat B = P.A;
    for (Eigen::Index i = 0; i < n; ++i) B.coeffRef(i, i) -= sigma * P.M[i];
    ldlt.compute(B);
    if (ldlt.info() == Eigen::Success) break;
    if (attempt >= 1) throw SolverError("eigen solve: shifted factorization failed twice");
    sigma -= 1.0 + std::abs(sigma);
  }
  VectorXd w;
  double denom = 0.0;
  if (P.u.size()) {
    w = ldlt.solve(P.u);
    denom = P.s + P.u.dot(w);
  }
  auto solve = [&](const VectorXd& y) {
    VectorXd z = ldlt.solve(y);
    if (P.u.size()) z -= w * (P.u.dot(z) / denom);
    return z;
  };

  MatrixXd X = initial_block(n, ni, b, opt.seed);
  PencilResult res;
  for (res.iterations = 1; res.iterations <= opt.max_iter; ++res.iterations) {
    MatrixXd Y(n, b);
    for (int j = 0; j < b; ++j) Y.col(j) = solve(P.M.cwiseProduct(X.col(j)));
    MatrixXd Q = orthonormalize(Y);
    MatrixXd AQ(n, b);
    for (int j = 0; j < b; ++j) AQ.col(j) = P.apply(Q.col(j));
    MatrixXd Ga = Q.transpose() * AQ;
    MatrixXd Gm = Q.transpose() * P.M.asDiagonal() * Q;
    Ga = 0.5 * (Ga + Ga.transpose()).eval();
    Gm = 0.5 * (Gm + Gm.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(Ga, Gm);
    if (es.info() != Eigen::Success) throw SolverError("eigen solve: Rayleigh-Ritz step failed");
    X = Q * es.eigenvectors();
    VectorXd x = X.col(0);
    x /= std::sqrt(x.dot(P.M.cwiseProduct(x)));
    res.value = es.eigenvalues()[0];
    res.x = x;
    res.residual = el_residual(P, x, res.value, ni);
    if (res.residual <= opt.tol) return res;
  }
  throw SolverError("eigen solve: iteration cap reached");
}

ScalarField to_field(const SpaceOperator& op, const VectorXd& x) {
  ScalarField f(op.domain());
  op.from_dofs(x, f.data());
  double s = 0.0;
  for (std::size_t p : op.grid().interior_nodes()) s += f[p];
  if (s < 0.0) f *= -1.0;
  if (s == 0.0) {
    for (std::size_t p : op.grid().interior_nodes()) {
      if (f[p] != 0.0) {
        if (f[p] < 0.0) f *= -1.0;
        break;
      }
    }
  }
  return f;
}

std::vector<double> fluxes(const ScalarField& u) {
  std::vector<double> out;
  for (int k = 1; k < u.grid().n_components(); ++k) out.push_back(boundary_flux(u, k));
  return out;
}

SpectralResult run_smallest(const HarmonicBasis& b, Space space, const ScalarField* c, const EigenOptions& opt) {
  const auto& d = b.grid();
  std::vector<double> coef(d.size(), 0.0);
  double cmin = 0.0;
  if (c) {
    bool first = true;
    for (std::size_t p : d.interior_nodes()) {
      coef[p] = (*c)[p];
      if (!std::isfinite(coef[p])) throw std::invalid_argument("lambda_c: coefficient is not finite");
      cmin = first ? coef[p] : std::min(cmin, coef[p]);
      first = false;
    }
  }
  SpaceOperator op(b.domain(), space, coef);
  Pencil P{op.assemble(), mass_diag(op), {}, 1.0, d.h() * d.h()};
  const auto ni = static_cast<Eigen::Index>(d.interior_nodes().size());
  PencilResult r = smallest(P, cmin - 1.0, ni, opt);
  SpectralResult out;
  out.value = r.value;
  out.minimizer = to_field(op, r.x);
  out.flux_diag = fluxes(out.minimizer);
  out.iterations = r.iterations;
  out.residual = r.residual;
  return out;
}

}  // namespace

SpectralResult lambda_c(const HarmonicBasis& b, const ScalarField& c, const EigenOptions& opt) {
  return run_smallest(b, Space::circulation, &c, opt);
}

SpectralResult lambda_plain(const HarmonicBasis& b, const EigenOptions& opt) {
  return run_smallest(b, Space::circulation, nullptr, opt);
}

SpectralResult lambda_dirichlet(const HarmonicBasis& b, const EigenOptions& opt) {
  return run_smallest(b, Space::dirichlet, nullptr, opt);
}

SpectralResult lambda_big(const HarmonicBasis& b, const EigenOptions& opt) {
  const auto& d = b.grid();
  const Factorization& fac = b.circulation_factor();
  const SpaceOperator& op = fac.op();
  const VectorXd M = mass_diag(op);
  const auto n = static_cast<Eigen::Index>(op.n_dofs());
  const auto ni = static_cast<Eigen::Index>(d.interior_nodes().size());
  const int bs = static_cast<int>(std::min<Eigen::Index>(opt.block, ni));
  const double h2 = d.h() * d.h();
  auto T = [&](const VectorXd& x) {
    VectorXd y = fac.solve_dofs(M.cwiseProduct(x));
    y.tail(n - ni).setZero();  // P phi restricted to interior values
    return y;
  };
  MatrixXd Z = initial_block(n, ni, bs, opt.seed);
  Z.bottomRows(n - ni).setZero();
  SpectralResult out;
  for (out.iterations = 1; out.iterations <= opt.max_iter; ++out.iterations) {
    MatrixXd Q = orthonormalize(Z);
    MatrixXd W(n, bs);
    for (int j = 0; j < bs; ++j) W.col(j) = T(Q.col(j));
    MatrixXd H = Q.transpose() * M.asDiagonal() * W;
    MatrixXd Gm = Q.transpose() * M.asDiagonal() * Q;
    H = 0.5 * (H + H.transpose()).eval();
    Gm = 0.5 * (Gm + Gm.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(H, Gm);
    if (es.info() != Eigen::Success) throw SolverError("lambda_big: Rayleigh-Ritz step failed");
    const MatrixXd V = es.eigenvectors().rowwise().reverse();
    VectorXd phi = Q * V.col(0);
    VectorXd Tphi = W * V.col(0);
    const double nrm = std::sqrt(phi.dot(M.cwiseProduct(phi)));
    phi /= nrm;
    Tphi /= nrm;
    out.value = es.eigenvalues()[bs - 1];
    VectorXd r = Tphi - out.value * phi;
    out.residual = std::sqrt(r.head(ni).squaredNorm() * h2);
    Z = W * V;
    if (out.residual <= opt.tol * std::max(1.0, out.value)) {
      out.minimizer = to_field(op, phi);
      out.flux_diag = fluxes(p_apply_condensed(b, out.minimizer, Backend::cholesky));
      return out;
    }
  }
  throw SolverError("lambda_big: iteration cap reached");
}

ScalarField gprime_field(const ScalarField& psi_bar, const GFunc& g) {
  ScalarField out(psi_bar.domain());
  const auto& d = psi_bar.grid();
  for (std::size_t p = 0; p < d.size(); ++p)
    if (!d.is_exterior(p)) out[p] = g.deriv(psi_bar[p]);
  return out;
}

WeakPosDef weak_pos_def(const HarmonicBasis& b, const ScalarField& gprime, const EigenOptions& opt,
                        double threshold) {
  const auto& d = b.grid();
  WeakPosDef out;
  out.integral_gprime = integrate(gprime);
  ScalarField c(b.domain());
  for (std::size_t p : d.interior_nodes()) c[p] = -gprime[p];
  if (std::abs(out.integral_gprime) <= threshold * std::max(1.0, d.area())) {
    SpectralResult r = lambda_c(b, c, opt);
    out.trivial = true;
    out.delta0 = r.value;
    out.iterations = r.iterations;
    out.residual = r.residual;
    out.minimizer = r.minimizer;
    return out;
  }
  std::vector<double> coef(d.size(), 0.0);
  double cmin = 0.0;
  bool first = true;
  for (std::size_t p : d.interior_nodes()) {
    coef[p] = c[p];
    cmin = first ? coef[p] : std::min(cmin, coef[p]);
    first = false;
  }
  SpaceOperator op(b.domain(), Space::circulation, coef);
  Pencil P{op.assemble(), mass_diag(op), {}, out.integral_gprime, d.h() * d.h()};
  P.u = VectorXd::Zero(P.A.rows());
  for (std::size_t i = 0; i < d.interior_nodes().size(); ++i)
    P.u[static_cast<Eigen::Index>(i)] = P.h2 * gprime[d.interior_nodes()[i]];
  const auto ni = static_cast<Eigen::Index>(d.interior_nodes().size());
  PencilResult r = smallest(P, cmin - 1.0, ni, opt);
  out.delta0 = r.value;
  out.iterations = r.iterations;
  out.residual = r.residual;
  out.minimizer = to_field(op, r.x);
  return out;
}

WeakPosDef weak_pos_def(const HarmonicBasis& b, const SteadyState& s, const EigenOptions& opt) {
  return weak_pos_def(b, gprime_field(s.psi_bar, s.g), opt);
}

CriterionReport check_stability(const HarmonicBasis& b, const ScalarField& psi_bar, const GFunc& g,
                                const EigenOptions& opt, double tol_eig, double tol_margin) {
  CriterionReport r;
  r.tol_eig = tol_eig;
  r.tol_margin = tol_margin;
  const auto& d = b.grid();
  const ScalarField gp = gprime_field(psi_bar, g);
  bool first = true;
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.is_exterior(p)) continue;
    r.gprime_min = first ? gp[p] : std::min(r.gprime_min, gp[p]);
    r.gprime_max = first ? gp[p] : std::max(r.gprime_max, gp[p]);
    first = false;
  }
  const SpectralResult lam = lambda_plain(b, opt);
  const SpectralResult big = lambda_big(b, opt);
  r.lambda_h = lam.value;
  r.Lambda_h = big.value;
  r.reciprocity_defect = std::abs(lam.value * big.value - 1.0);
  ScalarField c(b.domain());
  for (std::size_t p : d.interior_nodes()) c[p] = -gp[p];
  r.mu_min = lambda_c(b, c, opt).value;
  const WeakPosDef w = weak_pos_def(b, gp, opt);
  r.delta0 = w.delta0;
  r.delta0_trivial = w.trivial;
  r.min_nonneg_ok = r.gprime_min >= -tol_margin;
  r.min_positive_ok = r.gprime_min > tol_margin;
  r.max_below_lambda_ok = r.gprime_max < r.lambda_h - tol_margin;
  r.quadform_ok = r.mu_min >= -tol_eig;
  r.constant_branch = std::max(std::abs(r.gprime_min), std::abs(r.gprime_max)) <= tol_margin;
  return r;
}

CriterionReport check_stability(const HarmonicBasis& b, const SteadyState& s, const EigenOptions& opt,
                                double tol_eig, double tol_margin) {
  return check_stability(b, s.psi_bar, s.g, opt, tol_eig, tol_margin);
}

}  // namespace arnold
