#pragma once

// Harmonic boundary basis zeta_i (zeta_i = 1 on Gamma_i, 0 on the other
// components), its Gram matrix p and the inverse q.

#include <Eigen/Dense>
#include <memory>
#include <mutex>

#include "arnold/solver.hpp"

namespace arnold {

class HarmonicBasis {
 public:
  HarmonicBasis(DomainPtr d, std::vector<ScalarField> zetas, Eigen::MatrixXd p, SolverOptions opt,
                double max_residual);

  const DomainPtr& domain() const { return d_; }
  const GridDomain& grid() const { return *d_; }
  int n() const { return static_cast<int>(zetas_.size()); }
  const std::vector<ScalarField>& zetas() const { return zetas_; }
  const ScalarField& zeta(int i) const { return zetas_.at(static_cast<std::size_t>(i - 1)); }
  const Eigen::MatrixXd& p() const { return p_; }
  const Eigen::MatrixXd& q() const { return q_; }
  const SolverOptions& options() const { return opt_; }
  // max_i ||K zeta_i||_inf / ||K e_i||_inf, e_i the boundary indicator.
  double max_residual() const { return max_residual_; }

  // Lazily built sparse factorizations of the plain stiffness operator.
  const Factorization& dirichlet_factor() const;
  const Factorization& circulation_factor() const;

 private:
  DomainPtr d_;
  std::vector<ScalarField> zetas_;
  Eigen::MatrixXd p_, q_;
  SolverOptions opt_;
  double max_residual_;
  mutable std::once_flag dir_once_, circ_once_;
  mutable std::unique_ptr<Factorization> dir_, circ_;
};

using BasisPtr = std::shared_ptr<const HarmonicBasis>;

BasisPtr solve_basis(DomainPtr d, double tol = 1e-10, Backend backend = Backend::cg);
BasisPtr solve_basis(DomainPtr d, const SolverOptions& opt);

struct XDecomposition {
  std::vector<double> theta;
  ScalarField v;
};

// u must vanish on Gamma_0 and be constant on each Gamma_i (within tol).
XDecomposition x_decompose(const HarmonicBasis& b, const ScalarField& u, double tol = 1e-9);

}  // namespace arnold
