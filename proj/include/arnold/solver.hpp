#pragma once

// Linear solvers for the two function spaces used throughout:
//   dirichlet:   values vanish on every boundary component;
//   circulation: values vanish on Gamma_0 and are one free constant theta_k on
//                each inner component Gamma_k (the discrete X-space).
//
// Vectors are full-grid node arrays. A right-hand side or residual stores the
// interior equations on interior nodes and, in the circulation space, the
// single Gamma_k equation (the net flux row) replicated on every node of
// Gamma_k. The dof inner product weights interior nodes by 1 and Gamma_k nodes
// by 1/|Gamma_k|, so that replicated rows count once.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "arnold/grid.hpp"

namespace arnold {

enum class Space { dirichlet, circulation };
enum class Backend { cg, cholesky };

struct SolverOptions {
  double rel_tol = 1e-10;
  int max_iter = 100000;
  Backend backend = Backend::cg;
};

struct SolveStats {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// A = K + diag(mass * coef), restricted to a space. K is the weighted
// five-point stiffness matrix (h^2 times -Delta_h on interior rows).
class SpaceOperator {
 public:
  SpaceOperator(DomainPtr d, Space s, std::vector<double> coef = {});

  const GridDomain& grid() const { return *d_; }
  const DomainPtr& domain() const { return d_; }
  Space space() const { return space_; }
  const std::vector<double>& coef() const { return coef_; }

  void apply(const double* x, double* y) const;
  double dot(const double* x, const double* y) const;
  // Forces x into the space: exterior and Gamma_0 zero; Gamma_k averaged
  // (circulation) or zeroed (dirichlet).
  void project(double* x) const;
  // Sums each Gamma_k block and replicates it: turns a raw nodewise residual
  // into the residual representation.
  void collapse(double* r) const;
  void precondition(const double* r, double* z) const;

  SolveStats cg(const double* b, double* x, const SolverOptions& opt) const;
  SolveStats minres(const double* b, double* x, const SolverOptions& opt) const;

  // Sparse matrix in dof coordinates: interior nodes first, then theta_1..theta_N.
  Eigen::SparseMatrix<double> assemble() const;
  std::size_t n_dofs() const;
  Eigen::VectorXd to_dofs(const double* full) const;
  void from_dofs(const Eigen::VectorXd& dofs, double* full) const;

 private:
  DomainPtr d_;
  Space space_;
  std::vector<double> coef_;
  std::vector<double> mass_coef_;
  std::vector<double> inv_diag_;
};

// Sparse LDL^T of a SpaceOperator; solves with the same vector conventions.
class Factorization {
 public:
  explicit Factorization(const SpaceOperator& op);
  void solve(const double* b, double* x) const;
  Eigen::VectorXd solve_dofs(const Eigen::VectorXd& b) const;
  const SpaceOperator& op() const { return op_; }

 private:
  SpaceOperator op_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
};

// Dispatches on opt.backend; `indefinite` selects MINRES for the iterative path.
SolveStats solve(const SpaceOperator& op, const double* b, double* x, const SolverOptions& opt,
                 bool indefinite = false);

}  // namespace arnold
