#pragma once

// Extremal eigenvalues of the stiffness/mass pencil on the discrete X-space and
// the stability verdicts built from them.
//
// The circulation-space constants carry no mass, so the pencil (K + cM, M) is
// solved in dof coordinates by block inverse iteration with Rayleigh-Ritz
// extraction; the shifted operator is factorized once per solve.

#include <string>

#include "arnold/functionals.hpp"

namespace arnold {

struct SteadyState;

struct EigenOptions {
  double tol = 1e-9;  // Euler-Lagrange residual, discrete L2 norm
  int max_iter = 2000;
  int block = 6;
  std::uint64_t seed = 0x5eed;
};

struct SpectralResult {
  double value = 0.0;
  ScalarField minimizer;           // unit discrete L2 norm, positive mean
  std::vector<double> flux_diag;   // flux of the minimizer through Gamma_1..Gamma_N
  int iterations = 0;
  double residual = 0.0;           // ||-Delta_h u + c u - value u||_2 over interior nodes
};

// min over X_h of (a(u,u) + (c u, u)) / (u, u).
SpectralResult lambda_c(const HarmonicBasis& b, const ScalarField& c, const EigenOptions& opt = {});
SpectralResult lambda_plain(const HarmonicBasis& b, const EigenOptions& opt = {});
// Largest eigenvalue of P in L2 by block power iteration with the condensed solve.
SpectralResult lambda_big(const HarmonicBasis& b, const EigenOptions& opt = {});
// Smallest eigenvalue with zero data on every boundary component.
SpectralResult lambda_dirichlet(const HarmonicBasis& b, const EigenOptions& opt = {});

struct WeakPosDef {
  double delta0 = 0.0;
  bool trivial = false;          // integral of g' below threshold; no rank-one term
  double integral_gprime = 0.0;
  int iterations = 0;
  double residual = 0.0;
  ScalarField minimizer;
};
WeakPosDef weak_pos_def(const HarmonicBasis& b, const ScalarField& gprime, const EigenOptions& opt = {},
                        double threshold = 1e-12);
WeakPosDef weak_pos_def(const HarmonicBasis& b, const SteadyState& s, const EigenOptions& opt = {});

struct CriterionReport {
  double lambda_h = 0.0;
  double Lambda_h = 0.0;
  double reciprocity_defect = 0.0;  // |lambda_h * Lambda_h - 1|
  double gprime_min = 0.0;
  double gprime_max = 0.0;
  double mu_min = 0.0;
  double delta0 = 0.0;
  bool delta0_trivial = false;
  bool min_positive_ok = false;      // min g' > 0
  bool max_below_lambda_ok = false;  // max g' < lambda_h
  bool min_nonneg_ok = false;        // min g' >= 0
  bool quadform_ok = false;          // mu_min >= -tol_eig
  bool constant_branch = false;      // g' vanishes identically
  double tol_eig = 1e-8;
  double tol_margin = 1e-6;
  bool satisfied() const { return min_nonneg_ok && quadform_ok; }
};

// g'(psi_bar) on non-exterior nodes.
ScalarField gprime_field(const ScalarField& psi_bar, const GFunc& g);
CriterionReport check_stability(const HarmonicBasis& b, const ScalarField& psi_bar, const GFunc& g,
                                const EigenOptions& opt = {}, double tol_eig = 1e-8, double tol_margin = 1e-6);
CriterionReport check_stability(const HarmonicBasis& b, const SteadyState& s, const EigenOptions& opt = {},
                                double tol_eig = 1e-8, double tol_margin = 1e-6);

}  // namespace arnold
