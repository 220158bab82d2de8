#pragma once

// Steady states: -Delta_h psi = g(psi) on interior nodes, psi = 0 on Gamma_0,
// psi constant on Gamma_k with net flux -a_k.

#include "arnold/spectra.hpp"

namespace arnold {

struct SteadyState {
  ScalarField psi_bar;
  ScalarField omega_bar;  // g(psi_bar) on non-exterior nodes
  CirculationVector a;
  GFunc g;
  double residual_pde = 0.0;  // ||-Delta_h psi_bar - g(psi_bar)||_inf, interior
  double m_lo = 0.0;          // min psi_bar over non-exterior nodes
  double m_hi = 0.0;          // max psi_bar over non-exterior nodes
  double m = 0.0;             // integral of omega_bar
  std::vector<double> flux_errors;  // |flux_k(psi_bar) + a_k|
  bool certified = false;
  int iterations = 0;
};

// Evaluates omega_bar, residuals and bounds for a candidate psi. Certified
// when the PDE residual is below cert_tol * max(1, ||omega_bar||_inf) and the
// flux rows hold to the same relative level.
SteadyState certify_state(const HarmonicBasis& b, const ScalarField& psi, const GFunc& g, const CirculationVector& a,
                          double cert_tol = 1e-6);

struct ResonanceError : SolverError {
  double eigenvalue;
  ResonanceError(const std::string& what, double ev) : SolverError(what), eigenvalue(ev) {}
};

// g(s) = kappa s. Rejects kappa within rel_guard of lambda_h or the Dirichlet
// ground value. Pass known eigenvalues to skip recomputing them.
struct LinearOptions {
  double rel_guard = 1e-6;
  double lambda_h = 0.0;          // 0 = compute
  double lambda_dirichlet = 0.0;  // 0 = compute
  EigenOptions eig;
};
SteadyState steady_linear(const HarmonicBasis& b, double kappa, const CirculationVector& a,
                          const LinearOptions& opt = {});

struct PicardOptions {
  int max_iter = 2000;
  double tol = 1e-12;   // on ||psi^{k+1} - psi^k||_inf
  double damping = 1.0;
  double cert_tol = 1e-6;
};
// Damped fixed point psi <- (1-beta) psi + beta * stream(g(psi), a). An empty
// init selects the linear state at the median slope of g.
SteadyState steady_picard(const HarmonicBasis& b, const GFunc& g, const CirculationVector& a,
                          const ScalarField& init = {}, const PicardOptions& opt = {});

}  // namespace arnold
