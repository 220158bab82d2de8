#pragma once

// One-dimensional radial reference solutions on the annulus r_in < r < r_out.

#include <functional>
#include <vector>

namespace arnold {

struct RadialProblem {
  double r_in = 1.0;
  double r_out = 2.0;
  std::size_t n = 4096;  // intervals
  void validate() const;
};

struct RadialProfile {
  std::vector<double> r, u;
  // Piecewise-linear evaluation; r is clamped to [r_in, r_out].
  double operator()(double x) const;
  double slope_at_inner() const;  // one-sided second-order u'(r_in)
};

// -(1/r)(r u')' - kappa u = omega(r), u(r_out) = 0, 2 pi r_in u'(r_in) = a1.
// Finite volumes with a half cell at r_in; tridiagonal solve.
RadialProfile radial_stream(const RadialProblem& rp, const std::function<double(double)>& omega, double a1,
                            double kappa = 0.0);

// Smallest mu with u'' + u'/r + mu u = 0, u'(r_in) = 0, u(r_out) = 0, by RK4
// shooting from (u, u') = (1, 0) and bisection on u(r_out).
struct RadialEigen {
  double mu = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double mismatch_lo = 0.0, mismatch_hi = 0.0;
  int bisections = 0;
};
RadialEigen radial_eigen(const RadialProblem& rp, double tol = 1e-10);
// u(r_out) for a given mu.
double shooting_mismatch(const RadialProblem& rp, double mu);

struct AnnulusForms {
  double r_in = 1.0, r_out = 2.0, p11 = 0.0, q11 = 0.0;
  double zeta(double r) const;  // ln(r_out/r) / ln(r_out/r_in)
};
AnnulusForms annulus_closed_forms(double r_in, double r_out);

}  // namespace arnold
