#pragma once

// Vorticity functions g, their Legendre transforms, and the scalar
// functionals built on P: energy, energy-Casimir, the supporting functionals
// D, D_s, D-hat and the stream-function form H.

#include <string>

#include "arnold/field.hpp"

namespace arnold {

// Piecewise cubic Hermite function on knots t_0 < ... < t_n, continued
// linearly with the end slopes outside [t_0, t_n]. Covers linear, affine and
// tabulated monotone (PCHIP) inputs as well as their extensions.
class GFunc {
 public:
  enum class Kind { linear, affine, tabulated };

  static GFunc linear(double kappa);
  static GFunc affine(double kappa, double c);
  // Monotone C^1 interpolation of nondecreasing samples (Fritsch-Carlson).
  static GFunc tabulated(std::vector<double> s, std::vector<double> g);
  static GFunc hermite(Kind kind, std::vector<double> t, std::vector<double> v, std::vector<double> d);

  double operator()(double s) const;
  double deriv(double s) const;
  // G(s) = integral of g from 0 to s, exact for the piecewise cubic.
  double integral(double s) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& knots() const { return t_; }
  const std::vector<double>& values() const { return v_; }
  const std::vector<double>& slopes() const { return d_; }
  // Extreme values of g' over the whole real line.
  double min_slope() const;
  double max_slope() const;
  double median_slope() const;
  double left_slope() const { return d_.front(); }
  double right_slope() const { return d_.back(); }

  bool extended() const { return extended_; }
  double m_bar() const { return m_bar_; }
  double M_bar() const { return M_bar_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  std::string describe() const;

  friend GFunc extend_g(const GFunc& g, double m_bar, double M_bar);

 private:
  std::size_t segment(double s) const;  // index k with t_k <= s < t_{k+1}, clamped
  double cumulative(double s) const;    // integral from t_0 to s
  void prepare();

  Kind kind_ = Kind::linear;
  std::vector<double> t_, v_, d_, cum_;
  bool extended_ = false;
  double m_bar_ = 0.0, M_bar_ = 0.0, c1_ = 0.0, c2_ = 0.0;
};

// Equal to g on [m_bar, M_bar]; unit-width quadratic collars, then linear with
// slopes c1 = max(g'(M_bar), 1) to the right and c2 = max(g'(m_bar), 1) to the left.
GFunc extend_g(const GFunc& g, double m_bar, double M_bar);

class LegendrePair {
 public:
  explicit LegendrePair(GFunc g);
  const GFunc& g() const { return g_; }
  double G(double tau) const { return g_.integral(tau); }
  // Smallest tau with g(tau) >= s.
  double f(double s) const;
  // sup_tau (s*tau - G(tau)), attained at tau = f(s).
  double Ghat(double s) const;
  // F(s) = integral of f from 0 to s.
  double F(double s) const { return Ghat(s) - ghat0_; }
  // Ghat(0) by golden-section minimisation of G plus adaptive Simpson on f.
  double ghat_by_quadrature(double s, double tol = 1e-10) const;
  double ghat0_golden() const;

 private:
  GFunc g_;
  double ghat0_;
};

// Requires positive tail slopes (use extend_g first when needed).
LegendrePair legendre(const GFunc& g);

double energy(const HarmonicBasis& b, const ScalarField& omega, const CirculationVector& a);
double casimir(const ScalarField& w, const LegendrePair& lp);  // integral of Ghat(w)
double energy_casimir(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a,
                      const LegendrePair& lp);
double supporting_d(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a, const GFunc& g);
double supporting_d_s(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a, const GFunc& g,
                      double s, double m);

struct DHatResult {
  double value = 0.0;
  double mu = 0.0;
  double residual = 0.0;  // |integral g(Pw + h_a - mu) - m|
  int iterations = 0;
};
DHatResult supporting_d_hat(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a,
                            const GFunc& g, double m);

// Shares one P-solve across the whole chain of functionals at w.
struct ChainValues {
  double E = 0.0, EC = 0.0, D = 0.0;
  DHatResult dhat;
  std::vector<double> s, D_s;
};
ChainValues evaluate_chain(const HarmonicBasis& b, const ScalarField& w, const CirculationVector& a,
                           const LegendrePair& lp, double m, const std::vector<double>& s_values);

// H(u) = 1/2 a(u,u) - integral F(-Delta_h u), evaluated at u = psi_bar + phi.
double stream_energy_casimir(const ScalarField& psi_bar, const ScalarField& phi, const LegendrePair& lp);

// Bounds on H(psi_bar + P chi) - H(psi_bar) from the range of f' = 1/g'.
struct Sandwich {
  double lower = 0.0, value = 0.0, upper = 0.0;
  bool holds(double tol) const { return lower <= value + tol && value <= upper + tol; }
};
Sandwich sandwich_bounds(const HarmonicBasis& b, const ScalarField& psi_bar, const ScalarField& chi,
                         const LegendrePair& lp);

}  // namespace arnold
