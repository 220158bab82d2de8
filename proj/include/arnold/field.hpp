#pragma once

// Green operator G, the circulation-corrected operator P, the circulation
// field h_a, stream-function reconstruction and velocity diagnostics.

#include "arnold/harmonic.hpp"

namespace arnold {

// -Delta_h u = phi on interior nodes, u = 0 on every boundary component.
// Uses the basis' backend (cached factorization for Backend::cholesky).
ScalarField green_solve(const HarmonicBasis& b, const ScalarField& phi);
ScalarField green_solve(const ScalarField& phi, const SolverOptions& opt);

// P phi = G phi + sum_ij q_ij (zeta_i, phi) zeta_j.
ScalarField p_apply(const HarmonicBasis& b, const ScalarField& phi);
// Same operator by one solve in the circulation space with zero net flux rows.
ScalarField p_apply_condensed(const HarmonicBasis& b, const ScalarField& phi);
ScalarField p_apply_condensed(const HarmonicBasis& b, const ScalarField& phi, Backend backend);

// h_a = -sum_ij q_ij a_i zeta_j.
ScalarField h_field(const HarmonicBasis& b, const CirculationVector& a);

struct StreamSolution {
  ScalarField psi;
  ScalarField omega;
  CirculationVector a;
  double residual = 0.0;            // ||-Delta_h psi - omega||_inf over interior nodes
  std::vector<double> flux_errors;  // |flux_k(psi) + a_k|, k = 1..N
};

// psi = P omega + h_a.
StreamSolution stream_solve(const HarmonicBasis& b, const ScalarField& omega, const CirculationVector& a);
// psi from a single circulation-space solve with flux rows -a_k.
ScalarField stream_direct(const HarmonicBasis& b, const ScalarField& omega, const CirculationVector& a,
                          Backend backend);

struct VelocityField {
  ScalarField vx;
  ScalarField vy;
};

// v = (d psi/dy, -d psi/dx) by three-point differences that honour the edge
// conductances (boundary crossings sit at distance h/w). Boundary and nearby
// exterior nodes receive an extension fill for interpolation purposes.
VelocityField velocity(const ScalarField& psi);
// Line sum of v.dr around a grid contour one cell inside Gamma_k, oriented so
// that it equals a_k for the field generated by (omega = 0, a).
double circulation(const VelocityField& v, int k);
// Contour circulation plus the vorticity enclosed between Gamma_k and the
// contour, which estimates the circulation carried by Gamma_k itself.
double circulation(const VelocityField& v, int k, const ScalarField& omega);
double kinetic_energy(const VelocityField& v);
// Central-difference divergence on nodes whose four neighbours are interior.
ScalarField divergence(const VelocityField& v);

// Ghost values along a grid line from the nearest filled nodes u1, u2, u3:
// linear 2u1 - u2; quadratic 3u1 - 3u2 + u3; limited takes the quadratic value
// when the slopes s1 = u1 - u2 and s2 = u2 - u3 agree within 50%, otherwise
// u1 + minmod(s1, s2), so grid-scale oscillations are not amplified.
enum class Extrapolation { linear, quadratic, limited };

// Extends interior values outward by `layers` node layers. A new node averages
// the extrapolations along its axis directions, or the plain mean of filled
// 4-neighbours when no line of two is available. With clamp, filled values are
// limited to the interior range.
ScalarField extension_fill(const ScalarField& f, int layers, Extrapolation mode = Extrapolation::quadratic,
                           bool clamp = false);

// Ghost values for non-interior nodes within Chebyshev distance `reach` of the
// interior: each is the value at the node of a least-squares quadratic fitted
// to interior nodes within distance d_min + 2h (d_min: nearest interior node).
// The weights depend only on the domain and are computed once.
class GhostFill {
 public:
  GhostFill(DomainPtr d, int reach = 3);
  ScalarField apply(const ScalarField& f) const;
  std::size_t size() const { return target_.size(); }
  // Largest sum of squared weights over ghosts, the noise gain of the fill.
  double max_noise_gain() const;

 private:
  DomainPtr d_;
  std::vector<std::size_t> target_;
  std::vector<std::size_t> offset_;  // CSR rows into src_/w_
  std::vector<std::size_t> src_;
  std::vector<double> w_;
};

}  // namespace arnold
