#pragma once

// Masked Cartesian grids standing in for a multiply-connected planar domain.
//
// Nodes are stored row-major, p = j*nx + i, at (x0 + i*h, y0 + j*h). Each node
// is EXTERIOR, INTERIOR, or BOUNDARY(k) for k = 0..N; component 0 is the outer
// boundary. Edges carry conductances: 1 between grid neighbours by default, and
// 1/s on an interior-to-boundary edge when the true curve cuts the edge at the
// fraction s (only for analytically described domains such as the annulus).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "arnold/kernels.hpp"

namespace arnold {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { exterior = 0, interior = 1, boundary = 2 };

inline constexpr std::uint8_t kExteriorCode = 0;
inline constexpr std::uint8_t kInteriorCode = 1;
inline constexpr std::uint8_t boundary_code(int k) { return static_cast<std::uint8_t>(2 + k); }

struct BoundaryEdge {
  std::size_t inner;  // interior endpoint
  std::size_t outer;  // boundary endpoint
  double weight;
};

struct AnnulusGeometry {
  double r_in;
  double r_out;
};

class GridDomain {
 public:
  // codes: one per node (0 exterior, 1 interior, 2+k boundary k).
  // east/north: optional conductances; unit weights are derived when empty.
  GridDomain(std::size_t nx, std::size_t ny, double h, double x0, double y0,
             std::vector<std::uint8_t> codes, std::vector<double> east = {},
             std::vector<double> north = {});

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double h() const { return h_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double x(std::size_t p) const { return x0_ + static_cast<double>(p % nx_) * h_; }
  double y(std::size_t p) const { return y0_ + static_cast<double>(p / nx_) * h_; }

  int n_components() const { return n_components_; }
  int n_holes() const { return n_components_ - 1; }

  std::uint8_t code(std::size_t p) const { return codes_[p]; }
  const std::vector<std::uint8_t>& codes() const { return codes_; }
  bool is_interior(std::size_t p) const { return codes_[p] == kInteriorCode; }
  bool is_exterior(std::size_t p) const { return codes_[p] == kExteriorCode; }
  bool is_boundary(std::size_t p) const { return codes_[p] >= 2; }
  int component(std::size_t p) const { return codes_[p] >= 2 ? codes_[p] - 2 : -1; }

  const std::vector<std::size_t>& interior_nodes() const { return interior_; }
  const std::vector<std::size_t>& boundary_nodes(int k) const { return boundary_.at(k); }
  const std::vector<BoundaryEdge>& boundary_edges(int k) const { return edges_.at(k); }
  // All non-interior nodes in the 8-connected region enclosed by hole k (k >= 1).
  const std::vector<std::size_t>& hole_region(int k) const { return hole_regions_.at(k); }
  std::size_t non_exterior_count() const { return non_exterior_; }

  const std::vector<double>& east() const { return east_; }
  const std::vector<double>& north() const { return north_; }
  const std::vector<double>& diag() const { return diag_; }
  // h^2 on interior nodes, 0 elsewhere.
  const std::vector<double>& mass() const { return mass_; }
  // Weights of the dof inner product: 1 interior, 1/|Gamma_k| on Gamma_k (k >= 1).
  const std::vector<double>& dof_weight() const { return dof_weight_; }
  kernels::Stencil stencil() const { return {nx_, ny_, diag_.data(), east_.data(), north_.data()}; }

  double area() const { return h_ * h_ * static_cast<double>(interior_.size()); }

  void set_geometry(AnnulusGeometry g) { geometry_ = g; }
  const std::optional<AnnulusGeometry>& geometry() const { return geometry_; }

 private:
  void validate_and_index();

  std::size_t nx_, ny_;
  double h_, x0_, y0_;
  std::vector<std::uint8_t> codes_;
  std::vector<double> east_, north_, diag_, mass_, dof_weight_;
  int n_components_ = 0;
  std::size_t non_exterior_ = 0;
  std::vector<std::size_t> interior_;
  std::vector<std::vector<std::size_t>> boundary_;
  std::vector<std::vector<BoundaryEdge>> edges_;
  std::vector<std::vector<std::size_t>> hole_regions_;
  std::optional<AnnulusGeometry> geometry_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

// Node-valued function. Exterior entries are zero unless a caller fills them
// (extension fills for interpolation).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(DomainPtr d, double fill = 0.0);
  ScalarField(DomainPtr d, std::vector<double> values);

  const DomainPtr& domain() const { return domain_; }
  const GridDomain& grid() const { return *domain_; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t p) { return v_[p]; }
  double operator[](std::size_t p) const { return v_[p]; }

  void zero_exterior();
  bool finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

 private:
  DomainPtr domain_;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

using CirculationVector = std::vector<double>;

// Builders.
DomainPtr build_annulus(double r_in, double r_out, double n_cells_per_unit);
// mask[p] = true marks a fluid node. Frame nodes never become interior.
DomainPtr label_components(std::size_t nx, std::size_t ny, double h, double x0, double y0,
                           const std::vector<bool>& mask);
// Rectangle [0,W]x[0,H] at spacing h with axis-aligned rectangular holes.
struct RectHole {
  double x_lo, y_lo, x_hi, y_hi;
};
DomainPtr build_rect_with_holes(double width, double height, double h, const std::vector<RectHole>& holes);
// 5x5 nodes: frame is Gamma_0, 8-node interior ring, the centre node is Gamma_1.
DomainPtr build_tiny_ring(double h = 0.25);

// Discrete calculus.
double integrate(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);  // integral of a*b
double l2_norm(const ScalarField& f);
double lp_norm(const ScalarField& f, double p);
double max_abs_interior(const ScalarField& f);
// Sum over edges p-q with q in Gamma_k of w*(u_q - u_p); positive = outward from D.
double boundary_flux(const ScalarField& u, int k);
// -Delta_h u on interior nodes, zero elsewhere.
ScalarField neg_laplacian(const ScalarField& u);
// Sum over edges of w*(u_q-u_p)*(v_q-v_p), the discrete Dirichlet form.
double dirichlet_form(const ScalarField& u, const ScalarField& v);

}  // namespace arnold
