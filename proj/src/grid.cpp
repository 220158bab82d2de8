#include "arnold/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace arnold {

namespace {

bool on_frame(std::size_t p, std::size_t nx, std::size_t ny) {
  const std::size_t i = p % nx;
  const std::size_t j = p / nx;
  return i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
}

// Calls f(q) for each in-range 4-neighbour of p.
template <class F>
void for_each_4(std::size_t p, std::size_t nx, std::size_t ny, F&& f) {
  const std::size_t i = p % nx;
  const std::size_t j = p / nx;
  if (i > 0) f(p - 1);
  if (i + 1 < nx) f(p + 1);
  if (j > 0) f(p - nx);
  if (j + 1 < ny) f(p + nx);
}

template <class F>
void for_each_8(std::size_t p, std::size_t nx, std::size_t ny, F&& f) {
  const long i = static_cast<long>(p % nx);
  const long j = static_cast<long>(p / nx);
  for (long dj = -1; dj <= 1; ++dj) {
    for (long di = -1; di <= 1; ++di) {
      if (di == 0 && dj == 0) continue;
      const long a = i + di;
      const long b = j + dj;
      if (a < 0 || b < 0 || a >= static_cast<long>(nx) || b >= static_cast<long>(ny)) continue;
      f(static_cast<std::size_t>(b) * nx + static_cast<std::size_t>(a));
    }
  }
}

// Flood fill from seed over nodes accepted by `in`; returns visited nodes in BFS order.
template <class In, class Nbr>
std::vector<std::size_t> flood(std::size_t seed, std::vector<int>& mark, int label, In&& in, Nbr&& nbr) {
  std::vector<std::size_t> out;
  std::deque<std::size_t> queue{seed};
  mark[seed] = label;
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    out.push_back(p);
    nbr(p, [&](std::size_t q) {
      if (mark[q] < 0 && in(q)) {
        mark[q] = label;
        queue.push_back(q);
      }
    });
  }
  return out;
}

// Interior/boundary/exterior codes for a fluid mask, holes numbered in scan order.
std::vector<std::uint8_t> label_codes(std::size_t nx, std::size_t ny, const std::vector<bool>& mask) {
  const std::size_t n = nx * ny;
  if (mask.size() != n) throw DomainError("mask size does not match grid");
  std::vector<std::uint8_t> codes(n, kExteriorCode);
  std::size_t n_int = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (mask[p] && !on_frame(p, nx, ny)) {
      codes[p] = kInteriorCode;
      ++n_int;
    }
  }
  if (n_int == 0) throw DomainError("mask has no interior nodes");

  std::vector<int> region(n, -1);
  auto nbr8 = [&](std::size_t p, auto&& f) { for_each_8(p, nx, ny, f); };
  auto non_int = [&](std::size_t q) { return codes[q] != kInteriorCode; };
  flood(0, region, 0, non_int, nbr8);
  int next = 1;
  for (std::size_t p = 0; p < n; ++p) {
    if (region[p] < 0 && codes[p] != kInteriorCode) flood(p, region, next++, non_int, nbr8);
  }
  if (next - 1 > 250) throw DomainError("too many holes");

  for (std::size_t p = 0; p < n; ++p) {
    if (codes[p] == kInteriorCode) continue;
    bool touches = false;
    for_each_4(p, nx, ny, [&](std::size_t q) { touches = touches || codes[q] == kInteriorCode; });
    if (touches) codes[p] = boundary_code(region[p]);
  }
  // Holes without boundary nodes cannot occur for a connected interior, but
  // renumber defensively so component labels stay contiguous.
  std::vector<int> used(static_cast<std::size_t>(next), -1);
  int count = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (codes[p] >= 2) {
      const int r = codes[p] - 2;
      if (used[static_cast<std::size_t>(r)] < 0) used[static_cast<std::size_t>(r)] = r == 0 ? 0 : -2;
    }
  }
  if (used[0] < 0) throw DomainError("outer boundary is empty");
  count = 1;
  for (int r = 1; r < next; ++r) {
    if (used[static_cast<std::size_t>(r)] == -2) used[static_cast<std::size_t>(r)] = count++;
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (codes[p] >= 2) codes[p] = boundary_code(used[static_cast<std::size_t>(codes[p] - 2)]);
  }
  return codes;
}

}  // namespace

GridDomain::GridDomain(std::size_t nx, std::size_t ny, double h, double x0, double y0,
                       std::vector<std::uint8_t> codes, std::vector<double> east,
                       std::vector<double> north)
    : nx_(nx), ny_(ny), h_(h), x0_(x0), y0_(y0), codes_(std::move(codes)),
      east_(std::move(east)), north_(std::move(north)) {
  if (nx_ < 3 || ny_ < 3) throw DomainError("grid must have at least 3x3 nodes");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw DomainError("grid spacing must be positive");
  if (codes_.size() != size()) throw DomainError("cell code array has wrong length");
  validate_and_index();
}

void GridDomain::validate_and_index() {
  const std::size_t n = size();
  int max_k = -1;
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint8_t c = codes_[p];
    if (c >= 2) max_k = std::max(max_k, c - 2);
    if (c == kInteriorCode && on_frame(p, nx_, ny_)) throw DomainError("interior node on grid frame");
  }
  if (max_k < 0) throw DomainError("domain has no boundary");
  n_components_ = max_k + 1;

  interior_.clear();
  boundary_.assign(static_cast<std::size_t>(n_components_), {});
  non_exterior_ = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (codes_[p] == kInteriorCode) interior_.push_back(p);
    if (codes_[p] >= 2) boundary_[static_cast<std::size_t>(codes_[p] - 2)].push_back(p);
    if (codes_[p] != kExteriorCode) ++non_exterior_;
  }
  if (interior_.empty()) throw DomainError("domain has no interior nodes");
  for (int k = 0; k < n_components_; ++k) {
    if (boundary_[static_cast<std::size_t>(k)].empty())
      throw DomainError("boundary component " + std::to_string(k) + " is empty");
  }

  for (std::size_t p : interior_) {
    for_each_4(p, nx_, ny_, [&](std::size_t q) {
      if (codes_[q] == kExteriorCode) throw DomainError("interior node adjacent to exterior node");
    });
  }

  // Interior connectivity.
  {
    std::vector<int> mark(n, -1);
    auto nbr4 = [&](std::size_t p, auto&& f) { for_each_4(p, nx_, ny_, f); };
    auto seen = flood(interior_.front(), mark, 0, [&](std::size_t q) { return codes_[q] == kInteriorCode; }, nbr4);
    if (seen.size() != interior_.size()) throw DomainError("interior is disconnected");
  }

  // Each boundary component 8-connected; each lies in its own non-interior region.
  {
    auto nbr8 = [&](std::size_t p, auto&& f) { for_each_8(p, nx_, ny_, f); };
    for (int k = 0; k < n_components_; ++k) {
      const auto& nodes = boundary_[static_cast<std::size_t>(k)];
      std::vector<int> mark(n, -1);
      const std::uint8_t c = boundary_code(k);
      auto seen = flood(nodes.front(), mark, 0, [&](std::size_t q) { return codes_[q] == c; }, nbr8);
      if (seen.size() != nodes.size())
        throw DomainError("boundary component " + std::to_string(k) + " is not 8-connected (nested or ambiguous)");
    }
    std::vector<int> region(n, -1);
    hole_regions_.assign(static_cast<std::size_t>(n_components_), {});
    int next = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (region[p] >= 0 || codes_[p] == kInteriorCode) continue;
      auto nodes = flood(p, region, next++, [&](std::size_t q) { return codes_[q] != kInteriorCode; }, nbr8);
      int comp = -1;
      bool frame = false;
      for (std::size_t q : nodes) {
        frame = frame || on_frame(q, nx_, ny_);
        const int k = component(q);
        if (k < 0) continue;
        if (comp >= 0 && comp != k) throw DomainError("two boundary components share a region");
        comp = k;
      }
      if (comp < 0) continue;
      if (comp == 0 && !frame) throw DomainError("component 0 is not the outer boundary");
      if (comp > 0 && frame) throw DomainError("inner component touches the grid frame");
      if (comp > 0) {
        if (!hole_regions_[static_cast<std::size_t>(comp)].empty())
          throw DomainError("boundary component split across regions");
        hole_regions_[static_cast<std::size_t>(comp)] = std::move(nodes);
      }
    }
  }

  // Conductances.
  auto valid_edge = [&](std::size_t p, std::size_t q) {
    const bool ext = codes_[p] == kExteriorCode || codes_[q] == kExteriorCode;
    const bool has_int = codes_[p] == kInteriorCode || codes_[q] == kInteriorCode;
    return !ext && has_int;
  };
  const bool given = !east_.empty() || !north_.empty();
  if (given && (east_.size() != n || north_.size() != n)) throw DomainError("edge weight arrays have wrong length");
  if (!given) {
    east_.assign(n, 0.0);
    north_.assign(n, 0.0);
  }
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = p % nx_;
    const std::size_t j = p / nx_;
    if (i + 1 < nx_ && valid_edge(p, p + 1)) {
      if (!given) east_[p] = 1.0;
      if (!(east_[p] > 0.0) || !std::isfinite(east_[p])) throw DomainError("non-positive edge weight");
    } else {
      east_[p] = 0.0;
    }
    if (j + 1 < ny_ && valid_edge(p, p + nx_)) {
      if (!given) north_[p] = 1.0;
      if (!(north_[p] > 0.0) || !std::isfinite(north_[p])) throw DomainError("non-positive edge weight");
    } else {
      north_[p] = 0.0;
    }
  }
  diag_.assign(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    if (east_[p] != 0.0) {
      diag_[p] += east_[p];
      diag_[p + 1] += east_[p];
    }
    if (north_[p] != 0.0) {
      diag_[p] += north_[p];
      diag_[p + nx_] += north_[p];
    }
  }

  mass_.assign(n, 0.0);
  dof_weight_.assign(n, 0.0);
  for (std::size_t p : interior_) {
    mass_[p] = h_ * h_;
    dof_weight_[p] = 1.0;
  }
  for (int k = 1; k < n_components_; ++k) {
    const auto& nodes = boundary_[static_cast<std::size_t>(k)];
    for (std::size_t q : nodes) dof_weight_[q] = 1.0 / static_cast<double>(nodes.size());
  }

  edges_.assign(static_cast<std::size_t>(n_components_), {});
  for (std::size_t p : interior_) {
    auto add = [&](std::size_t q, double w) {
      if (codes_[q] >= 2) edges_[static_cast<std::size_t>(codes_[q] - 2)].push_back({p, q, w});
    };
    add(p + 1, east_[p]);
    add(p - 1, east_[p - 1]);
    add(p + nx_, north_[p]);
    add(p - nx_, north_[p - nx_]);
  }
}

ScalarField::ScalarField(DomainPtr d, double fill) : domain_(std::move(d)) {
  if (!domain_) throw std::invalid_argument("null domain");
  v_.assign(domain_->size(), fill);
  zero_exterior();
}

ScalarField::ScalarField(DomainPtr d, std::vector<double> values) : domain_(std::move(d)), v_(std::move(values)) {
  if (!domain_) throw std::invalid_argument("null domain");
  if (v_.size() != domain_->size()) throw std::invalid_argument("field length does not match domain");
  zero_exterior();
}

void ScalarField::zero_exterior() {
  const auto& c = domain_->codes();
  for (std::size_t p = 0; p < v_.size(); ++p)
    if (c[p] == kExteriorCode) v_[p] = 0.0;
}

bool ScalarField::finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  kernels::active().axpy(1.0, o.data(), v_.data(), v_.size());
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  kernels::active().axpy(-1.0, o.data(), v_.data(), v_.size());
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

DomainPtr label_components(std::size_t nx, std::size_t ny, double h, double x0, double y0,
                           const std::vector<bool>& mask) {
  return std::make_shared<GridDomain>(nx, ny, h, x0, y0, label_codes(nx, ny, mask));
}

DomainPtr build_annulus(double r_in, double r_out, double n_cells_per_unit) {
  if (!(r_in > 0.0) || !(r_out > r_in)) throw DomainError("annulus requires 0 < r_in < r_out");
  if (!(n_cells_per_unit > 0.0)) throw DomainError("resolution must be positive");
  if ((r_out - r_in) * n_cells_per_unit < 8.0 - 1e-12)
    throw DomainError("resolution too coarse: fewer than 8 cells across the gap");
  const double h = 1.0 / n_cells_per_unit;
  const auto half = static_cast<std::size_t>(std::ceil(r_out / h - 1e-9)) + 2;
  const std::size_t nx = 2 * half + 1;
  const double x0 = -static_cast<double>(half) * h;
  std::vector<bool> mask(nx * nx);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    const double x = x0 + static_cast<double>(p % nx) * h;
    const double y = x0 + static_cast<double>(p / nx) * h;
    const double r = std::hypot(x, y);
    mask[p] = r > r_in && r < r_out;
  }
  auto codes = label_codes(nx, nx, mask);

  // Fraction along p->q at which the segment leaves the open annulus.
  auto crossing = [&](std::size_t p, std::size_t q) {
    const double px = x0 + static_cast<double>(p % nx) * h;
    const double py = x0 + static_cast<double>(p / nx) * h;
    const double dx = x0 + static_cast<double>(q % nx) * h - px;
    const double dy = x0 + static_cast<double>(q / nx) * h - py;
    const double qr = std::hypot(px + dx, py + dy);
    const bool outer = qr >= r_out;
    const double R = outer ? r_out : r_in;
    const double a = dx * dx + dy * dy;
    const double b = 2.0 * (px * dx + py * dy);
    const double c = px * px + py * py - R * R;
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    const double t = outer ? (-b + std::sqrt(disc)) / (2.0 * a) : (-b - std::sqrt(disc)) / (2.0 * a);
    return std::clamp(t, 1e-3, 1.0);
  };
  std::vector<double> east(nx * nx, 0.0), north(nx * nx, 0.0);
  for (std::size_t p = 0; p < codes.size(); ++p) {
    const std::size_t i = p % nx;
    const std::size_t j = p / nx;
    auto weight = [&](std::size_t q) -> double {
      const std::uint8_t a = codes[p];
      const std::uint8_t b = codes[q];
      if (a == kExteriorCode || b == kExteriorCode) return 0.0;
      if (a == kInteriorCode && b == kInteriorCode) return 1.0;
      if (a == kInteriorCode) return 1.0 / crossing(p, q);
      if (b == kInteriorCode) return 1.0 / crossing(q, p);
      return 0.0;
    };
    if (i + 1 < nx) east[p] = weight(p + 1);
    if (j + 1 < nx) north[p] = weight(p + nx);
  }
  auto d = std::make_shared<GridDomain>(nx, nx, h, x0, x0, std::move(codes), std::move(east), std::move(north));
  if (d->n_components() != 2) throw DomainError("annulus labeling did not produce two boundary components");
  d->set_geometry({r_in, r_out});
  return d;
}

DomainPtr build_rect_with_holes(double width, double height, double h, const std::vector<RectHole>& holes) {
  if (!(width > 0.0) || !(height > 0.0) || !(h > 0.0)) throw DomainError("rectangle dimensions must be positive");
  const auto ni = static_cast<std::size_t>(std::llround(width / h));
  const auto nj = static_cast<std::size_t>(std::llround(height / h));
  const std::size_t nx = ni + 3;
  const std::size_t ny = nj + 3;
  const double eps = 1e-9 * h;
  std::vector<bool> mask(nx * ny);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    const double x = -h + static_cast<double>(p % nx) * h;
    const double y = -h + static_cast<double>(p / nx) * h;
    bool fluid = x > eps && x < width - eps && y > eps && y < height - eps;
    for (const auto& r : holes) {
      if (x >= r.x_lo - eps && x <= r.x_hi + eps && y >= r.y_lo - eps && y <= r.y_hi + eps) fluid = false;
    }
    mask[p] = fluid;
  }
  return label_components(nx, ny, h, -h, -h, mask);
}

DomainPtr build_tiny_ring(double h) {
  std::vector<std::uint8_t> codes(25, kInteriorCode);
  for (std::size_t p = 0; p < 25; ++p)
    if (on_frame(p, 5, 5)) codes[p] = boundary_code(0);
  codes[12] = boundary_code(1);
  return std::make_shared<GridDomain>(5, 5, h, -2.0 * h, -2.0 * h, std::move(codes));
}

double integrate(const ScalarField& f) {
  const auto& d = f.grid();
  double s = 0.0;
  for (std::size_t p : d.interior_nodes()) s += f[p];
  return s * d.h() * d.h();
}

double inner(const ScalarField& a, const ScalarField& b) {
  return kernels::active().wdot(a.grid().mass().data(), a.data(), b.data(), a.size());
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  if (p == 2.0) return l2_norm(f);
  const auto& d = f.grid();
  double s = 0.0;
  for (std::size_t q : d.interior_nodes()) s += std::pow(std::abs(f[q]), p);
  return std::pow(s * d.h() * d.h(), 1.0 / p);
}

double max_abs_interior(const ScalarField& f) {
  double m = 0.0;
  for (std::size_t p : f.grid().interior_nodes()) m = std::max(m, std::abs(f[p]));
  return m;
}

double boundary_flux(const ScalarField& u, int k) {
  const auto& d = u.grid();
  if (k < 0 || k >= d.n_components()) throw std::out_of_range("boundary component index out of range");
  double s = 0.0;
  for (const auto& e : d.boundary_edges(k)) s += e.weight * (u[e.outer] - u[e.inner]);
  return s;
}

ScalarField neg_laplacian(const ScalarField& u) {
  const auto& d = u.grid();
  std::vector<double> y(d.size());
  kernels::active().apply(d.stencil(), u.data(), y.data());
  ScalarField out(u.domain());
  const double s = 1.0 / (d.h() * d.h());
  for (std::size_t p : d.interior_nodes()) out[p] = y[p] * s;
  return out;
}

double dirichlet_form(const ScalarField& u, const ScalarField& v) {
  return kernels::active().edge_form(u.grid().stencil(), u.data(), v.data());
}

}  // namespace arnold
