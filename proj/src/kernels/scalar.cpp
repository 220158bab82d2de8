#include "arnold/kernels.hpp"

namespace arnold::kernels {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

void mul(const double* m, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = m[i] * x[i];
}

void fma_diag(const double* d, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += d[i] * x[i];
}

void apply(const Stencil& s, const double* x, double* y) {
  const std::size_t nx = s.nx;
  const std::size_t n = s.nx * s.ny;
  for (std::size_t p = 0; p < nx; ++p) y[p] = 0.0;
  for (std::size_t p = n - nx; p < n; ++p) y[p] = 0.0;
  for (std::size_t p = nx; p < n - nx; ++p) {
    y[p] = s.diag[p] * x[p] - s.east[p] * x[p + 1] - s.east[p - 1] * x[p - 1] -
           s.north[p] * x[p + nx] - s.north[p - nx] * x[p - nx];
  }
}

double edge_form(const Stencil& s, const double* u, const double* v) {
  const std::size_t nx = s.nx;
  const std::size_t n = s.nx * s.ny;
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p) acc += s.east[p] * (u[p + 1] - u[p]) * (v[p + 1] - v[p]);
  for (std::size_t p = 0; p + nx < n; ++p)
    acc += s.north[p] * (u[p + nx] - u[p]) * (v[p + nx] - v[p]);
  return acc;
}

}  // namespace

namespace detail {
const Table& scalar_table() {
  static const Table t{Isa::scalar, dot, wdot, axpy, xpay, mul, fma_diag, apply, edge_form};
  return t;
}
}  // namespace detail

}  // namespace arnold::kernels
