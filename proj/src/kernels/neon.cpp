#include <arm_neon.h>

#include "arnold/kernels.hpp"

namespace arnold::kernels {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
    a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    a0 = vfmaq_f64(a0, vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i)), vld1q_f64(y + i));
  double s = vaddvq_f64(a0);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(x + i), va, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

void mul(const double* m, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(m + i), vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = m[i] * x[i];
}

void fma_diag(const double* d, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), vld1q_f64(d + i), vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += d[i] * x[i];
}

void apply(const Stencil& s, const double* x, double* y) {
  const std::size_t nx = s.nx;
  const std::size_t n = s.nx * s.ny;
  for (std::size_t p = 0; p < nx; ++p) y[p] = 0.0;
  for (std::size_t p = n - nx; p < n; ++p) y[p] = 0.0;
  std::size_t p = nx;
  const std::size_t end = n - nx;
  for (; p + 2 <= end; p += 2) {
    float64x2_t acc = vmulq_f64(vld1q_f64(s.diag + p), vld1q_f64(x + p));
    acc = vfmsq_f64(acc, vld1q_f64(s.east + p), vld1q_f64(x + p + 1));
    acc = vfmsq_f64(acc, vld1q_f64(s.east + p - 1), vld1q_f64(x + p - 1));
    acc = vfmsq_f64(acc, vld1q_f64(s.north + p), vld1q_f64(x + p + nx));
    acc = vfmsq_f64(acc, vld1q_f64(s.north + p - nx), vld1q_f64(x + p - nx));
    vst1q_f64(y + p, acc);
  }
  for (; p < end; ++p) {
    y[p] = s.diag[p] * x[p] - s.east[p] * x[p + 1] - s.east[p - 1] * x[p - 1] -
           s.north[p] * x[p + nx] - s.north[p - nx] * x[p - nx];
  }
}

double edge_form(const Stencil& s, const double* u, const double* v) {
  const std::size_t nx = s.nx;
  const std::size_t n = s.nx * s.ny;
  float64x2_t a0 = vdupq_n_f64(0.0);
  std::size_t p = 0;
  for (; p + 3 <= n; p += 2) {
    float64x2_t du = vsubq_f64(vld1q_f64(u + p + 1), vld1q_f64(u + p));
    float64x2_t dv = vsubq_f64(vld1q_f64(v + p + 1), vld1q_f64(v + p));
    a0 = vfmaq_f64(a0, vmulq_f64(vld1q_f64(s.east + p), du), dv);
  }
  double acc = 0.0;
  for (; p + 1 < n; ++p) acc += s.east[p] * (u[p + 1] - u[p]) * (v[p + 1] - v[p]);
  p = 0;
  for (; p + 2 + nx <= n; p += 2) {
    float64x2_t du = vsubq_f64(vld1q_f64(u + p + nx), vld1q_f64(u + p));
    float64x2_t dv = vsubq_f64(vld1q_f64(v + p + nx), vld1q_f64(v + p));
    a0 = vfmaq_f64(a0, vmulq_f64(vld1q_f64(s.north + p), du), dv);
  }
  for (; p + nx < n; ++p) acc += s.north[p] * (u[p + nx] - u[p]) * (v[p + nx] - v[p]);
  return acc + vaddvq_f64(a0);
}

}  // namespace

namespace detail {
const Table* neon_table() {
  static const Table t{Isa::neon, dot, wdot, axpy, xpay, mul, fma_diag, apply, edge_form};
  return &t;
}
}  // namespace detail

}  // namespace arnold::kernels
