#include <immintrin.h>

#include "arnold/kernels.hpp"

namespace arnold::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d wx0 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    __m256d wx1 = _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(x + i + 4));
    a0 = _mm256_fmadd_pd(wx0, _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(wx1, _mm256_loadu_pd(y + i + 4), a1);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

void mul(const double* m, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(m + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = m[i] * x[i];
}

void fma_diag(const double* d, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(_mm256_loadu_pd(d + i), _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += d[i] * x[i];
}

void apply(const Stencil& s, const double* x, double* y) {
  const std::size_t nx = s.nx;
  const std::size_t n = s.nx * s.ny;
  for (std::size_t p = 0; p < nx; ++p) y[p] = 0.0;
  for (std::size_t p = n - nx; p < n; ++p) y[p] = 0.0;
  const double* d = s.diag;
  const double* e = s.east;
  const double* no = s.north;
  std::size_t p = nx;
  const std::size_t end = n - nx;
  for (; p + 4 <= end; p += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(d + p), _mm256_loadu_pd(x + p));
    acc = _mm256_fnmadd_pd(_mm256_loadu_pd(e + p), _mm256_loadu_pd(x + p + 1), acc);
    acc = _mm256_fnmadd_pd(_mm256_loadu_pd(e + p - 1), _mm256_loadu_pd(x + p - 1), acc);
    acc = _mm256_fnmadd_pd(_mm256_loadu_pd(no + p), _mm256_loadu_pd(x + p + nx), acc);
    acc = _mm256_fnmadd_pd(_mm256_loadu_pd(no + p - nx), _mm256_loadu_pd(x + p - nx), acc);
    _mm256_storeu_pd(y + p, acc);
  }
  for (; p < end; ++p) {
    y[p] = d[p] * x[p] - e[p] * x[p + 1] - e[p - 1] * x[p - 1] - no[p] * x[p + nx] -
           no[p - nx] * x[p - nx];
  }
}

double edge_form(const Stencil& s, const double* u, const double* v) {
  const std::size_t nx = s.nx;
  const std::size_t n = s.nx * s.ny;
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 4 + 1 <= n; p += 4) {
    __m256d du = _mm256_sub_pd(_mm256_loadu_pd(u + p + 1), _mm256_loadu_pd(u + p));
    __m256d dv = _mm256_sub_pd(_mm256_loadu_pd(v + p + 1), _mm256_loadu_pd(v + p));
    a0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(s.east + p), du), dv, a0);
  }
  double acc = 0.0;
  for (; p + 1 < n; ++p) acc += s.east[p] * (u[p + 1] - u[p]) * (v[p + 1] - v[p]);
  p = 0;
  for (; p + 4 + nx <= n; p += 4) {
    __m256d du = _mm256_sub_pd(_mm256_loadu_pd(u + p + nx), _mm256_loadu_pd(u + p));
    __m256d dv = _mm256_sub_pd(_mm256_loadu_pd(v + p + nx), _mm256_loadu_pd(v + p));
    a1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(s.north + p), du), dv, a1);
  }
  for (; p + nx < n; ++p) acc += s.north[p] * (u[p + nx] - u[p]) * (v[p + nx] - v[p]);
  return acc + hsum(_mm256_add_pd(a0, a1));
}

}  // namespace

namespace detail {
const Table* avx2_table() {
  static const Table t{Isa::avx2, dot, wdot, axpy, xpay, mul, fma_diag, apply, edge_form};
  return &t;
}
}  // namespace detail

}  // namespace arnold::kernels
