#pragma once

// Data-parallel inner loops shared by the grid solvers.
//
// Every routine has a portable scalar reference implementation; AVX2+FMA
// (x86-64) and NEON (aarch64) variants are compiled alongside it and one
// table is picked at first use. Set ARNOLD_STAB_KERNELS=scalar|avx2|neon to
// force a particular table.

#include <cstddef>
#include <string_view>

namespace arnold::kernels {

enum class Isa { scalar, avx2, neon };

// Weighted five-point operator on a row-major nx*ny node array.
// east[p] is the conductance of edge (p, p+1), north[p] that of (p, p+nx);
// both are zero where the edge does not exist, so the last column of east
// and the last row of north are always zero.
struct Stencil {
  std::size_t nx = 0;
  std::size_t ny = 0;
  const double* diag = nullptr;
  const double* east = nullptr;
  const double* north = nullptr;
};

struct Table {
  Isa isa = Isa::scalar;
  // sum x*y
  double (*dot)(const double* x, const double* y, std::size_t n) = nullptr;
  // sum w*x*y
  double (*wdot)(const double* w, const double* x, const double* y, std::size_t n) = nullptr;
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n) = nullptr;
  // y = x + a*y
  void (*xpay)(const double* x, double a, double* y, std::size_t n) = nullptr;
  // y = m*x
  void (*mul)(const double* m, const double* x, double* y, std::size_t n) = nullptr;
  // y += d*x
  void (*fma_diag)(const double* d, const double* x, double* y, std::size_t n) = nullptr;
  // y = K x on rows 1..ny-2; rows 0 and ny-1 of y are set to zero.
  void (*apply)(const Stencil& s, const double* x, double* y) = nullptr;
  // sum over edges of w * (u_q - u_p) * (v_q - v_p)
  double (*edge_form)(const Stencil& s, const double* u, const double* v) = nullptr;
};

bool supported(Isa isa);
const Table& table(Isa isa);  // throws std::invalid_argument if unsupported
const Table& active();
std::string_view name(Isa isa);

namespace detail {
const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in
const Table* neon_table();
}  // namespace detail

}  // namespace arnold::kernels
