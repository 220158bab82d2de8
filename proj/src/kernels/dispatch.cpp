#include <cstdlib>
#include <stdexcept>
#include <string>

#include "arnold/kernels.hpp"

namespace arnold::kernels {

namespace detail {
#ifndef ARNOLD_HAVE_AVX2
const Table* avx2_table() { return nullptr; }
#endif
#ifndef ARNOLD_HAVE_NEON
const Table* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(ARNOLD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& select() {
  if (const char* forced = std::getenv("ARNOLD_STAB_KERNELS")) {
    const std::string want(forced);
    if (want == "scalar") return detail::scalar_table();
    if (want == "avx2" && supported(Isa::avx2)) return *detail::avx2_table();
    if (want == "neon" && supported(Isa::neon)) return *detail::neon_table();
  }
  if (supported(Isa::avx2)) return *detail::avx2_table();
  if (supported(Isa::neon)) return *detail::neon_table();
  return detail::scalar_table();
}

}  // namespace

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return detail::avx2_table() != nullptr && cpu_has_avx2();
    case Isa::neon:
      return detail::neon_table() != nullptr;
  }
  return false;
}

const Table& table(Isa isa) {
  if (!supported(isa)) throw std::invalid_argument("kernel table not available: " + std::string(name(isa)));
  switch (isa) {
    case Isa::avx2:
      return *detail::avx2_table();
    case Isa::neon:
      return *detail::neon_table();
    case Isa::scalar:
      break;
  }
  return detail::scalar_table();
}

const Table& active() {
  static const Table& t = select();
  return t;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace arnold::kernels
