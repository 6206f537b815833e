#include <cstdio>
#include <cstdlib>
#include <string_view>

#include "pa/simd/kernels.hpp"

namespace pa::simd {

bool avx2_compiled() {
#ifdef PA_HAVE_AVX2_BUILD
  return true;
#else
  return false;
#endif
}

bool avx2_supported() {
#ifdef PA_HAVE_AVX2_BUILD
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#ifndef PA_HAVE_AVX2_BUILD
const KernelTable& avx2_kernels() { return scalar_kernels(); }
#endif

namespace {

const KernelTable& select_kernels() {
  const char* env = std::getenv("PA_SIMD");
  const std::string_view mode = env != nullptr ? env : "auto";
  if (mode == "scalar") return scalar_kernels();
  if (mode == "avx2") {
    if (avx2_supported()) return avx2_kernels();
    std::fprintf(stderr, "PA_SIMD=avx2 requested but unavailable; using scalar kernels\n");
    return scalar_kernels();
  }
  if (mode != "auto") {
    std::fprintf(stderr, "unknown PA_SIMD value '%s'; using auto\n", env);
  }
  return avx2_supported() ? avx2_kernels() : scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

const char* active_backend_name() { return active_kernels().name; }

}  // namespace pa::simd
