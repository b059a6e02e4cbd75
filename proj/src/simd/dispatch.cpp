#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "tbg/simd/kernels.hpp"

namespace tbg::simd {

namespace {

bool cpu_has_avx2() {
#if defined(TBG_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("TBG_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && available(Backend::AVX2)) return Backend::AVX2;
  }
  return available(Backend::AVX2) ? Backend::AVX2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

std::string to_string(Backend b) { return b == Backend::AVX2 ? "avx2" : "scalar"; }

bool available(Backend b) {
  if (b == Backend::Scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

const KernelTable& table(Backend b) {
  if (!available(b)) throw std::runtime_error("SIMD backend " + to_string(b) + " is not available");
#if defined(TBG_HAVE_AVX2_KERNELS)
  if (b == Backend::AVX2) return avx2::table;
#endif
  return scalar::table;
}

const KernelTable& kernels() { return table(current().load(std::memory_order_relaxed)); }

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!available(b)) throw std::runtime_error("SIMD backend " + to_string(b) + " is not available");
  current().store(b, std::memory_order_relaxed);
}

}  // namespace tbg::simd
