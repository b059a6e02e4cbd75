#pragma once

// Inner loops shared by the Fourier-series samplers and the accurate
// Rayleigh-Ritz step.  Each kernel has a portable scalar reference and, on
// x86-64, an AVX2/FMA variant; the variant is chosen once at runtime.
//
// Set TBG_SIMD=scalar (or avx2) in the environment to force a backend.

#include <complex>
#include <cstddef>
#include <string>

namespace tbg::simd {

using cplx = std::complex<double>;

/// Complex double-double value hi + lo.
struct DDComplex {
  cplx hi;
  cplx lo;
  cplx value() const { return hi + lo; }
};

struct KernelTable {
  /// acc[i] = acc[i] * w[i] + c
  void (*horner_step)(cplx* acc, const cplx* w, cplx c, std::size_t n);
  /// acc[i] = acc[i] * w[i] + add[i]
  void (*horner_accumulate)(cplx* acc, const cplx* w, const cplx* add, std::size_t n);
  /// sum_i conj(a[i]) b[i]
  cplx (*dot_conj)(const cplx* a, const cplx* b, std::size_t n);
  /// sum_i a[i] b[i], accumulated with error-free products and sums
  DDComplex (*dot_compensated)(const cplx* a, const cplx* b, std::size_t n);
};

enum class Backend { Scalar, AVX2 };

std::string to_string(Backend b);

/// True when the backend was compiled in and the CPU supports it.
bool available(Backend b);

/// Table of a specific backend; throws if it is not available.
const KernelTable& table(Backend b);

/// The active table.
const KernelTable& kernels();
Backend active_backend();
/// Overrides the runtime choice (tests and benchmarks).
void set_backend(Backend b);

namespace scalar {
extern const KernelTable table;
}
#if defined(TBG_HAVE_AVX2_KERNELS)
namespace avx2 {
extern const KernelTable table;
}
#endif

}  // namespace tbg::simd
