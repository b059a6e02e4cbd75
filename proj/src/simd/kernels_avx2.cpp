#include <immintrin.h>

#include <cmath>

#include "tbg/simd/kernels.hpp"

namespace tbg::simd::avx2 {

namespace {

// Two interleaved complex numbers per register: [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline void two_sum(__m256d a, __m256d b, __m256d& s, __m256d& e) {
  s = _mm256_add_pd(a, b);
  const __m256d bb = _mm256_sub_pd(s, a);
  e = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bb)), _mm256_sub_pd(b, bb));
}

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

void horner_step(cplx* acc, const cplx* w, cplx c, std::size_t n) {
  const __m256d cc = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(acc + i, _mm256_add_pd(cmul(load2(acc + i), load2(w + i)), cc));
  for (; i < n; ++i) acc[i] = acc[i] * w[i] + c;
}

void horner_accumulate(cplx* acc, const cplx* w, const cplx* add, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(acc + i, _mm256_add_pd(cmul(load2(acc + i), load2(w + i)), load2(add + i)));
  for (; i < n; ++i) acc[i] = acc[i] * w[i] + add[i];
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  // conj(a) b = [ar br + ai bi, ar bi - ai br]
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    s1 = _mm256_fmadd_pd(va, vb, s1);                              // [ar br, ai bi]
    s2 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), s2);      // [ar bi, ai br]
  }
  alignas(32) double t1[4], t2[4];
  _mm256_store_pd(t1, s1);
  _mm256_store_pd(t2, s2);
  double sr = (t1[0] + t1[1]) + (t1[2] + t1[3]);
  double si = (t2[0] - t2[1]) + (t2[2] - t2[3]);
  for (; i < n; ++i) {
    sr += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    si += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {sr, si};
}

DDComplex dot_compensated(const cplx* a, const cplx* b, std::size_t n) {
  // a b = [ar br - ai bi, ar bi + ai br]; p1 = a * dup(br), p2 = swap(a) * dup(bi) * [-1, 1]
  const __m256d sign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d a_sw = _mm256_mul_pd(_mm256_permute_pd(va, 0x5), sign);
    const __m256d p1 = _mm256_mul_pd(va, b_re);
    const __m256d e1 = _mm256_fmsub_pd(va, b_re, p1);
    const __m256d p2 = _mm256_mul_pd(a_sw, b_im);
    const __m256d e2 = _mm256_fmsub_pd(a_sw, b_im, p2);
    __m256d e;
    two_sum(s, p1, s, e);
    c = _mm256_add_pd(c, _mm256_add_pd(e, e1));
    two_sum(s, p2, s, e);
    c = _mm256_add_pd(c, _mm256_add_pd(e, e2));
  }
  alignas(32) double ts[4], tc[4];
  _mm256_store_pd(ts, s);
  _mm256_store_pd(tc, c);
  double rs, re, is, ie;
  two_sum(ts[0], ts[2], rs, re);
  two_sum(ts[1], ts[3], is, ie);
  double rc = re + tc[0] + tc[2];
  double ic = ie + tc[1] + tc[3];
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    const double prod[4] = {ar * br, -ai * bi, ar * bi, ai * br};
    const double err[4] = {std::fma(ar, br, -prod[0]), std::fma(-ai, bi, -prod[1]), std::fma(ar, bi, -prod[2]),
                           std::fma(ai, br, -prod[3])};
    double e;
    two_sum(rs, prod[0], rs, e);
    rc += e + err[0];
    two_sum(rs, prod[1], rs, e);
    rc += e + err[1];
    two_sum(is, prod[2], is, e);
    ic += e + err[2];
    two_sum(is, prod[3], is, e);
    ic += e + err[3];
  }
  double rh, rl, ih, il;
  two_sum(rs, rc, rh, rl);
  two_sum(is, ic, ih, il);
  return {cplx(rh, ih), cplx(rl, il)};
}

}  // namespace

const KernelTable table{horner_step, horner_accumulate, dot_conj, dot_compensated};

}  // namespace tbg::simd::avx2
