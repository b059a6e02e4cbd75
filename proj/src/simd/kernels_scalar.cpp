#include <cmath>

#include "tbg/simd/kernels.hpp"

namespace tbg::simd::scalar {

namespace {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// hi/lo accumulator for one real component
struct Acc {
  double s = 0.0;
  double c = 0.0;
  void add(double v) {
    double e;
    two_sum(s, v, s, e);
    c += e;
  }
  void add_product(double a, double b) {
    double p, e;
    two_prod(a, b, p, e);
    add(p);
    c += e;
  }
};

void horner_step(cplx* acc, const cplx* w, cplx c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = acc[i].real(), ai = acc[i].imag();
    const double wr = w[i].real(), wi = w[i].imag();
    acc[i] = cplx(ar * wr - ai * wi + c.real(), ar * wi + ai * wr + c.imag());
  }
}

void horner_accumulate(cplx* acc, const cplx* w, const cplx* add, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = acc[i].real(), ai = acc[i].imag();
    const double wr = w[i].real(), wi = w[i].imag();
    acc[i] = cplx(ar * wr - ai * wi + add[i].real(), ar * wi + ai * wr + add[i].imag());
  }
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    sr += ar * br + ai * bi;
    si += ar * bi - ai * br;
  }
  return {sr, si};
}

DDComplex dot_compensated(const cplx* a, const cplx* b, std::size_t n) {
  Acc re, im;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re.add_product(ar, br);
    re.add_product(-ai, bi);
    im.add_product(ar, bi);
    im.add_product(ai, br);
  }
  double rh, rl, ih, il;
  two_sum(re.s, re.c, rh, rl);
  two_sum(im.s, im.c, ih, il);
  return {cplx(rh, ih), cplx(rl, il)};
}

}  // namespace

const KernelTable table{horner_step, horner_accumulate, dot_conj, dot_compensated};

}  // namespace tbg::simd::scalar
