#include "tbg/torus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tbg/simd/kernels.hpp"

namespace tbg {

TorusGrid::TorusGrid(int G_, double shift_) : G(G_), shift(shift_) {
  if (G <= 0) throw std::invalid_argument("torus grid size must be positive");
}

cplx TorusGrid::point(int a, int b) const {
  return ((a + shift) + (b + shift) * omega) / static_cast<double>(G);
}

cplx TorusGrid::integrate(const std::vector<cplx>& values) const {
  cplx s = 0.0;
  for (cplx v : values) s += v;
  return s * weight();
}

double TorusGrid::integrate(const std::vector<double>& values) const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * weight();
}

cplx evaluate_series(const std::vector<cplx>& momenta, const Eigen::VectorXcd& coefficients, cplx z) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < momenta.size(); ++j)
    s += coefficients(static_cast<Eigen::Index>(j)) * std::polar(1.0, inner(z, momenta[j]));
  return s;
}

// With z = x + y omega and q = q0 + m b1 + n b2,
//   exp(i <z, q>) = exp(i <z, q0>) exp(2 pi i m y) exp(-2 pi i n x),
// so the grid values factor into two nested polynomial evaluations.
std::vector<cplx> sample_series(const std::vector<cplx>& momenta, const Eigen::VectorXcd& coefficients,
                                const TorusGrid& grid) {
  const int G = grid.G;
  std::vector<cplx> out(grid.size(), 0.0);
  if (momenta.empty()) return out;
  if (static_cast<std::size_t>(coefficients.size()) != momenta.size())
    throw std::invalid_argument("sample_series: coefficient count does not match momenta");

  const cplx q0 = momenta.front();
  std::vector<LatticeCoords> mn(momenta.size());
  std::int64_t mlo = 0, mhi = 0, nlo = 0, nhi = 0;
  for (std::size_t j = 0; j < momenta.size(); ++j) {
    auto c = in_dual_lattice(momenta[j] - q0);
    if (!c) throw std::invalid_argument("sample_series: momenta span more than one coset");
    mn[j] = *c;
    mlo = std::min(mlo, c->m);
    mhi = std::max(mhi, c->m);
    nlo = std::min(nlo, c->n);
    nhi = std::max(nhi, c->n);
  }
  const auto Mn = static_cast<std::size_t>(mhi - mlo + 1);
  const auto Nn = static_cast<std::size_t>(nhi - nlo + 1);
  std::vector<cplx> table(Mn * Nn, 0.0);
  for (std::size_t j = 0; j < momenta.size(); ++j)
    table[static_cast<std::size_t>(mn[j].m - mlo) * Nn + static_cast<std::size_t>(mn[j].n - nlo)] +=
        coefficients(static_cast<Eigen::Index>(j));

  std::vector<cplx> wx(G), wx_low(G), vy(G), vy_low(G);
  for (int a = 0; a < G; ++a) {
    const double x = (a + grid.shift) / G;
    wx[a] = std::polar(1.0, -2.0 * pi * x);
    wx_low[a] = std::polar(1.0, -2.0 * pi * x * static_cast<double>(nlo));
    vy[a] = std::polar(1.0, 2.0 * pi * x);
    vy_low[a] = std::polar(1.0, 2.0 * pi * x * static_cast<double>(mlo));
  }

  const auto& kern = simd::kernels();
  // g[m][a] = sum_n table[m][n] wx[a]^n
  std::vector<cplx> g(Mn * G);
  for (std::size_t m = 0; m < Mn; ++m) {
    cplx* acc = g.data() + m * G;
    std::fill(acc, acc + G, cplx(0.0));
    for (std::size_t n = Nn; n-- > 0;) kern.horner_step(acc, wx.data(), table[m * Nn + n], G);
    for (int a = 0; a < G; ++a) acc[a] *= wx_low[a];
  }
  // f[a][b] = sum_m g[m][a] vy[b]^m
  for (int a = 0; a < G; ++a) {
    cplx* acc = out.data() + static_cast<std::size_t>(a) * G;
    for (std::size_t m = Mn; m-- > 0;) kern.horner_step(acc, vy.data(), g[m * G + a], G);
    for (int b = 0; b < G; ++b) acc[b] *= vy_low[b] * std::polar(1.0, inner(grid.point(a, b), q0));
  }
  return out;
}

}  // namespace tbg
