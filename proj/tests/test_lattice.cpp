#include <doctest.h>

#include <cmath>
#include <random>

#include "tbg/lattice.hpp"

using namespace tbg;

namespace {

// Solves p = b1 (m + n omega) by Cramer's rule on the real 2x2 system.
std::pair<double, double> cramer(cplx p) {
  const cplx c1 = dual_b1, c2 = dual_b2;
  const double det = c1.real() * c2.imag() - c1.imag() * c2.real();
  const double m = (p.real() * c2.imag() - p.imag() * c2.real()) / det;
  const double n = (c1.real() * p.imag() - c1.imag() * p.real()) / det;
  return {m, n};
}

}  // namespace

TEST_CASE("pairing") {
  CHECK(inner(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(inner(1.0, cplx(0, 1)) == doctest::Approx(0.0));
  CHECK(inner(1.0, K) == doctest::Approx(4.0 * pi / 3.0));
  CHECK(std::abs(std::polar(1.0, inner(1.0, K)) - omega * omega) < 1e-15);
  const cplx z(0.3, -1.2), w(2.1, 0.7);
  CHECK(inner(z, w) == doctest::Approx(inner(w, z)));
  CHECK(inner(2.5 * z, w) == doctest::Approx(2.5 * inner(z, w)));
}

TEST_CASE("root of unity and lattice duality") {
  CHECK(std::abs(omega * omega * omega - 1.0) < 1e-15);
  CHECK(std::abs(1.0 + omega + omega * omega) < 1e-15);
  const cplx gens[] = {1.0, omega, -1.0, 1.0 + omega};
  const cplx duals[] = {dual_b1, dual_b2, dual_b1 - 2.0 * dual_b2};
  for (cplx g : gens)
    for (cplx p : duals) CHECK(std::abs(std::polar(1.0, inner(p, g)) - 1.0) < 1e-14);
}

TEST_CASE("dual lattice membership") {
  auto z = in_dual_lattice(0.0);
  REQUIRE(z);
  CHECK(z->m == 0);
  CHECK(z->n == 0);

  auto [m3, n3] = cramer(3.0 * K);
  auto c3 = in_dual_lattice(3.0 * K);
  REQUIRE(c3);
  CHECK(c3->m == std::lround(m3));
  CHECK(c3->n == std::lround(n3));
  CHECK(c3->m == -1);
  CHECK(c3->n == -2);

  auto [mw, nw] = cramer(omega * K - K);
  auto cw = in_dual_lattice(omega * K - K);
  REQUIRE(cw);
  CHECK(cw->m == std::lround(mw));
  CHECK(cw->n == std::lround(nw));
  CHECK(cw->m == 1);
  CHECK(cw->n == 1);
  auto cr = in_dual_lattice(K - omega * K);
  REQUIRE(cr);
  CHECK(cr->m == -1);
  CHECK(cr->n == -1);

  CHECK_FALSE(in_dual_lattice(K));
  CHECK_FALSE(in_dual_lattice(cplx(0.1, 0.2)));
}

TEST_CASE("z of k") {
  CHECK(std::abs(z_of_k(0.0)) == 0.0);
  CHECK(std::abs(z_of_k(K) - cplx(0.0, -1.0 / std::sqrt(3.0))) < 1e-15);
  CHECK(std::abs(z_of_k(dual_b1) - 1.0) < 1e-15);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int i = 0; i < 50; ++i) {
    const int m = d(rng), n = d(rng);
    auto c = in_lattice(z_of_k(dual_point(m, n)), 1e-10);
    REQUIRE(c);
    CHECK(c->m == m);
    CHECK(c->n == n);
  }
}

TEST_CASE("classification mod the dual lattice") {
  CHECK(classify_k(omega * K).cls == KClass::K);
  CHECK(classify_k(2.0 * K).cls == KClass::MinusK);
  CHECK(classify_k(-K).cls == KClass::MinusK);
  CHECK(classify_k(0.0).cls == KClass::Gamma);
  CHECK(classify_k(cplx(0.1, 0.2)).cls == KClass::Generic);

  const cplx samples[] = {cplx(0.1, 0.2), K, cplx(-3.3, 7.1), 2.0 * K};
  for (cplx k : samples) {
    const KPoint a = classify_k(k);
    const KPoint b = classify_k(a.k);
    CHECK(a.cls == b.cls);
    CHECK(std::abs(a.k - b.k) < 1e-12);
    for (int m = -2; m <= 2; ++m) {
      const KPoint c = classify_k(k + dual_point(m, 3 - m));
      CHECK(c.cls == a.cls);
      CHECK(std::abs(c.k - a.k) < 1e-11);
    }
    auto [x, y] = dual_coordinates(a.k);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(y >= 0.0);
    CHECK(y < 1.0);
  }
}

TEST_CASE("grids and paths") {
  const KGrid g(18, 18);
  CHECK(g.size() == 324);
  auto nk = g.node_of(K);
  REQUIRE(nk);
  CHECK(std::abs(classify_k(g[*nk]).k - classify_k(K).k) < 1e-12);
  auto nm = g.node_of(-K);
  REQUIRE(nm);
  CHECK(classify_k(g[*nm]).cls == KClass::MinusK);
  CHECK_FALSE(g.node_of(cplx(0.123, 0.0)));
  for (int i = 0; i < g.size(); i += 17) CHECK(g.node_of(g[i]) == i);

  const KPath p = KPath::default_path(10);
  CHECK(p.points.size() == 21);
  CHECK(std::abs(p.points.front() + K) < 1e-15);
  CHECK(std::abs(p.points[10]) < 1e-15);
  CHECK(p.arclength.back() == doctest::Approx(2.0 * K));
}
