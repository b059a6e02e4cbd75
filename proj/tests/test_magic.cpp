#include <doctest.h>

#include <cmath>

#include "magic_constants.hpp"
#include "tbg/magic.hpp"

using namespace tbg;

namespace {

double sigma_min_at(const Model& model, cplx alpha, int N, cplx k) {
  return smallest_singular(assemble_D(model, alpha, PlaneWaveBasis(N, k)), 1).sigma(0);
}

}  // namespace

TEST_CASE("first real magic parameter of U") {
  RealScanOptions o;
  o.lo = 0.5;
  o.hi = 0.7;
  const auto r = find_real_magic(Model{}, o);
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0].alpha.real() - testdata::alpha1_U) < 1e-10);
  CHECK(r[0].alpha.imag() == 0.0);
  CHECK(r[0].multiplicity == 1);
  CHECK(r[0].residual < 1e-12);
  CHECK_FALSE(r[0].at_boundary);
}

TEST_CASE("no magic parameter below the first") {
  RealScanOptions o;
  o.lo = 0.3;
  o.hi = 0.5;
  CHECK(find_real_magic(Model{}, o).empty());
}

TEST_CASE("the magic parameter does not depend on the probe") {
  const Model model;
  for (cplx k : {cplx(0.41, 0.27), cplx(-0.9, 0.13), cplx(1.7, -0.6)}) {
    const cplx a = polish_magic(model, 0.5866, 12, k, 1, true);
    CHECK(std::abs(a - testdata::alpha1_U) < 1e-10);
    CHECK(sigma_min_at(model, a, 12, k) < 1e-12);
  }
}

TEST_CASE("degenerate magic parameter of U1") {
  const Model model{make_U1(), make_V()};
  RealScanOptions o;
  o.lo = 0.8;
  o.hi = 0.9;
  const auto r = find_real_magic(model, o);
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0].alpha.real() - 0.8538) < 2e-4);
  CHECK(r[0].multiplicity == 2);
  // both singular values vanish, the third does not
  const auto st = smallest_singular(assemble_D(model, r[0].alpha, PlaneWaveBasis(12, cplx(-0.5, 0.9))), 3);
  CHECK(st.sigma(1) < 1e-10);
  CHECK(st.sigma(2) > 0.05);
}

TEST_CASE("multiplicity away from magic parameters") {
  const Model model;
  CHECK(multiplicity(model, 1.0, 10) == 0);
  CHECK(multiplicity(model, testdata::alpha1_U, 12) == 1);
}

TEST_CASE("complex magic parameters") {
  const Model model;
  ComplexSearchOptions o;
  o.N = 8;
  o.verify_N = 12;
  o.count = 3;
  const auto r = find_complex_magic(model, o);
  REQUIRE(r.verified.size() == 3);
  CHECK(std::abs(r.verified[0].alpha - testdata::alpha1_U) < 1e-10);
  for (const auto& m : r.verified) {
    CHECK(m.alpha.real() >= 0.0);
    CHECK(m.alpha.imag() >= 0.0);
    CHECK(m.residual < 1e-10);
    // the set is closed under conjugation and sign change
    for (cplx a : {std::conj(m.alpha), -m.alpha, -std::conj(m.alpha)}) CHECK(sigma_min_at(model, a, 12, default_probe) < 1e-10);
    // and the kernel persists at another k
    CHECK(sigma_min_at(model, m.alpha, 12, cplx(-1.1, 0.35)) < 1e-10);
  }
  // second and third candidates in order of modulus
  CHECK(std::abs(r.verified[1].alpha - cplx(0.9628424, 0.9873409)) < 1e-6);
  CHECK(r.verified[1].multiplicity == 2);
  CHECK(std::abs(r.verified[2].alpha - cplx(1.1214156, 1.5776279)) < 1e-6);
  CHECK(r.verified[2].multiplicity == 1);
}

TEST_CASE("invalid scan ranges are rejected") {
  RealScanOptions o;
  o.lo = 1.0;
  o.hi = 0.5;
  CHECK_THROWS_AS(find_real_magic(Model{}, o), std::invalid_argument);
}
