#include <doctest.h>

#include <cmath>
#include <random>

#include "magic_constants.hpp"
#include "oracles/ewald.hpp"
#include "test_support.hpp"
#include "tbg/magic.hpp"
#include "tbg/simd/kernels.hpp"
#include "tbg/symmetry.hpp"
#include "tbg/theta.hpp"

using namespace tbg;
using testsupport::random_k;
using testsupport::random_points;

namespace {

const ZeroMode& first_zero_mode() {
  static const ZeroMode zm = build_zero_mode(Model{}, testdata::alpha1_U, 12);
  return zm;
}

const AnalyticKernel& first_kernel() {
  static const AnalyticKernel ak(first_zero_mode());
  return ak;
}

}  // namespace

TEST_CASE("theta vanishes at 0 and on the period lattice") {
  CHECK(std::abs(theta(0.0)) == 0.0);
  for (int m = -2; m <= 2; ++m)
    for (int n = -1; n <= 1; ++n) CHECK(std::abs(theta(lattice_point(m, n))) < 1e-12);
  // |theta| grows like |q|^{-n^2}; measure against the size of theta half a period away
  for (int m = -2; m <= 2; ++m)
    for (int n : {-2, 2}) {
      const cplx z = lattice_point(m, n);
      CHECK(std::abs(theta(z)) < 1e-13 * std::abs(theta(z + 0.5)));
    }
  CHECK(std::abs(theta(0.5)) > 0.1);
}

TEST_CASE("theta reflection identity") {
  const cplx phase = std::polar(1.0, -pi / 4.0);
  double worst = 0.0;
  for (cplx z : random_points(100, -1.0, 1.0, 11))
    worst = std::max(worst, std::abs(theta(z) - phase * std::conj(theta(std::conj(z)))));
  CHECK(worst < 1e-13);
}

TEST_CASE("theta truncation order") {
  const ThetaFunction t12(12), t20(20);
  CHECK(std::abs(t12.nome()) == doctest::Approx(std::exp(-pi * sqrt3 / 2.0)).epsilon(1e-15));
  double worst = 0.0;
  for (cplx z : random_points(100, -1.0, 1.0, 12))
    worst = std::max(worst, std::abs(t12(z) - t20(z)) / std::abs(t20(z)));
  CHECK(worst < 1e-15);
  CHECK(std::abs(t12.prime_at_zero() - t20.prime_at_zero()) < 1e-15 * std::abs(t20.prime_at_zero()));
}

TEST_CASE("theta'(0) matches a central difference") {
  const double h = 1e-5;
  const cplx d = (theta(h) - theta(-h)) / (2.0 * h);
  CHECK(std::abs(d - theta_prime_0()) < 1e-8 * std::abs(theta_prime_0()));
}

TEST_CASE("F_k is Lambda-periodic") {
  const auto zs = random_points(40, -1.0, 1.0, 13);
  const auto ks = random_k(40, 14);
  double worst = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const cplx f = green_function(zs[i], ks[i]);
    worst = std::max(worst, std::abs(green_function(zs[i] + 1.0, ks[i]) - f) / std::max(1.0, std::abs(f)));
    worst = std::max(worst, std::abs(green_function(zs[i] + omega, ks[i]) - f) / std::max(1.0, std::abs(f)));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("a(k) and F_k errors") {
  for (int m = -1; m <= 1; ++m) {
    const cplx p = dual_point(m, 0);
    CHECK(std::abs(green_normalization(p + cplx(1e-7, 0.0))) < 1e-6);
  }
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) {
      const cplx p = dual_point(m, n);
      // a vanishes linearly at every dual lattice point
      const double a1 = std::abs(green_normalization(p + cplx(1e-7, 0.0)));
      const double a2 = std::abs(green_normalization(p + cplx(2e-7, 0.0)));
      CHECK(a1 < 1e-5);
      CHECK(a2 / a1 == doctest::Approx(2.0).epsilon(1e-5));
      CHECK_THROWS_AS(green_normalization(p), ThetaError);
      CHECK_THROWS_AS(green_function(0.3, p), ThetaError);
    }
  CHECK_THROWS_AS(green_function(lattice_point(1, -1), cplx(0.5, 0.2)), ThetaError);
  CHECK(std::abs(green_normalization(cplx(0.5, 0.2))) > 0.1);
}

TEST_CASE("F_k matches the Ewald-summed Fourier series") {
  const auto zs = random_points(20, -0.9, 0.9, 15);
  const auto ks = random_k(20, 16);
  double worst = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const cplx f = green_function(zs[i], ks[i]);
    const cplx g = oracle::green_function(zs[i], ks[i], green_normalization(ks[i]));
    worst = std::max(worst, std::abs(f - g) / std::max(1.0, std::abs(f)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("Ewald oracle does not depend on the splitting parameter") {
  const cplx z(0.31, -0.17), k(0.9, 1.3);
  CHECK(std::abs(oracle::green_series(z, k, 0.04) - oracle::green_series(z, k, 0.09)) < 1e-11);
}

TEST_CASE("F_k rotation and reflection identities") {
  for (cplx k : random_k(10, 17)) {
    const auto r = transformation_checks(k);
    CHECK(r.rotation < 1e-10);
    CHECK(r.reflection < 1e-10);
    // theta'(0) has phase exp(-i pi / 8), so dropping its conjugate ratio is off by exactly 2 sin(pi / 8)
    CHECK(r.reflection_unit_phase == doctest::Approx(2.0 * std::sin(pi / 8.0)).epsilon(1e-9));
  }
  CHECK(std::arg(theta_prime_0()) == doctest::Approx(-pi / 8.0).epsilon(1e-14));
}

TEST_CASE("torus sampling agrees with direct evaluation") {
  std::mt19937_64 rng(18);
  std::normal_distribution<double> g;
  const PlaneWaveBasis b(4, cplx(0.37, -0.21));
  const auto n0 = static_cast<Eigen::Index>(b.split());
  const std::vector<cplx> q(b.momenta().begin(), b.momenta().begin() + n0);
  Eigen::VectorXcd c(n0);
  for (auto& x : c) x = cplx(g(rng), g(rng));
  const simd::Backend before = simd::active_backend();
  for (auto backend : {simd::Backend::Scalar, simd::Backend::AVX2}) {
    if (!simd::available(backend)) continue;
    simd::set_backend(backend);
    const TorusGrid grid(17, 0.25);
    const auto s = sample_series(q, c, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
      worst = std::max(worst, std::abs(s[j] - evaluate_series(q, c, grid[j])));
    CHECK(worst < 1e-11 * c.norm());
  }
  simd::set_backend(before);
  CHECK_THROWS_AS(sample_series({cplx(0.0), cplx(0.1)}, Eigen::VectorXcd::Ones(2), TorusGrid(4)), std::invalid_argument);
}

TEST_CASE("torus grid integrates trigonometric monomials") {
  const TorusGrid grid(24);
  std::vector<cplx> one(grid.size(), 1.0), wave(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) wave[j] = std::polar(1.0, inner(grid[j], dual_b1 + 2.0 * dual_b2));
  CHECK(std::abs(grid.integrate(one) - cell_area) < 1e-14);
  CHECK(std::abs(grid.integrate(wave)) < 1e-13);
}

TEST_CASE("zero mode at the first magic value") {
  const ZeroMode& zm = first_zero_mode();
  CHECK(zm.sign == 1);
  CHECK(zm.sign_residual < 1e-8);
  // second component against sign * i * psi(-z), directly in position space
  const PlaneWaveBasis b(12, 0.0);
  const std::vector<cplx> q1(b.momenta().begin() + static_cast<long>(b.split()), b.momenta().end());
  const Eigen::VectorXcd c1 = zm.u0.tail(static_cast<Eigen::Index>(q1.size()));
  for (cplx z : random_points(10, -0.8, 0.8, 23))
    CHECK(std::abs(evaluate_series(q1, c1, z) - cplx(0.0, zm.sign) * zm.psi_at(-z)) < 1e-8);
  CHECK(std::abs(zm.psi_at(0.0)) < 1e-8);
  for (cplx z : random_points(20, -0.8, 0.8, 19)) CHECK(std::abs(zm.psi_at(omega * z) - omega * zm.psi_at(z)) < 1e-8);
  for (cplx gamma : {cplx(1.0), omega}) {
    const cplx z(0.21, 0.13);
    CHECK(std::abs(zm.psi_at(z + gamma) - std::polar(1.0, -inner(gamma, cplx(K))) * zm.psi_at(z)) < 1e-12);
  }
  // C u0 = omega_bar^2 u0 on the first C^2 copy means Omega u0 = omega u0
  const SymmetryBasis sb(12, {cplx(0.0)});
  const auto Om = build("Omega", sb);
  CHECK((Om.apply(zm.u0) - omega * zm.u0).norm() < 1e-8);
  const Eigen::VectorXcd u4 = (Eigen::VectorXcd(2 * zm.u0.size()) << zm.u0, Eigen::VectorXcd::Zero(zm.u0.size())).finished();
  CHECK((build("C", sb).apply(u4) - omega_bar * omega_bar * u4).norm() < 1e-8);
}

TEST_CASE("zero mode chirality alternates") {
  RealScanOptions opt;
  opt.lo = 2.15;
  opt.hi = 2.30;
  const auto found = find_real_magic(Model{}, opt);
  REQUIRE(found.size() == 1);
  const ZeroMode zm = build_zero_mode(Model{}, found[0].alpha.real(), 12);
  CHECK(zm.sign == -first_zero_mode().sign);
  CHECK(std::abs(zm.psi_at(0.0)) < 1e-8);
  CHECK_THROWS_AS(build_zero_mode(Model{}, 1.0, 8), std::runtime_error);
}

TEST_CASE("analytic u(k): normalization constant") {
  const AnalyticKernel& ak = first_kernel();
  for (cplx k : random_k(6, 20)) {
    const double c = ak.normalization(k);
    CHECK(c > 0.0);
    const auto s = ak.samples(k);
    std::vector<double> n(s.first.size());
    for (std::size_t j = 0; j < n.size(); ++j) n[j] = std::norm(s.first[j]) + std::norm(s.second[j]);
    CHECK(ak.grid().integrate(n) == doctest::Approx(1.0).epsilon(1e-8));
    const double ratio = std::abs(theta(z_of_k(k)) / theta(omega * z_of_k(k)));
    CHECK(ak.normalization(omega * k) / c == doctest::Approx(ratio).epsilon(1e-8));
    CHECK(ak.normalization(std::conj(k)) == doctest::Approx(c).epsilon(1e-8));
  }
}

TEST_CASE("analytic u(k): quadrature converges") {
  const AnalyticKernel coarse(first_zero_mode(), TorusGrid(96));
  const AnalyticKernel fine(first_zero_mode(), TorusGrid(192));
  for (cplx k : random_k(4, 21)) CHECK(std::abs(coarse.normalization(k) / fine.normalization(k) - 1.0) < 1e-9);
}

TEST_CASE("analytic and plane-wave kernel vectors agree") {
  const AnalyticKernel& ak = first_kernel();
  for (cplx k : random_k(4, 22)) CHECK(ak.overlap_with_numeric(Model{}, k, 12) > 1.0 - 1e-6);
}
