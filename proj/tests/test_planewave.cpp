#include <doctest.h>

#include <cmath>
#include <random>

#include "magic_constants.hpp"
#include "tbg/planewave.hpp"

using namespace tbg;

namespace {

// min |q| over q in c K + k + Lambda*, by brute-force enumeration
double free_min(cplx k, int c) {
  double best = 1e300;
  for (int m = -6; m <= 6; ++m)
    for (int n = -6; n <= 6; ++n) best = std::min(best, std::abs(static_cast<double>(c) * K + k + dual_point(m, n)));
  return best;
}

double hermitian_defect(const SpMat& H) {
  const SpMat D = H - SpMat(H.adjoint());
  double worst = 0.0;
  for (int c = 0; c < D.outerSize(); ++c)
    for (SpMat::InnerIterator it(D, c); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

}  // namespace

TEST_CASE("basis layout") {
  const PlaneWaveBasis b(6, cplx(0.3, 0.1));
  CHECK(b.split() > 0);
  CHECK(b.size() > b.split());
  // about (2N + 1)^2 momenta per component
  CHECK(std::abs(static_cast<double>(b.split()) - 169.0) < 20.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int c = b.component(i);
    CHECK(std::abs(b.momentum(i)) <= b.radius());
    CHECK(in_dual_lattice(b.momentum(i) - PlaneWaveBasis::offset(c) - b.k()));
    CHECK(b.find(c, b.momentum(i)) == i);
  }
  CHECK_FALSE(b.find(0, cplx(0.123, 0.0)));
}

TEST_CASE("free operator") {
  const Model model;
  const PlaneWaveBasis b(5, cplx(0.2, -0.4));
  const SpMat D = assemble_D(model, 0.0, b);
  CHECK(D.nonZeros() == static_cast<long>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(D.coeff(i, i) == b.momentum(i));

  const PlaneWaveBasis bk(5, K);
  int zeros = 0;
  for (std::size_t i = 0; i < bk.split(); ++i) zeros += std::abs(bk.momentum(i)) < 1e-12;
  CHECK(zeros == 1);
  for (std::size_t i = bk.split(); i < bk.size(); ++i) CHECK(std::abs(bk.momentum(i)) > 1.0);
}

TEST_CASE("magic parameter gives a kernel at Gamma") {
  const Model model;
  const PlaneWaveBasis b(12, 0.0);
  const auto st = smallest_singular(assemble_D(model, testdata::alpha1_U, b), 1);
  CHECK(st.sigma(0) < 1e-8);
}

TEST_CASE("Hamiltonian is Hermitian") {
  const Model model;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 5; ++i) {
    const PlaneWaveBasis b(6, cplx(d(rng), d(rng)));
    CHECK(hermitian_defect(assemble_H(model, cplx(d(rng), d(rng)), d(rng), b)) < 1e-13);
  }
}

TEST_CASE("free bands") {
  const Model model;
  auto rk = bands(model, 0.0, 0.0, K, 8, 2);
  CHECK(std::abs(rk.energies[0]) < 1e-12);
  CHECK(std::abs(rk.energies[1]) < 1e-12);
  CHECK(rk.labels == std::vector<int>{-1, 1});

  const double oracle = std::min(free_min(0.0, 1), free_min(0.0, -1));
  CHECK(oracle == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
  auto r0 = bands(model, 0.0, 0.0, 0.0, 8, 1);
  REQUIRE(r0.energies.size() == 1);
  CHECK(r0.labels[0] == 1);
  CHECK(std::abs(r0.energies[0] - oracle) < 1e-10);
}

TEST_CASE("zero modes at K") {
  const Model model;
  const auto b = PlaneWaveBasis(8, K);
  const auto e0 = hermitian_nearest_zero(assemble_H(model, 0.0, 0.0, b), 4);
  int small = 0;
  for (double e : e0.values) small += std::abs(e) < 1e-12;
  CHECK(small == 2);
  const auto e1 = hermitian_nearest_zero(assemble_H(model, testdata::alpha1_U, 0.1, b), 4);
  small = 0;
  for (double e : e1.values) small += std::abs(e) < 1e-9;
  CHECK(small >= 2);
}

TEST_CASE("flat band at the first magic parameter") {
  const Model model;
  const auto r = bands(model, testdata::alpha1_U, 0.0, cplx(0.0, 0.5), 16, 2);
  CHECK(std::abs(r.energies[0]) < 1e-6);
  CHECK(std::abs(r.energies[1]) < 1e-6);
  CHECK(flat_band_residual(model, testdata::alpha1_U, 10, KGrid(6, 6)) < 1e-6);
  CHECK(flat_band_residual(model, 0.3, 10, KGrid(6, 6)) > 1e-2);
}

TEST_CASE("free flat-band residual equals the free dispersion") {
  const Model model;
  const KGrid g(6, 6);
  double worst = 0.0, low = 1e300;
  for (int i = 0; i < g.size(); ++i) {
    const double e = std::min(free_min(g[i], 1), free_min(g[i], -1));
    worst = std::max(worst, e);
    if (classify_k(g[i]).cls == KClass::Generic || classify_k(g[i]).cls == KClass::Gamma) low = std::min(low, e);
  }
  CHECK(std::abs(flat_band_residual(model, 0.0, 6, g) - worst) < 1e-10);
  CHECK(low > 0.1);
}

TEST_CASE("kernel vectors") {
  const Model model;
  const PlaneWaveBasis b(12, cplx(0.3, 0.2));
  const auto kp = kernel_vector(model, testdata::alpha1_U, b);
  CHECK(kp.sigma1 < 1e-8);
  CHECK(kp.sigma2 > 0.1);
  CHECK(std::abs(kp.u.norm() - 1.0) < 1e-12);
  CHECK(std::abs(kp.u.dot(kp.u_star)) < 1e-8);
  const SpMat D = assemble_D(model, testdata::alpha1_U, b);
  CHECK((D * kp.u).norm() < 1e-8);
  CHECK((SpMat(D.adjoint()) * kp.u_star).norm() < 1e-8);

  const Model m1{make_U1(), make_V()};
  CHECK_THROWS_AS(kernel_vector(m1, 0.8538, PlaneWaveBasis(8, cplx(0.3, 0.2))), NotSimpleError);
}

TEST_CASE("chiral spectrum is symmetric") {
  const Model model;
  const PlaneWaveBasis b(4, cplx(0.7, -0.3));
  const auto ep = hermitian_dense(Eigen::MatrixXcd(assemble_H(model, 1.3, 0.0, b)), false);
  const auto n = ep.values.size();
  for (Eigen::Index i = 0; i < n; ++i) CHECK(std::abs(ep.values(i) + ep.values(n - 1 - i)) < 1e-10);
}

TEST_CASE("periodicity in k") {
  const Model model;
  const cplx k(0.37, -0.81);
  const cplx p = dual_point(1, -2);
  const PlaneWaveBasis a(6, k), b(6, k + p);
  const auto perm = a.matching(b);
  const SpMat Ha = assemble_D(model, 0.9, a), Hb = assemble_D(model, 0.9, b);
  double worst = 0.0;
  for (int c = 0; c < Ha.outerSize(); ++c)
    for (SpMat::InnerIterator it(Ha, c); it; ++it)
      worst = std::max(worst, std::abs(it.value() - Hb.coeff(perm[it.row()], perm[it.col()])));
  CHECK(worst < 1e-12);
  CHECK(Ha.nonZeros() == Hb.nonZeros());

  const auto ra = bands(model, 0.9, 0.3, k, 10, 6), rb = bands(model, 0.9, 0.3, k + p, 10, 6);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(ra.energies[i] - rb.energies[i]) < 1e-10);
}

TEST_CASE("truncation convergence") {
  const Model model;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    const cplx alpha = 0.2 + 1.2 * d(rng);
    const double lambda = d(rng);
    const cplx k = d(rng) * dual_b1 + d(rng) * dual_b2;
    const double e12 = bands(model, alpha, lambda, k, 12, 1).energies[0];
    const double e16 = bands(model, alpha, lambda, k, 16, 1).energies[0];
    CHECK(std::abs(e12 - e16) < 1e-8);
  }
}

TEST_CASE("dense and iterative paths agree") {
  const Model model;
  const PlaneWaveBasis b(7, cplx(0.4, 1.1));
  const SpMat H = assemble_H(model, 0.8, 0.4, b);
  EigOptions dense, iter;
  dense.force_dense = true;
  iter.force_iterative = true;
  const auto a = hermitian_nearest_zero(H, 6, dense);
  const auto c = hermitian_nearest_zero(H, 6, iter);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(a.values(i) - c.values(i)) < 1e-11);
    CHECK(std::abs(std::abs(a.vectors.col(i).dot(c.vectors.col(i))) - 1.0) < 1e-8);
  }
  const Eigen::VectorXd r = accurate_ritz_values(H, c.vectors);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(r(i) - a.values(i)) < 1e-11);
}
