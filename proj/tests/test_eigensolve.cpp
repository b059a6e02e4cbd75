#include <doctest.h>

#include <cmath>
#include <random>

#include "tbg/eigensolve.hpp"
#include "tbg/planewave.hpp"

using namespace tbg;

namespace {

SpMat random_sparse(int n, unsigned seed, double fill) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pick(0.0, 1.0);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, cplx(3.0 * u(rng), u(rng)));
    for (int j = 0; j < n; ++j)
      if (i != j && pick(rng) < fill) t.emplace_back(i, j, cplx(u(rng), u(rng)));
  }
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

void check_triplets(const SpMat& A, const SingularTriplets& st, double tol) {
  for (Eigen::Index i = 0; i < st.sigma.size(); ++i) {
    CHECK((A * st.right.col(i) - st.sigma(i) * st.left.col(i)).norm() < tol);
    CHECK((A.adjoint() * st.left.col(i) - st.sigma(i) * st.right.col(i)).norm() < tol);
    CHECK(std::abs(st.right.col(i).norm() - 1.0) < 1e-12);
  }
}

}  // namespace

TEST_CASE("singular triplets: iterative, augmented and dense agree") {
  const SpMat A = random_sparse(600, 11, 0.01);
  const Eigen::BDCSVD<Eigen::MatrixXcd> ref{Eigen::MatrixXcd(A)};
  const auto& sv = ref.singularValues();
  const int n = static_cast<int>(sv.size());

  EigOptions it;
  it.force_iterative = true;
  EigOptions dn;
  dn.force_dense = true;
  const auto a = smallest_singular(A, 3, it);
  const auto b = smallest_singular_augmented(A, 3, it);
  const auto c = smallest_singular(A, 3, dn);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(a.sigma(i) - sv(n - 1 - i)) < 1e-10);
    CHECK(std::abs(b.sigma(i) - sv(n - 1 - i)) < 1e-10);
    CHECK(std::abs(c.sigma(i) - sv(n - 1 - i)) < 1e-10);
  }
  check_triplets(A, a, 1e-9);
  check_triplets(A, b, 1e-9);
  check_triplets(A, c, 1e-9);
  // same gauge on simple singular values
  for (int i = 0; i < 3; ++i) {
    CHECK((a.right.col(i) - c.right.col(i)).norm() < 1e-8);
    CHECK((a.left.col(i) - c.left.col(i)).norm() < 1e-8);
  }
}

TEST_CASE("singular triplets of a nearly double kernel") {
  const Model model{make_U1(), make_V()};
  const PlaneWaveBasis b(8, cplx(0.3, 0.2));
  const SpMat A = assemble_D(model, 0.8538, b);
  EigOptions dn;
  dn.force_dense = true;
  const auto it = smallest_singular(A, 3);
  const auto ref = smallest_singular(A, 3, dn);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(it.sigma(i) - ref.sigma(i)) < 1e-11);
  CHECK(it.sigma(1) < 1e-4);
  CHECK(it.sigma(2) > 0.1);
  check_triplets(A, it, 1e-10);
}

TEST_CASE("nearest-zero eigenpairs: iterative and dense agree") {
  const SpMat A = random_sparse(500, 5, 0.01);
  const SpMat H = chiral_augment(A);
  EigOptions it;
  it.force_iterative = true;
  EigOptions dn;
  dn.force_dense = true;
  const auto x = hermitian_nearest_zero(H, 4, it);
  const auto y = hermitian_nearest_zero(H, 4, dn);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(x.values(i) - y.values(i)) < 1e-10);
    CHECK((H * x.vectors.col(i) - x.values(i) * x.vectors.col(i)).norm() < 1e-9);
  }
}

TEST_CASE("compensated Ritz values beat the double-precision floor") {
  // diag(1e-14, 1, 2) hidden by a unitary: Ritz values on the exact eigenvectors
  const int n = 3;
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Random(n, n);
  Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(Q).householderQ();
  Eigen::VectorXd d(n);
  d << 1e-14, 1.0, 2.0;
  const Eigen::MatrixXcd Hd = Q * d.asDiagonal() * Q.adjoint();
  const SpMat H = Eigen::MatrixXcd(0.5 * (Hd + Hd.adjoint())).sparseView();
  const Eigen::VectorXd r = accurate_ritz_values(H, Q.leftCols(1));
  CHECK(std::abs(r(0) - 1e-14) < 1e-15);
}
