#include "tbg/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "tbg/simd/kernels.hpp"

namespace tbg {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

MatrixXcd orthonormalize(const MatrixXcd& Y) {
  Eigen::HouseholderQR<MatrixXcd> qr(Y);
  return qr.householderQ() * MatrixXcd::Identity(Y.rows(), Y.cols());
}

// Indices of the `count` entries of smallest modulus, returned in ascending value order.
std::vector<Eigen::Index> nearest_zero_indices(const VectorXd& values, int count) {
  std::vector<Eigen::Index> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double fa = std::abs(values(a)), fb = std::abs(values(b));
    if (fa != fb) return fa < fb;
    return values(a) < values(b);
  });
  idx.resize(count);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });
  return idx;
}

EigenPairs select(const EigenPairs& all, int count) {
  const auto idx = nearest_zero_indices(all.values, count);
  EigenPairs out;
  out.values.resize(count);
  out.vectors.resize(all.vectors.rows(), count);
  for (int i = 0; i < count; ++i) {
    out.values(i) = all.values(idx[i]);
    out.vectors.col(i) = all.vectors.col(idx[i]);
    fix_gauge(out.vectors.col(i));
  }
  return out;
}

MatrixXcd start_block(Eigen::Index n, Eigen::Index p) {
  std::mt19937_64 rng(0x7b9c3d15ULL + static_cast<std::uint64_t>(n));
  std::normal_distribution<double> g;
  MatrixXcd X(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = cplx(g(rng), g(rng));
  return orthonormalize(X);
}

EigenPairs shift_invert(const SpMat& H, int count, const EigOptions& opt) {
  const Eigen::Index n = H.rows();
  const double hnorm = std::max(1.0, norm_inf(H));

  SpMat I(n, n);
  I.setIdentity();
  Eigen::SparseLU<SpMat> lu;
  double shift = opt.shift;
  for (int attempt = 0;; ++attempt) {
    SpMat M = H - cplx(shift, 0.0) * I;
    M.makeCompressed();
    lu.compute(M);
    if (lu.info() == Eigen::Success) break;
    if (attempt == 3) throw EigenError("sparse LU failed: " + lu.lastErrorMessage());
    shift *= -1.7;
  }

  // Ritz pairs are taken from the shift-inverted operator S = (H - s)^{-1}, whose
  // wanted eigenvalues are the largest in modulus; Rayleigh-Ritz on H itself
  // would produce spurious interior values near 0.  A block smaller than a
  // cluster of equal |E| cannot resolve it, so on stagnation the block grows.
  Eigen::Index p = std::min<Eigen::Index>(n, count + opt.guard);
  MatrixXcd X = start_block(n, p);
  MatrixXcd ritz;
  VectorXd theta(count);
  double worst = 0.0;
  int total = 0;
  for (;;) {
    double best = 1e300;
    int since_best = 0;
    bool stalled = false;
    while (total < opt.max_iter) {
      ++total;
      const MatrixXcd Y = lu.solve(X);
      MatrixXcd T = X.adjoint() * Y;
      T = 0.5 * (T + T.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(T);
      std::vector<Eigen::Index> order(p);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(j));
      });
      ritz.resize(n, count);
      for (int i = 0; i < count; ++i) ritz.col(i) = X * es.eigenvectors().col(order[i]);
      const MatrixXcd HR = H * ritz;
      worst = 0.0;
      for (int i = 0; i < count; ++i) {
        theta(i) = ritz.col(i).dot(HR.col(i)).real();
        worst = std::max(worst, (HR.col(i) - theta(i) * ritz.col(i)).norm());
      }
      X = orthonormalize(Y);
      if (worst <= opt.tol * hnorm) break;
      if (worst < 0.5 * best) {
        best = worst;
        since_best = 0;
      } else if (++since_best >= 12) {
        stalled = true;
        break;
      }
    }
    if (!stalled || p == n) break;
    const Eigen::Index grown = std::min<Eigen::Index>(n, 2 * p + count);
    MatrixXcd Z(n, grown);
    Z << X, start_block(n, grown).rightCols(grown - p);
    X = orthonormalize(Z);
    p = grown;
  }
  if (worst > opt.accept * hnorm) {
    std::ostringstream msg;
    msg << "shift-invert iteration did not converge (residual " << worst << ", dimension " << n << ", block " << p << ")";
    throw EigenError(msg.str());
  }
  return select({theta, ritz}, count);
}

}  // namespace

double norm_inf(const SpMat& H) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(H.rows());
  for (int c = 0; c < H.outerSize(); ++c)
    for (SpMat::InnerIterator it(H, c); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

EigenPairs hermitian_dense(const MatrixXcd& H, bool vectors) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenError("dense Hermitian eigensolver failed");
  EigenPairs out;
  out.values = es.eigenvalues();
  if (vectors) out.vectors = es.eigenvectors();
  return out;
}

EigenPairs hermitian_nearest_zero(const SpMat& H, int count, const EigOptions& opt) {
  if (H.rows() != H.cols()) throw std::invalid_argument("matrix is not square");
  if (count < 1 || count > H.rows()) throw std::invalid_argument("requested eigenvalue count out of range");
  const bool dense = opt.force_dense || (!opt.force_iterative && H.rows() <= opt.dense_limit) ||
                     count + opt.guard >= H.rows();
  if (dense) return select(hermitian_dense(MatrixXcd(H)), count);
  return shift_invert(H, count, opt);
}

Eigen::VectorXd accurate_ritz_values(const SpMat& H, const MatrixXcd& X) {
  using ld = long double;
  using LMat = Eigen::Matrix<std::complex<ld>, Eigen::Dynamic, Eigen::Dynamic>;
  const auto& kern = simd::kernels();
  const Eigen::Index n = X.rows(), m = X.cols();
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> Hr(H);
  Hr.makeCompressed();

  MatrixXcd yhi(n, m), ylo(n, m);
  std::vector<cplx> gathered;
  for (Eigen::Index b = 0; b < m; ++b) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto start = Hr.outerIndexPtr()[r];
      const auto len = Hr.outerIndexPtr()[r + 1] - start;
      gathered.resize(len);
      for (int t = 0; t < len; ++t) gathered[t] = X(Hr.innerIndexPtr()[start + t], b);
      const auto d = kern.dot_compensated(Hr.valuePtr() + start, gathered.data(), len);
      yhi(r, b) = d.hi;
      ylo(r, b) = d.lo;
    }
  }
  const MatrixXcd Xc = X.conjugate();
  LMat M(m, m), G(m, m);
  auto widen = [](const simd::DDComplex& d) {
    return std::complex<ld>(static_cast<ld>(d.hi.real()) + d.lo.real(), static_cast<ld>(d.hi.imag()) + d.lo.imag());
  };
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      auto mh = kern.dot_compensated(Xc.col(a).data(), yhi.col(b).data(), n);
      const cplx ml = kern.dot_conj(X.col(a).data(), ylo.col(b).data(), n);
      mh.lo += ml;
      M(a, b) = widen(mh);
      G(a, b) = widen(kern.dot_compensated(Xc.col(a).data(), X.col(b).data(), n));
    }
  }
  Eigen::LLT<LMat> llt(0.5 * (G + G.adjoint()));
  if (llt.info() != Eigen::Success) throw EigenError("Ritz basis is numerically rank deficient");
  LMat Linv = llt.matrixL().solve(LMat::Identity(m, m));
  LMat C = Linv * (0.5 * (M + M.adjoint())) * Linv.adjoint();
  Eigen::SelfAdjointEigenSolver<LMat> es(0.5 * (C + C.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) out(i) = static_cast<double>(es.eigenvalues()(i));
  std::sort(out.data(), out.data() + m);
  return out;
}

SpMat chiral_augment(const SpMat& A) {
  const Eigen::Index n = A.rows();
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(2 * A.nonZeros());
  for (int c = 0; c < A.outerSize(); ++c)
    for (SpMat::InnerIterator it(A, c); it; ++it) {
      t.emplace_back(n + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), n + it.row(), std::conj(it.value()));
    }
  SpMat out(2 * n, 2 * n);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

namespace {

// Gauge: right vectors as fix_gauge, left vectors rotated along; near-zero
// singular values get an independent left gauge.  Returns the worst of
// |A r - s l| and |A^* l - s r|.
double finish_triplets(const SpMat& A, SingularTriplets& out, double anorm) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < out.sigma.size(); ++i) {
    auto r = out.right.col(i);
    auto l = out.left.col(i);
    const Eigen::VectorXcd before = r;
    fix_gauge(r);
    const Eigen::Index j = [&] {
      Eigen::Index m;
      before.cwiseAbs().maxCoeff(&m);
      return m;
    }();
    if (before(j) != 0.0) l *= r(j) / before(j);
    if (out.sigma(i) <= 1e-13 * anorm) fix_gauge(l);
    const Eigen::VectorXcd Ar = A * r, Al = A.adjoint() * l;
    worst = std::max({worst, (Ar - out.sigma(i) * l).norm(), (Al - out.sigma(i) * r).norm()});
  }
  return worst;
}

// Two-sided extraction: SVD of L^* A X for orthonormal X (right) and L (left).
SingularTriplets rayleigh_ritz_svd(const SpMat& A, const MatrixXcd& X, const MatrixXcd& L, int count) {
  const MatrixXcd G = L.adjoint() * (A * X);
  Eigen::JacobiSVD<MatrixXcd> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index p = G.cols();
  SingularTriplets out;
  out.sigma.resize(count);
  out.right.resize(X.rows(), count);
  out.left.resize(X.rows(), count);
  for (int i = 0; i < count; ++i) {
    const Eigen::Index j = p - 1 - i;  // descending order from JacobiSVD
    out.sigma(i) = svd.singularValues()(j);
    out.right.col(i) = X * svd.matrixV().col(j);
    out.left.col(i) = L * svd.matrixU().col(j);
  }
  return out;
}

SingularTriplets dense_singular(const SpMat& A, int count) {
  const MatrixXcd D(A);
  Eigen::BDCSVD<MatrixXcd> svd(D, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index n = D.rows();
  SingularTriplets out;
  out.sigma.resize(count);
  out.right.resize(n, count);
  out.left.resize(n, count);
  for (int i = 0; i < count; ++i) {
    out.sigma(i) = svd.singularValues()(n - 1 - i);
    out.right.col(i) = svd.matrixV().col(n - 1 - i);
    out.left.col(i) = svd.matrixU().col(n - 1 - i);
  }
  finish_triplets(A, out, std::max(1.0, norm_inf(A)));
  return out;
}

}  // namespace

SingularTriplets smallest_singular_augmented(const SpMat& A, int count, const EigOptions& opt) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("singular triplets need a square matrix");
  const EigenPairs ep = hermitian_nearest_zero(chiral_augment(A), 2 * count, opt);

  auto column_space = [count](const MatrixXcd& Y) {
    Eigen::JacobiSVD<MatrixXcd> svd(Y, Eigen::ComputeThinU);
    return MatrixXcd(svd.matrixU().leftCols(count));
  };
  SingularTriplets out = rayleigh_ritz_svd(A, column_space(ep.vectors.topRows(n)),
                                           column_space(ep.vectors.bottomRows(n)), count);
  finish_triplets(A, out, std::max(1.0, norm_inf(A)));
  return out;
}

SingularTriplets smallest_singular(const SpMat& A, int count, const EigOptions& opt) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("singular triplets need a square matrix");
  if (count < 1 || count > n) throw std::invalid_argument("requested singular value count out of range");
  if (opt.force_dense || (!opt.force_iterative && n <= opt.dense_limit) || count + opt.guard >= n)
    return dense_singular(A, count);

  SpMat M = A;
  M.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) return smallest_singular_augmented(A, count, opt);

  // Inverse subspace iteration with (A^* A)^{-1}; the intermediate block
  // A^{-*} X spans the matching left singular subspace.
  const double anorm = std::max(1.0, norm_inf(A));
  Eigen::Index p = std::min<Eigen::Index>(n, count + opt.guard);
  MatrixXcd X = start_block(n, p);
  SingularTriplets out;
  double worst = 0.0;
  int total = 0;
  for (;;) {
    double best = 1e300;
    int since_best = 0;
    bool stalled = false;
    while (total < opt.max_iter) {
      ++total;
      const MatrixXcd L = orthonormalize(lu.adjoint().solve(X));
      X = orthonormalize(lu.solve(L));
      out = rayleigh_ritz_svd(A, X, L, count);
      worst = finish_triplets(A, out, anorm);
      if (!std::isfinite(worst)) return smallest_singular_augmented(A, count, opt);
      if (worst <= opt.tol * anorm) break;
      if (worst < 0.5 * best) {
        best = worst;
        since_best = 0;
      } else if (++since_best >= 12) {
        stalled = true;
        break;
      }
    }
    if (!stalled || p == n) break;
    const Eigen::Index grown = std::min<Eigen::Index>(n, 2 * p + count);
    MatrixXcd Z(n, grown);
    Z << X, start_block(n, grown).rightCols(grown - p);
    X = orthonormalize(Z);
    p = grown;
  }
  if (worst > opt.accept * anorm) {
    std::ostringstream msg;
    msg << "inverse subspace iteration for singular values did not converge (residual " << worst << ", dimension " << n
        << ", block " << p << ")";
    throw EigenError(msg.str());
  }
  return out;
}

void fix_gauge(Eigen::Ref<Eigen::VectorXcd> v) {
  if (v.size() == 0) return;
  double best = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
  if (best == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= (1.0 - 1e-12) * best) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

}  // namespace tbg
