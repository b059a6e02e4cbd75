#include "tbg/perturb.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tbg/parallel.hpp"

namespace tbg {

struct GrushinData::Solver {
  mutable Eigen::SparseLU<SpMat> lu;  // adjoint() is non-const in Eigen 3.4
  Eigen::Index n = 0;
};

GrushinData::GrushinData(const Model& model, double alpha, cplx k, int N) : alpha_(alpha), k_(k) {
  auto basis = std::make_shared<PlaneWaveBasis>(N, k);
  const KernelPair kp = kernel_vector(model, alpha, *basis);
  u_ = kp.u;
  u_star_ = kp.u_star;
  sigma1_ = kp.sigma1;
  sigma2_ = kp.sigma2;

  const SpMat A = assemble_D(model, alpha, *basis);
  const Eigen::Index n = A.rows();
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(A.nonZeros() + 2 * n));
  for (Eigen::Index c = 0; c < A.outerSize(); ++c)
    for (SpMat::InnerIterator it(A, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index i = 0; i < n; ++i) {
    t.emplace_back(i, n, u_star_(i));
    t.emplace_back(n, i, std::conj(u_(i)));
  }
  SpMat P(n + 1, n + 1);
  P.setFromTriplets(t.begin(), t.end());
  P.makeCompressed();
  auto solver = std::make_shared<Solver>();
  solver->n = n;
  solver->lu.compute(P);
  if (solver->lu.info() != Eigen::Success) throw EigenError("bordered matrix factorization failed");
  solver_ = std::move(solver);
  C_ = std::make_shared<SpMat>(assemble_C(model, *basis));
  basis_ = std::move(basis);
}

Eigen::VectorXcd GrushinData::E0(const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(solver_->n + 1);
  rhs.head(solver_->n) = b;
  const Eigen::VectorXcd x = solver_->lu.solve(rhs);
  return x.head(solver_->n);
}

Eigen::VectorXcd GrushinData::E0_adjoint(const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(solver_->n + 1);
  rhs.head(solver_->n) = b;
  const Eigen::VectorXcd x = solver_->lu.adjoint().solve(rhs);
  return x.head(solver_->n);
}

double GrushinData::e_plus() const { return -u_.dot(C(u_)).real(); }
double GrushinData::e_minus() const { return -u_star_.dot(C(u_star_)).real(); }

cplx GrushinData::f() const { return u_.dot(C(E0(C(u_star_)))); }

Eigen::Matrix2cd GrushinData::eminusplus(double lambda, int order) const {
  if (order < 1) throw std::invalid_argument("series order must be at least 1");
  const Eigen::Index n = u_.size();
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(2 * n, 2);
  W.col(0).head(n) = u_;
  W.col(1).tail(n) = u_star_;
  auto C4 = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(2 * n);
    out.head(n) = C(v.head(n));
    out.tail(n) = C(v.tail(n));
    return out;
  };
  auto E = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(2 * n);
    out.head(n) = E0(v.tail(n));
    out.tail(n) = E0_adjoint(v.head(n));
    return out;
  };
  Eigen::Matrix2cd M = Eigen::Matrix2cd::Zero();
  Eigen::MatrixXcd V(2 * n, 2);
  for (int j = 0; j < 2; ++j) V.col(j) = C4(W.col(j));
  double lp = lambda;
  for (int l = 0; l < order; ++l) {
    const double coef = (l % 2 == 0 ? -1.0 : 1.0) * lp;
    M += coef * (W.adjoint() * V);
    lp *= lambda;
    if (l + 1 < order)
      for (int j = 0; j < 2; ++j) V.col(j) = C4(E(V.col(j)));
  }
  return M;
}

GrushinData GrushinData::rephased(cplx phase_u, cplx phase_u_star) const {
  GrushinData g = *this;
  g.u_ *= phase_u;
  g.u_star_ *= phase_u_star;
  return g;
}

EPair e_plus_minus(const Model& model, double alpha, cplx k, int N) {
  const PlaneWaveBasis b(N, k);
  const KernelPair kp = kernel_vector(model, alpha, b);
  const SpMat C = assemble_C(model, b);
  return {-kp.u.dot(C * kp.u).real(), -kp.u_star.dot(C * kp.u_star).real()};
}

double e_direct(const Model& model, double alpha, cplx k, int N) {
  const EPair p = e_plus_minus(model, alpha, k, N);
  if (std::abs(p.e_plus - p.e_minus) > 1e-8)
    throw std::logic_error("e_+ and e_- differ: " + std::to_string(p.e_plus) + " vs " + std::to_string(p.e_minus));
  return -p.e_plus;
}

cplx f_of_k(const Model& model, double alpha, cplx k, int N) { return GrushinData(model, alpha, k, N).f(); }

Eigen::Vector2d grushin_bands(const GrushinData& g, double lambda, int order) {
  const Eigen::Matrix2cd M = -g.eminusplus(lambda, order);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::Vector2d direct_bands(const Model& model, double alpha, double lambda, cplx k, int N) {
  const Eigen::VectorXd v = refined_levels(model, alpha, lambda, k, N, 2);
  return Eigen::Vector2d(v(0), v(1));
}

namespace {

std::vector<double> ratios(const std::vector<TheoremRow>& rows, double TheoremRow::*field) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) out.push_back(rows[i].*field / rows[i + 1].*field);
  return out;
}

std::vector<double> log2_of(std::vector<double> v) {
  for (double& x : v) x = std::log2(x);
  return v;
}

}  // namespace

std::vector<double> TheoremReport::residual_ratios() const { return ratios(rows, &TheoremRow::residual); }
std::vector<double> TheoremReport::mean_residual_ratios() const { return ratios(rows, &TheoremRow::mean_residual); }
std::vector<double> TheoremReport::residual_orders() const { return log2_of(residual_ratios()); }
std::vector<double> TheoremReport::mean_residual_orders() const { return log2_of(mean_residual_ratios()); }

TheoremReport theorem_check(const Model& model, double alpha, cplx k, const std::vector<double>& lambdas, int N) {
  const GrushinData g(model, alpha, k, N);
  TheoremReport rep;
  rep.k = k;
  rep.e = g.e();
  rep.abs_f = std::abs(g.f());
  for (double lambda : lambdas) {
    TheoremRow row;
    row.lambda = lambda;
    row.direct = direct_bands(model, alpha, lambda, k, N);
    const double lin = rep.e * lambda;
    const double quad = rep.abs_f * lambda * lambda;
    row.predicted = Eigen::Vector2d(lin - quad, lin + quad);
    row.residual = (row.direct - row.predicted).cwiseAbs().maxCoeff();
    row.mean_residual = std::abs(0.5 * (row.direct(0) + row.direct(1)) - lin);
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<CoefficientSample> coefficient_map(const Model& model, double alpha, const std::vector<cplx>& ks, int N,
                                               int threads) {
  std::vector<CoefficientSample> out(ks.size());
  parallel_for(ks.size(), threads, [&](std::size_t i) {
    const GrushinData g(model, alpha, ks[i], N);
    out[i] = {ks[i], g.e(), g.f()};
  });
  return out;
}

PropeResiduals prope_residuals(const Model& model, double alpha, const std::vector<cplx>& ks, int line_points, int N,
                               int threads) {
  std::vector<cplx> pts;
  for (cplx k : ks) {
    pts.push_back(k);
    pts.push_back(-k);
    pts.push_back(std::conj(k));
    pts.push_back(omega * k);
    pts.push_back(k + dual_b1);
  }
  const std::size_t line_start = pts.size();
  for (int j = 0; j < line_points; ++j) {
    const double x = -2.5 + 5.0 * (j + 0.5) / line_points;
    for (cplx r : {cplx(1.0), omega, omega_bar}) pts.push_back(r * x);
  }
  std::vector<double> e(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { e[i] = e_direct(model, alpha, pts[i], N); });

  PropeResiduals r;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double* v = e.data() + 5 * i;
    r.odd = std::max(r.odd, std::abs(v[0] + v[1]));
    r.reflection = std::max(r.reflection, std::abs(v[0] + v[2]));
    r.rotation = std::max(r.rotation, std::abs(v[3] - v[0]));
    r.periodicity = std::max(r.periodicity, std::abs(v[4] - v[0]));
    for (int j = 0; j < 5; ++j) r.max_abs_e = std::max(r.max_abs_e, std::abs(v[j]));
  }
  for (std::size_t i = line_start; i < pts.size(); ++i) r.real_line = std::max(r.real_line, std::abs(e[i]));
  return r;
}

}  // namespace tbg
