#include "tbg/magic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "tbg/parallel.hpp"

namespace tbg {

namespace {

// Largest of the m smallest singular values: zero exactly when dim ker >= m.
double kernel_defect(const Model& model, cplx alpha, const PlaneWaveBasis& b, int m) {
  return smallest_singular(assemble_D(model, alpha, b), m).sigma(m - 1);
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

std::string to_string(MagicMethod m) { return m == MagicMethod::RealScan ? "real-scan" : "birman-schwinger"; }

double sigma_max(const SpMat& A) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(A.cols()) / std::sqrt(static_cast<double>(A.cols()));
  double s = 0.0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXcd w = A.adjoint() * (A * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - s) < 1e-10 * next) return next;
    s = next;
  }
  return s;
}

std::vector<std::pair<double, double>> scan_sigma_min(const Model& model, const RealScanOptions& opt) {
  if (!(opt.hi > opt.lo) || opt.step <= 0.0) throw std::invalid_argument("invalid alpha scan range");
  const int n = static_cast<int>(std::floor((opt.hi - opt.lo) / opt.step + 1e-9)) + 1;
  std::vector<std::pair<double, double>> out(n);
  const PlaneWaveBasis b(opt.N, opt.probe);
  parallel_for(n, opt.threads, [&](std::size_t i) {
    const double a = opt.lo + opt.step * static_cast<double>(i);
    out[i] = {a, smallest_singular(assemble_D(model, a, b), 1).sigma(0)};
  });
  return out;
}

cplx polish_magic(const Model& model, cplx alpha, int N, cplx probe, int m, bool real_only) {
  const PlaneWaveBasis b(N, probe);
  const SpMat R = assemble_R(b);
  const SpMat P = assemble_P(model.U, b);
  double obj = kernel_defect(model, alpha, b, m);
  for (int it = 0; it < 12 && obj > 1e-15; ++it) {
    const SpMat A = R + alpha * P;
    const auto st = smallest_singular(A, m);
    const Eigen::MatrixXcd a = st.left.adjoint() * (A * st.right);
    const Eigen::MatrixXcd p = st.left.adjoint() * (P * st.right);
    const Eigen::MatrixXcd step = -p.fullPivLu().solve(a);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(step, false);
    cplx delta = es.eigenvalues()(0);
    for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i)) < std::abs(delta)) delta = es.eigenvalues()(i);
    if (real_only) delta = delta.real();
    if (!(std::abs(delta) > 1e-17 * std::abs(alpha))) break;
    const cplx next = alpha + delta;
    const double next_obj = kernel_defect(model, next, b, m);
    if (!(next_obj < obj)) break;
    alpha = next;
    obj = next_obj;
  }
  return alpha;
}

int multiplicity(const Model& model, cplx alpha, int N, cplx probe, cplx probe2, double rel) {
  auto count_at = [&](cplx k) {
    const PlaneWaveBasis b(N, k);
    const SpMat A = assemble_D(model, alpha, b);
    const double thresh = rel * sigma_max(A);
    const auto st = smallest_singular(A, 4);
    int c = 0;
    for (Eigen::Index i = 0; i < st.sigma.size(); ++i) c += st.sigma(i) < thresh;
    return c;
  };
  const int m1 = count_at(probe), m2 = count_at(probe2);
  if (m1 != m2) {
    std::ostringstream msg;
    msg << "kernel dimension differs between probes at alpha=" << alpha << " (" << m1 << " vs " << m2 << ")";
    throw std::runtime_error(msg.str());
  }
  return m1;
}

std::vector<MagicAngleReport> find_real_magic(const Model& model, const RealScanOptions& opt) {
  const auto scan = scan_sigma_min(model, opt);
  const PlaneWaveBasis b(opt.N, opt.probe);
  auto sigma = [&](double a) { return smallest_singular(assemble_D(model, a, b), 1).sigma(0); };

  std::vector<MagicAngleReport> out;
  const int n = static_cast<int>(scan.size());
  for (int i = 0; i < n; ++i) {
    const double s = scan[i].second;
    if (s >= opt.dip) continue;
    const bool left_ok = i == 0 || s <= scan[i - 1].second;
    const bool right_ok = i == n - 1 || s <= scan[i + 1].second;
    if (!left_ok || !right_ok) continue;
    const double a = scan[std::max(i - 1, 0)].first;
    const double c = scan[std::min(i + 1, n - 1)].first;
    double alpha = golden_min(sigma, a, c, opt.tol);
    int m = 1;
    try {
      m = std::max(1, multiplicity(model, alpha, opt.N, opt.probe, second_probe, 1e-6));
    } catch (const std::runtime_error&) {
      m = 1;
    }
    alpha = polish_magic(model, alpha, opt.N, opt.probe, m, true).real();
    MagicAngleReport r;
    r.alpha = alpha;
    r.method = MagicMethod::RealScan;
    r.at_boundary = i == 0 || i == n - 1;
    r.residual = smallest_singular(assemble_D(model, alpha, b), 1).sigma(0);
    if (r.residual >= 1e-6) continue;
    r.multiplicity = multiplicity(model, alpha, opt.N, opt.probe);
    const bool dup = std::any_of(out.begin(), out.end(), [&](const MagicAngleReport& o) { return std::abs(o.alpha - r.alpha) < 1e-5; });
    if (!dup) out.push_back(r);
  }
  return out;
}

ComplexSearchResult find_complex_magic(const Model& model, const ComplexSearchOptions& opt) {
  const PlaneWaveBasis b(opt.N, opt.probe);
  const Eigen::MatrixXcd P(assemble_P(model.U, b));
  Eigen::MatrixXcd B(P.rows(), P.cols());
  for (Eigen::Index i = 0; i < P.rows(); ++i) B.row(i) = P.row(i) / b.momentum(i);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B, false);
  if (es.info() != Eigen::Success) throw EigenError("Birman-Schwinger eigenproblem failed");

  struct Candidate {
    cplx alpha;
    int copies;
  };
  std::vector<cplx> raw;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx mu = es.eigenvalues()(i);
    if (std::abs(mu) < 1e-8) continue;
    const cplx a = -1.0 / mu;
    if (a.real() < -1e-9 || a.imag() < -1e-9) continue;
    raw.push_back(a);
  }
  std::sort(raw.begin(), raw.end(), [](cplx x, cplx y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
    return x.imag() < y.imag();
  });
  std::vector<Candidate> cands;
  for (cplx a : raw) {
    auto it = std::find_if(cands.begin(), cands.end(), [&](const Candidate& c) { return std::abs(c.alpha - a) < opt.dedupe; });
    if (it != cands.end())
      ++it->copies;
    else
      cands.push_back({a, 1});
  }

  ComplexSearchResult out;
  const PlaneWaveBasis bv(opt.verify_N, opt.probe);
  for (std::size_t i = 0; i < cands.size() && static_cast<int>(i) < opt.count; ++i) {
    const int m = std::min(cands[i].copies, 2);
    cplx alpha = polish_magic(model, cands[i].alpha, opt.verify_N, opt.probe, m, false);
    if (std::abs(alpha.imag()) < 1e-12 * std::abs(alpha)) alpha = alpha.real();
    if (std::abs(alpha.real()) < 1e-12 * std::abs(alpha)) alpha = cplx(0.0, alpha.imag());
    const double defect = kernel_defect(model, alpha, bv, m);
    if (defect >= opt.accept) {
      out.rejected.push_back(cands[i].alpha);
      continue;
    }
    MagicAngleReport r;
    r.alpha = alpha;
    r.method = MagicMethod::BirmanSchwinger;
    r.residual = smallest_singular(assemble_D(model, alpha, bv), 1).sigma(0);
    try {
      r.multiplicity = multiplicity(model, alpha, opt.verify_N, opt.probe);
    } catch (const std::runtime_error&) {
      r.multiplicity = m;
    }
    out.verified.push_back(r);
  }
  return out;
}

}  // namespace tbg
