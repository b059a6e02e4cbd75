#include "tbg/theta.hpp"

#include <cmath>
#include <string>

#include "tbg/symmetry.hpp"

namespace tbg {

ThetaFunction::ThetaFunction(int M) : M_(M) {
  if (M < 1) throw std::invalid_argument("theta truncation order must be positive");
  const cplx i(0.0, 1.0);
  q_ = std::exp(i * pi * omega);
  q_quarter_ = std::exp(i * pi * omega / 4.0);
  cplx prod = 1.0;
  q2n_.resize(M);
  for (int n = 1; n <= M; ++n) {
    q2n_[n - 1] = std::pow(q_, 2 * n);
    const cplx f = 1.0 - q2n_[n - 1];
    prod *= f * f * f;
  }
  prime0_ = 2.0 * pi * q_quarter_ * prod;
}

cplx ThetaFunction::operator()(cplx z) const {
  const cplx i(0.0, 1.0);
  const cplx e = std::exp(2.0 * pi * i * z);
  const cplx einv = 1.0 / e;
  cplx prod = 2.0 * q_quarter_ * std::sin(pi * z);
  for (cplx q2n : q2n_) prod *= (1.0 - q2n) * (1.0 - q2n * e) * (1.0 - q2n * einv);
  return prod;
}

const ThetaFunction& default_theta() {
  static const ThetaFunction t(12);
  return t;
}

cplx theta(cplx z) { return default_theta()(z); }
cplx theta_prime_0() { return default_theta().prime_at_zero(); }

cplx green_normalization(cplx k) {
  if (in_dual_lattice(k)) throw ThetaError("k on dual lattice");
  return cplx(0.0, 2.0 * pi) * theta(z_of_k(k)) / theta_prime_0();
}

cplx green_function(cplx z, cplx k) {
  if (in_dual_lattice(k)) throw ThetaError("k on dual lattice");
  if (in_lattice(z)) throw ThetaError("z at pole");
  return std::exp(-z.imag() * k) * theta(z - z_of_k(k)) / theta(z);
}

namespace {

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

}  // namespace

TransformationResiduals transformation_checks(cplx k, int samples) {
  TransformationResiduals r;
  const cplx zk = z_of_k(k);
  const cplx rot = omega_bar * theta(zk) / theta(omega_bar * zk);
  const cplx refl0 = -theta(z_of_k(std::conj(k))) / std::conj(theta(zk));
  const cplx refl = refl0 * std::conj(theta_prime_0()) / theta_prime_0();
  for (cplx z : cell_samples(samples)) {
    r.rotation = std::max(r.rotation, rel_diff(green_function(omega * z, k), rot * green_function(z, omega_bar * k)));
    const cplx lhs = green_function(z, -std::conj(k));
    const cplx mirrored = std::conj(green_function(std::conj(z), k));
    r.reflection = std::max(r.reflection, rel_diff(lhs, refl * mirrored));
    r.reflection_unit_phase = std::max(r.reflection_unit_phase, rel_diff(lhs, refl0 * mirrored));
  }
  return r;
}

ZeroMode build_zero_mode(const Model& model, double alpha, int N, double tol) {
  const SymmetryBasis sb(N, {cplx(0.0)});
  const PlaneWaveBasis& b = sb.block(0);
  const KernelPair kp = kernel_vector(model, alpha, b);
  const SymmetryOperator E = build("E", sb);
  const Eigen::VectorXcd Eu = E.apply(kp.u);
  const cplx i(0.0, 1.0);
  const double plus = (Eu - i * kp.u).norm();
  const double minus = (Eu + i * kp.u).norm();
  ZeroMode zm;
  zm.alpha = alpha;
  zm.u0 = kp.u;
  if (plus < tol && minus >= tol) {
    zm.sign = 1;
    zm.sign_residual = plus;
  } else if (minus < tol && plus >= tol) {
    zm.sign = -1;
    zm.sign_residual = minus;
  } else {
    throw ZeroModeError("zero mode has no definite chirality (residuals " + std::to_string(plus) + ", " +
                        std::to_string(minus) + ")");
  }
  const auto n0 = static_cast<Eigen::Index>(b.split());
  zm.momenta.assign(b.momenta().begin(), b.momenta().begin() + n0);
  zm.psi = kp.u.head(n0);
  return zm;
}

AnalyticKernel::AnalyticKernel(ZeroMode zm, const TorusGrid& grid) : zm_(std::move(zm)), grid_(grid) {
  psi_plus_ = sample_series(zm_.momenta, zm_.psi, grid_);
  std::vector<cplx> neg(zm_.momenta.size());
  for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -zm_.momenta[j];
  psi_minus_ = sample_series(neg, zm_.psi, grid_);
}

std::vector<cplx> AnalyticKernel::green_samples(cplx k) const {
  if (in_dual_lattice(k)) throw ThetaError("k on dual lattice");
  std::vector<cplx> out(grid_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = green_function(grid_[j], k);
  return out;
}

double AnalyticKernel::normalization(cplx k) const {
  const auto F = green_samples(k);
  std::vector<double> w(F.size());
  for (std::size_t j = 0; j < F.size(); ++j)
    w[j] = std::norm(F[j]) * (std::norm(psi_plus_[j]) + std::norm(psi_minus_[j]));
  return 1.0 / std::sqrt(grid_.integrate(w));
}

AnalyticKernel::Samples AnalyticKernel::samples(cplx k) const {
  const auto F = green_samples(k);
  std::vector<double> w(F.size());
  for (std::size_t j = 0; j < F.size(); ++j)
    w[j] = std::norm(F[j]) * (std::norm(psi_plus_[j]) + std::norm(psi_minus_[j]));
  Samples s;
  s.c = 1.0 / std::sqrt(grid_.integrate(w));
  const cplx si(0.0, static_cast<double>(zm_.sign));
  s.first.resize(F.size());
  s.second.resize(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) {
    s.first[j] = s.c * F[j] * psi_plus_[j];
    s.second[j] = s.c * F[j] * si * psi_minus_[j];
  }
  return s;
}

double AnalyticKernel::e_plus_theta(const FourierPotential& V, cplx k) const {
  std::vector<cplx> q;
  Eigen::VectorXcd a(static_cast<Eigen::Index>(V.terms().size()));
  for (const auto& t : V.terms()) {
    a(static_cast<Eigen::Index>(q.size())) = t.amplitude;
    q.push_back(t.momentum);
  }
  const auto Vz = sample_series(q, a, grid_);
  const auto F = green_samples(k);
  std::vector<double> norm(F.size()), num(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) {
    const double f2 = std::norm(F[j]);
    norm[j] = f2 * (std::norm(psi_plus_[j]) + std::norm(psi_minus_[j]));
    num[j] = f2 * (Vz[j] * psi_minus_[j] * std::conj(psi_plus_[j])).imag();
  }
  return zm_.sign * 2.0 * grid_.integrate(num) / grid_.integrate(norm);
}

double AnalyticKernel::overlap_with_numeric(const Model& model, cplx k, int N) const {
  const PlaneWaveBasis b(N, k);
  const KernelPair kp = kernel_vector(model, zm_.alpha, b);
  const auto n0 = static_cast<Eigen::Index>(b.split());
  const auto n1 = static_cast<Eigen::Index>(b.size()) - n0;
  const std::vector<cplx> q0(b.momenta().begin(), b.momenta().begin() + n0);
  const std::vector<cplx> q1(b.momenta().begin() + n0, b.momenta().end());
  const auto v0 = sample_series(q0, kp.u.head(n0), grid_);
  const auto v1 = sample_series(q1, kp.u.tail(n1), grid_);
  const Samples a = samples(k);
  cplx dot = 0.0;
  double na = 0.0, nv = 0.0;
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    const cplx phase = std::polar(1.0, -inner(grid_[j], k));
    const cplx w0 = phase * v0[j];
    const cplx w1 = phase * v1[j];
    dot += std::conj(a.first[j]) * w0 + std::conj(a.second[j]) * w1;
    na += std::norm(a.first[j]) + std::norm(a.second[j]);
    nv += std::norm(w0) + std::norm(w1);
  }
  return std::abs(dot) / std::sqrt(na * nv);
}

}  // namespace tbg
