#pragma once

// Theta function theta_1(z | omega), the twisted Green's function F_k, the
// chiral zero mode u0 = (psi(z), +-i psi(-z)) at k = 0, and the analytic
// kernel vectors u(k) = c(k) F_k u0.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "tbg/planewave.hpp"
#include "tbg/torus.hpp"

namespace tbg {

class ThetaError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// theta(z) = 2 q^{1/4} sin(pi z) prod_{n=1}^{M} (1 - q^{2n})(1 - q^{2n} e^{2 pi i z})(1 - q^{2n} e^{-2 pi i z}),
/// q = exp(i pi omega), q^{1/4} = exp(i pi omega / 4).
class ThetaFunction {
 public:
  explicit ThetaFunction(int M = 12);

  int order() const { return M_; }
  cplx nome() const { return q_; }
  cplx operator()(cplx z) const;
  /// 2 pi q^{1/4} prod (1 - q^{2n})^3
  cplx prime_at_zero() const { return prime0_; }

 private:
  int M_;
  cplx q_;
  cplx q_quarter_;
  std::vector<cplx> q2n_;
  cplx prime0_;
};

const ThetaFunction& default_theta();
cplx theta(cplx z);
cplx theta_prime_0();

/// a(k) = 2 pi i theta(z(k)) / theta'(0).  Throws ThetaError for k in Lambda*.
cplx green_normalization(cplx k);

/// F_k(z) = exp((i/2)(z - conj z) k) theta(z - z(k)) / theta(z).  Throws
/// ThetaError for k in Lambda* or z in Lambda.
cplx green_function(cplx z, cplx k);

struct TransformationResiduals {
  double rotation = 0.0;     // F_k(omega z) vs (omega_bar theta(z(k)) / theta(omega_bar z(k))) F_{omega_bar k}(z)
  /// F_{-conj k}(z) vs -(theta(z(conj k)) / conj theta(z(k))) (conj theta'(0) / theta'(0)) conj F_k(conj z)
  double reflection = 0.0;
  /// the same without the factor conj theta'(0) / theta'(0) = exp(i pi / 4)
  double reflection_unit_phase = 0.0;
  double max() const { return std::max(rotation, reflection); }
};

/// Max residuals of the two identities over `samples` quasi-random z.
TransformationResiduals transformation_checks(cplx k, int samples = 64);

struct ZeroMode {
  double alpha = 0.0;
  int sign = 0;                    // E u0 = sign * i * u0
  std::vector<cplx> momenta;       // component 0 of the basis at k = 0
  Eigen::VectorXcd psi;            // Fourier coefficients of psi
  Eigen::VectorXcd u0;             // the C^2 kernel vector at k = 0 (unit norm)
  double sign_residual = 0.0;      // |E u0 - sign i u0|

  cplx psi_at(cplx z) const { return evaluate_series(momenta, psi, z); }
};

class ZeroModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel of D(alpha) at k = 0 and its chirality.  Throws ZeroModeError when
/// neither sign fits within `tol` (alpha not a simple real magic value).
ZeroMode build_zero_mode(const Model& model, double alpha, int N = 12, double tol = 1e-6);

/// psi(z), psi(-z), F-independent parts of the analytic representation
/// sampled once on a torus grid.
class AnalyticKernel {
 public:
  AnalyticKernel(ZeroMode zm, const TorusGrid& grid = TorusGrid());

  const ZeroMode& zero_mode() const { return zm_; }
  const TorusGrid& grid() const { return grid_; }
  const std::vector<cplx>& psi_plus() const { return psi_plus_; }    // psi(z)
  const std::vector<cplx>& psi_minus() const { return psi_minus_; }  // psi(-z)

  /// F_k on the grid.
  std::vector<cplx> green_samples(cplx k) const;

  /// c(k) > 0 with c(k)^{-2} = int |F_k|^2 (|psi(z)|^2 + |psi(-z)|^2) dm.
  double normalization(cplx k) const;

  struct Samples {
    double c = 0.0;
    std::vector<cplx> first;   // c F_k psi(z)
    std::vector<cplx> second;  // c F_k sign i psi(-z)
  };
  /// u(k) = c(k) F_k u0 on the grid.
  Samples samples(cplx k) const;

  /// e_+(k) = sign 2 c(k)^2 int |F_k|^2 Im(V(z) psi(-z) conj psi(z)) dm.
  double e_plus_theta(const FourierPotential& V, cplx k) const;
  /// The band coefficient e = -e_+ (see perturb.hpp).
  double e_theta(const FourierPotential& V, cplx k) const { return -e_plus_theta(V, k); }

  /// |<u_analytic | u_numeric>| / (|u_analytic| |u_numeric|) with u_numeric the
  /// plane-wave kernel vector of D(alpha) + k at truncation N, moved to the
  /// periodic picture by exp(-i <z, k>).
  double overlap_with_numeric(const Model& model, cplx k, int N) const;

 private:
  ZeroMode zm_;
  TorusGrid grid_;
  std::vector<cplx> psi_plus_;
  std::vector<cplx> psi_minus_;
};

}  // namespace tbg
