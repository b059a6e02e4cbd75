#pragma once

// Grushin reduction of H_k(alpha, lambda) at a simple real magic alpha to the
// 2 x 2 effective matrix E_-+(k, lambda), and the coefficients of its expansion
//
//   E_-+(k, lambda) = [[lambda e_+, lambda^2 f], [lambda^2 conj f, lambda e_-]] + O(lambda^3),
//   e_+ = -<u|C|u>,  e_- = -<u*|C|u*>,  f = <u|C E_0 C|u*>,
//
// where (D(alpha) + k) u = 0, (D(alpha) + k)^* u* = 0 and E_0 is the inverse of
// D(alpha) + k from u^perp to (u*)^perp composed with I - |u*><u*|.
//
// The two eigenvalues of H_k(alpha, lambda) nearest 0 are the eigenvalues of
// -E_-+(k, lambda), so the band coefficient is e = -e_+ = <u|C|u>:
//
//   E_{+-1}(k, lambda) = e lambda +- |f| lambda^2 + O(lambda^3).

#include <memory>
#include <vector>

#include "tbg/planewave.hpp"

namespace tbg {

class GrushinData {
 public:
  /// Throws NotSimpleError (from kernel_vector) when the kernel is not simple.
  GrushinData(const Model& model, double alpha, cplx k, int N = 12);

  double alpha() const { return alpha_; }
  cplx k() const { return k_; }
  const PlaneWaveBasis& basis() const { return *basis_; }
  const Eigen::VectorXcd& u() const { return u_; }
  const Eigen::VectorXcd& u_star() const { return u_star_; }
  double sigma1() const { return sigma1_; }
  double sigma2() const { return sigma2_; }

  /// E_0 b and E_0^* b, through the bordered matrix [[D + k, u*], [u^*, 0]].
  Eigen::VectorXcd E0(const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd E0_adjoint(const Eigen::VectorXcd& b) const;
  /// C on C^2 vectors.
  Eigen::VectorXcd C(const Eigen::VectorXcd& v) const { return *C_ * v; }

  double e_plus() const;
  double e_minus() const;
  /// -e_+, the linear coefficient of the two bands.
  double e() const { return -e_plus(); }
  cplx f() const;

  /// The Neumann series -sum_{l < order} (-1)^l lambda^{l+1} E_- C4 (E C4)^l E_+
  /// with E = [[0, E_0], [E_0^*, 0]], C4 = diag(C, C), E_+ = [(u, 0), (0, u*)].
  Eigen::Matrix2cd eminusplus(double lambda, int order) const;

  /// Copy with u and u* multiplied by unit phases (E_0 is unchanged).
  GrushinData rephased(cplx phase_u, cplx phase_u_star) const;

 private:
  struct Solver;
  double alpha_;
  cplx k_;
  std::shared_ptr<const PlaneWaveBasis> basis_;
  std::shared_ptr<const SpMat> C_;
  std::shared_ptr<const Solver> solver_;
  Eigen::VectorXcd u_;
  Eigen::VectorXcd u_star_;
  double sigma1_ = 0.0;
  double sigma2_ = 0.0;
};

/// e(k) = <u|C|u> from the plane-wave kernel vectors.  Computes both -e_+ and
/// -e_- and throws std::logic_error when they differ by more than 1e-8.
double e_direct(const Model& model, double alpha, cplx k, int N = 12);

struct EPair {
  double e_plus = 0.0;
  double e_minus = 0.0;
};
EPair e_plus_minus(const Model& model, double alpha, cplx k, int N = 12);

cplx f_of_k(const Model& model, double alpha, cplx k, int N = 12);

/// Eigenvalues of -E_-+(k, lambda) truncated at `order`, ascending.
Eigen::Vector2d grushin_bands(const GrushinData& g, double lambda, int order);

/// The two eigenvalues of H_k(alpha, lambda) nearest 0, ascending, with a
/// compensated Rayleigh-Ritz step on the computed eigenvectors.
Eigen::Vector2d direct_bands(const Model& model, double alpha, double lambda, cplx k, int N = 12);

struct TheoremRow {
  double lambda = 0.0;
  Eigen::Vector2d direct;      // E_-1, E_1
  Eigen::Vector2d predicted;   // e lambda -+ |f| lambda^2, ascending
  double residual = 0.0;       // max |direct - predicted|
  double mean_residual = 0.0;  // |(E_1 + E_-1) / 2 - e lambda|
};

struct TheoremReport {
  cplx k;
  double e = 0.0;
  double abs_f = 0.0;
  std::vector<TheoremRow> rows;
  /// log2(residual[i] / residual[i + 1]) for consecutive rows, which are
  /// expected to halve lambda; 3 for an O(lambda^3) remainder.
  std::vector<double> residual_orders() const;
  std::vector<double> mean_residual_orders() const;
  /// residual[i] / residual[i + 1]
  std::vector<double> residual_ratios() const;
  std::vector<double> mean_residual_ratios() const;
};

TheoremReport theorem_check(const Model& model, double alpha, cplx k, const std::vector<double>& lambdas, int N = 12);

struct CoefficientSample {
  cplx k;
  double e = 0.0;
  cplx f;
};

/// e and f at every point, in parallel with results stored by index.
std::vector<CoefficientSample> coefficient_map(const Model& model, double alpha, const std::vector<cplx>& ks, int N = 12,
                                               int threads = 0);

struct PropeResiduals {
  double odd = 0.0;        // max |e(k) + e(-k)|
  double reflection = 0.0; // max |e(k) + e(conj k)|
  double rotation = 0.0;   // max |e(omega k) - e(k)|
  double real_line = 0.0;  // max |e| on the real axis and its rotations
  double periodicity = 0.0;// max |e(k + p) - e(k)|
  double max_abs_e = 0.0;  // over the sample points
};

/// Checks of the symmetries of e at the given points (each point is also
/// evaluated at -k, conj k, omega k, k + b1), plus `line_points` samples of the
/// line through the K points and its omega rotations.
PropeResiduals prope_residuals(const Model& model, double alpha, const std::vector<cplx>& ks, int line_points = 8,
                               int N = 12, int threads = 0);

}  // namespace tbg
