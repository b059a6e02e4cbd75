#pragma once

// Plane-wave discretization of the Bloch operators D(alpha) + k and H_k(alpha, lambda).
//
// A PlaneWaveBasis describes C^2-valued functions; component 0 carries momenta
// in -K + k + Lambda*, component 1 in K + k + Lambda*.  C^4-valued functions
// use two copies (w1 = first half, w2 = second half), so H_k has dimension
// 2 * basis.size().
//
// The truncation keeps every momentum q with |q| <= R in absolute terms, with
// R chosen so the disc holds about (2N + 1)^2 dual cells per component.  Since
// the disc is centred at 0 rather than at k, the bases at k and k + p (p in
// Lambda*) contain exactly the same momenta, and rotations by omega,
// conjugation and q -> -q map bases onto bases.

#include <optional>
#include <vector>

#include "tbg/eigensolve.hpp"
#include "tbg/lattice.hpp"
#include "tbg/potentials.hpp"

namespace tbg {

struct Model {
  FourierPotential U = make_U();
  FourierPotential V = make_V();
};

class PlaneWaveBasis {
 public:
  PlaneWaveBasis(int N, cplx k);

  int N() const { return N_; }
  cplx k() const { return k_; }
  double radius() const { return radius_; }
  std::size_t size() const { return momenta_.size(); }
  /// Start of component 1.
  std::size_t split() const { return split_; }

  static cplx offset(int comp) { return comp == 0 ? cplx(-K, 0.0) : cplx(K, 0.0); }

  /// Absolute momentum q (offset + k + dual lattice vector) of basis function i.
  cplx momentum(std::size_t i) const { return momenta_[i]; }
  const std::vector<cplx>& momenta() const { return momenta_; }
  int component(std::size_t i) const { return i < split_ ? 0 : 1; }
  LatticeCoords coords(std::size_t i) const { return coords_[i]; }

  /// Index of the basis function of component `comp` with absolute momentum q.
  std::optional<std::size_t> find(int comp, cplx q) const;

  /// perm[i] = index in `other` with the same component and absolute momentum
  /// as function i of this basis.  Throws if the momentum sets differ.
  std::vector<std::size_t> matching(const PlaneWaveBasis& other) const;

 private:
  int N_;
  cplx k_;
  double radius_;
  std::size_t split_ = 0;
  std::vector<cplx> momenta_;
  std::vector<LatticeCoords> coords_;
  int box_ = 0;                  // lattice coordinates lie in [-box_, box_]
  std::vector<int> lookup_;      // (comp, m, n) -> index or -1
};

/// Diagonal part: the multipliers q (absolute momenta) of 2 D_zbar + k.
SpMat assemble_R(const PlaneWaveBasis& b);
/// Potential coupling of D(1): component 1 -> 0 by U(z), component 0 -> 1 by U(-z).
SpMat assemble_P(const FourierPotential& U, const PlaneWaveBasis& b);
/// D(alpha) + k.
SpMat assemble_D(const Model& model, cplx alpha, const PlaneWaveBasis& b);
/// C = [[0, V(z)], [V(-z), 0]].
SpMat assemble_C(const Model& model, const PlaneWaveBasis& b);
/// H_k(alpha, lambda) = [[lambda C, A^*], [A, lambda C]] with A = D(alpha) + k.
SpMat assemble_H(const Model& model, cplx alpha, double lambda, const PlaneWaveBasis& b);

struct BandResult {
  KPoint k;
  std::vector<int> labels;          // ..., -2, -1, 1, 2, ...
  std::vector<double> energies;     // ascending
  Eigen::MatrixXcd vectors;         // optional, columns match energies
};

/// The `count` eigenvalues of H_k nearest to 0, ascending, labelled outward
/// from 0 (an even set is computed; for odd counts the most negative is dropped).
BandResult bands(const Model& model, cplx alpha, double lambda, cplx k, int N, int count, bool with_vectors = false,
                 const EigOptions& opt = {});

/// The `count` eigenvalues of H_k nearest 0 (count even), ascending, refined by
/// a compensated Rayleigh-Ritz step on the computed eigenvectors.  Accurate to
/// ~1e-16 ||H|| when the requested cluster is well separated from the rest.
Eigen::VectorXd refined_levels(const Model& model, cplx alpha, double lambda, cplx k, int N, int count = 2,
                               const EigOptions& opt = {});

/// E_1(alpha, 0, k): the smallest singular value of D(alpha) + k.
double chiral_band(const Model& model, cplx alpha, cplx k, int N, const EigOptions& opt = {});

class NotSimpleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KernelPair {
  Eigen::VectorXcd u;        // (D(alpha) + k) u ~ 0
  Eigen::VectorXcd u_star;   // (D(alpha) + k)^* u_star ~ 0
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Normalized kernel vectors of D(alpha) + k and its adjoint.  Throws
/// NotSimpleError when sigma2 < 100 sigma1.
KernelPair kernel_vector(const Model& model, cplx alpha, const PlaneWaveBasis& b, const EigOptions& opt = {});

/// max over the grid of E_1(alpha, 0, k).
double flat_band_residual(const Model& model, cplx alpha, int N, const KGrid& grid, int threads = 0);

}  // namespace tbg
