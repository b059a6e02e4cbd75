#pragma once

// Symmetry operators of the Hamiltonian as generalized-permutation matrices on
// a union of plane-wave bases, and checks of their algebraic identities.

#include <string>
#include <vector>

#include "tbg/planewave.hpp"

namespace tbg {

/// Plane-wave bases at every k of the orbit of `seeds` under k -> -k,
/// k -> conj(k), k -> omega k (mod Lambda*).  C^2 vectors are the blocks
/// concatenated; C^4 vectors put, per block, the two C^2 copies in the order
/// used by assemble_H.
class SymmetryBasis {
 public:
  SymmetryBasis(int N, const std::vector<cplx>& seeds);
  /// Orbit of {0, K, -K}.
  static SymmetryBasis high_symmetry(int N);

  int N() const { return N_; }
  int blocks() const { return static_cast<int>(bases_.size()); }
  const PlaneWaveBasis& block(int b) const { return bases_[b]; }
  cplx k(int b) const { return bases_[b].k(); }
  /// Block whose k is congruent to `k`, or -1.
  int block_of(cplx k) const;

  std::size_t size2() const { return size2_; }
  std::size_t size4() const { return 2 * size2_; }
  std::size_t index2(int b, std::size_t i) const { return offset_[b] + i; }
  std::size_t index4(int b, int copy, std::size_t i) const {
    return 2 * offset_[b] + static_cast<std::size_t>(copy) * bases_[b].size() + i;
  }

  /// (block, index) of component `comp` at absolute momentum q; throws if the
  /// momentum is outside the truncation.
  std::pair<int, std::size_t> locate(int comp, cplx q) const;

 private:
  int N_;
  std::vector<PlaneWaveBasis> bases_;
  std::vector<std::size_t> offset_;
  std::size_t size2_ = 0;
};

/// v -> matrix * v, or v -> matrix * conj(v) when antilinear.
struct SymmetryOperator {
  std::string name;
  SpMat matrix;
  bool antilinear = false;

  /// (M1, c1)(M2, c2) = (M1 conj^{c1}(M2), c1 xor c2)
  SymmetryOperator operator*(const SymmetryOperator& o) const;
  /// Inverse of a unitary operator.
  SymmetryOperator inverse() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
};

/// s A (scalar applied after A)
SymmetryOperator operator*(cplx s, const SymmetryOperator& a);

SymmetryOperator linear_operator(const SpMat& m, std::string name);

/// Operators on C^2 vectors: Omega, Q, H, E, N, inversion, L_gamma.
/// Operators on C^4 vectors: C, PT, S, M, U+, U-, L4_gamma.
/// The C^4 translation is named "L4" to keep the two apart.
SymmetryOperator build(const std::string& name, const SymmetryBasis& b, cplx gamma = 0.0);

/// tau(p) as a map from the basis at k + p to the basis at k (same absolute
/// momenta): tau(p)^* (D + k) tau(p) = D + k + p.
SpMat tau(const PlaneWaveBasis& at_k_plus_p, const PlaneWaveBasis& at_k);

/// Block-diagonal D(alpha) and H(alpha, lambda) over the blocks of `b`.
SpMat union_D(const Model& model, cplx alpha, const SymmetryBasis& b);
SpMat union_H(const Model& model, cplx alpha, double lambda, const SymmetryBasis& b);

/// Projector onto L2_{k,p}: the part of block k where C acts by omega_bar^p.
/// Requires omega k = k mod Lambda*.
SpMat subspace_projector(const SymmetryBasis& b, cplx k, int p);

/// max |entry| of the difference; infinity if the antilinear flags differ.
double residual(const SymmetryOperator& a, const SymmetryOperator& b);

struct IdentityResidual {
  std::string name;
  double residual;
};
using SymmetryReport = std::vector<IdentityResidual>;

double worst(const SymmetryReport& r);

/// A^2 = I for PT, S, M, Q, H, N; E^2 = -I; C^3 = I.
SymmetryReport square_residuals(const SymmetryBasis& b);

/// Commutation with H(alpha, lambda) (PT, S, M), the D-level identities for
/// E, Q, H, N, the action of L_gamma on each block, and, for real alpha, the
/// anticommutation of U+ and U-.
SymmetryReport commutation_residuals(const Model& model, cplx alpha, double lambda, const SymmetryBasis& b);

/// Translation and rotation intertwining relations, projector algebra and the
/// mapping of each operator between the subspaces L2_{k,p}, k in {0, K, -K}.
/// `b` must be the high-symmetry union.
SymmetryReport mapping_checks(const SymmetryBasis& b);

struct ProtectedKernel {
  int plus_K = 0;
  int minus_K = 0;
};

/// Number of eigenvalues of H at k = K and k = -K with |E| < tol.
ProtectedKernel protected_kernel_dim(const Model& model, double alpha, double lambda, int N, double tol = 1e-9);

/// Kernel dimension of H restricted to L2_{k,p} for k in {K, -K}, p in Z_3
/// (dense, meant for small N); order K,0 K,1 K,2 -K,0 -K,1 -K,2.
std::vector<int> block_kernel_dims(const Model& model, double alpha, double lambda, int N, double tol = 1e-9);

/// max over k in {K, -K}, p of the distance between the spectrum of H on
/// L2_{k,p} and its negation (dense, meant for small N).
double block_spectral_asymmetry(const Model& model, double alpha, double lambda, int N);

}  // namespace tbg
