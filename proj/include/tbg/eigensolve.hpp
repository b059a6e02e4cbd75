#pragma once

// Nearest-to-zero eigenpairs of sparse Hermitian matrices and smallest
// singular triplets of sparse square matrices.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbg/lattice.hpp"

namespace tbg {

using SpMat = Eigen::SparseMatrix<cplx>;

class EigenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigOptions {
  int guard = 4;             // extra block vectors for shift-invert subspace iteration
  double tol = 1e-12;        // residual target relative to ||H||_inf
  double accept = 1e-8;      // residual still accepted after max_iter
  int max_iter = 400;
  long dense_limit = 400;    // dimensions up to this use a full dense solve
  double shift = 0.7e-9;     // shift for the sparse factorization
  bool force_dense = false;
  bool force_iterative = false;
};

struct EigenPairs {
  Eigen::VectorXd values;      // ascending
  Eigen::MatrixXcd vectors;    // columns match values
};

/// Full spectrum of a dense Hermitian matrix.
EigenPairs hermitian_dense(const Eigen::MatrixXcd& H, bool vectors = true);

/// The `count` eigenvalues of smallest modulus (sorted ascending by value) with
/// unit eigenvectors.  Small matrices are solved densely, large ones by
/// shift-invert block subspace iteration.
EigenPairs hermitian_nearest_zero(const SpMat& H, int count, const EigOptions& opt = {});

/// max_i sum_j |H_ij|
double norm_inf(const SpMat& H);

/// Rayleigh-Ritz values of H on span(X), with X^* H X and X^* X accumulated in
/// compensated arithmetic and the projected pencil solved in long double.
/// Accurate far below the double-precision floor of a full eigensolve when X
/// holds good approximations of eigenvectors.
Eigen::VectorXd accurate_ritz_values(const SpMat& H, const Eigen::MatrixXcd& X);

struct SingularTriplets {
  Eigen::VectorXd sigma;     // ascending
  Eigen::MatrixXcd right;    // A right.col(i) = sigma(i) left.col(i)
  Eigen::MatrixXcd left;
};

/// The `count` smallest singular values of a square A with singular vectors.
/// Dense SVD for small A, otherwise inverse subspace iteration on A^* A using a
/// sparse LU of A.  Right vectors follow fix_gauge; left vectors of singular
/// values below 1e-13 ||A||_inf are gauged independently.
SingularTriplets smallest_singular(const SpMat& A, int count, const EigOptions& opt = {});

/// Same, from the nearest-zero eigenpairs of [[0, A^*], [A, 0]].
SingularTriplets smallest_singular_augmented(const SpMat& A, int count, const EigOptions& opt = {});

/// Multiplies v by the unit phase making its largest-modulus entry real positive
/// (first such entry on ties within 1e-12 relative).
void fix_gauge(Eigen::Ref<Eigen::VectorXcd> v);

/// [[0, A^*], [A, 0]]
SpMat chiral_augment(const SpMat& A);

}  // namespace tbg
