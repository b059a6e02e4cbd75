#pragma once

// Magic parameters of the chiral model: alpha with ker(D(alpha) + k) != 0 for
// every k, detected at a single generic probe k0.

#include <string>
#include <vector>

#include "tbg/planewave.hpp"

namespace tbg {

inline const cplx default_probe{0.41, 0.27};
inline const cplx second_probe{-0.23, 0.61};

enum class MagicMethod { RealScan, BirmanSchwinger };

std::string to_string(MagicMethod m);

struct MagicAngleReport {
  cplx alpha;
  int multiplicity = 0;
  double residual = 0.0;      // smallest singular value of D(alpha) + k0
  MagicMethod method = MagicMethod::RealScan;
  bool at_boundary = false;   // scan minimum at the edge of the range
};

struct RealScanOptions {
  double lo = 0.3;
  double hi = 2.5;
  double step = 0.01;
  double dip = 0.1;           // local minima below this are refined
  double tol = 1e-6;          // golden-section bracket width
  int N = 12;
  cplx probe = default_probe;
  int threads = 0;
};

/// sigma_min(D(alpha) + k0) on a uniform alpha grid, then golden-section
/// refinement of each local minimum below `dip`, then a Newton polish.
std::vector<MagicAngleReport> find_real_magic(const Model& model, const RealScanOptions& opt = {});

/// The scan values themselves (alpha, sigma_min), for diagnostics.
std::vector<std::pair<double, double>> scan_sigma_min(const Model& model, const RealScanOptions& opt);

struct ComplexSearchOptions {
  int N = 10;                 // dense eigenproblem truncation
  int verify_N = 14;          // polish and verification truncation
  int count = 8;              // distinct first-quadrant candidates of smallest |alpha|
  double dedupe = 1e-4;
  double accept = 1e-6;       // sigma_min threshold at verify_N
  cplx probe = default_probe;
};

struct ComplexSearchResult {
  std::vector<MagicAngleReport> verified;
  std::vector<cplx> rejected;  // candidates failing verification
};

/// Eigenvalues mu of R^{-1} P (R the free diagonal, P the potential coupling of
/// D(1) at k0) give candidates alpha = -1/mu.  Keeps the first quadrant (the
/// set is invariant under alpha -> -alpha and alpha -> conj(alpha)).
ComplexSearchResult find_complex_magic(const Model& model, const ComplexSearchOptions& opt = {});

/// Refines alpha by Newton steps on the kernel condition using the near-kernel
/// singular vectors of D(alpha) + k0; `real_only` keeps alpha on the real axis.
cplx polish_magic(const Model& model, cplx alpha, int N, cplx probe, int multiplicity, bool real_only);

/// Number of singular values of D(alpha) + k below rel * sigma_max, at k0 and
/// at a second probe; throws if the probes disagree.
int multiplicity(const Model& model, cplx alpha, int N, cplx probe = default_probe, cplx probe2 = second_probe,
                 double rel = 1e-6);

/// Largest singular value of a sparse matrix (power iteration on A^* A).
double sigma_max(const SpMat& A);

}  // namespace tbg
