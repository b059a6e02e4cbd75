#pragma once

// Geometry of the hexagonal moire lattice.
//
// Real space lattice:   Lambda  = Z + omega Z,            omega = exp(2 pi i / 3)
// Dual (momentum) lattice: Lambda* = (4 pi i / sqrt 3) Lambda
// Pairing:               <z, w> = Re(z conj(w))
//
// All momenta in this library are complex numbers; a plane wave with momentum q
// is exp(i <z, q>).

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tbg {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt3 = std::numbers::sqrt3;

inline const cplx omega{-0.5, sqrt3 / 2.0};
inline const cplx omega_bar{-0.5, -sqrt3 / 2.0};

/// The K point, 4 pi / 3 (real).
inline constexpr double K = 4.0 * pi / 3.0;

/// Basis of the dual lattice: b1 = 4 pi i / sqrt 3, b2 = omega b1.
inline const cplx dual_b1{0.0, 4.0 * pi / sqrt3};
inline const cplx dual_b2 = omega * dual_b1;

/// Area of the fundamental cell of Lambda.
inline constexpr double cell_area = sqrt3 / 2.0;
/// Area of the fundamental cell of Lambda*.
inline constexpr double dual_cell_area = (4.0 * pi / sqrt3) * (4.0 * pi / sqrt3) * sqrt3 / 2.0;

/// Absolute tolerance on integer residuals for lattice membership.
inline constexpr double lattice_tol = 1e-9;

/// Real pairing <z, w> = Re(z conj(w)).
inline double inner(cplx z, cplx w) { return z.real() * w.real() + z.imag() * w.imag(); }

struct LatticeCoords {
  std::int64_t m = 0;
  std::int64_t n = 0;
  friend bool operator==(const LatticeCoords&, const LatticeCoords&) = default;
};

/// Real coordinates (x, y) with z = x + y omega.
std::pair<double, double> lattice_coordinates(cplx z);
/// Real coordinates (x, y) with p = (x + y omega) 4 pi i / sqrt 3.
std::pair<double, double> dual_coordinates(cplx p);

/// Integer coordinates of z in Lambda, if z is a lattice point.
std::optional<LatticeCoords> in_lattice(cplx z, double tol = lattice_tol);
/// Integer coordinates of p in Lambda*, if p is a dual lattice point.
std::optional<LatticeCoords> in_dual_lattice(cplx p, double tol = lattice_tol);

inline cplx lattice_point(std::int64_t m, std::int64_t n) {
  return static_cast<double>(m) + static_cast<double>(n) * omega;
}
inline cplx dual_point(std::int64_t m, std::int64_t n) {
  return static_cast<double>(m) * dual_b1 + static_cast<double>(n) * dual_b2;
}

/// z(k) = sqrt(3) k / (4 pi i); maps Lambda* onto Lambda.
inline cplx z_of_k(cplx k) { return sqrt3 * k / cplx(0.0, 4.0 * pi); }

enum class KClass { Gamma, K, MinusK, Generic };

std::string to_string(KClass c);

struct KPoint {
  cplx k;       // representative in the fundamental cell of C / Lambda*
  KClass cls = KClass::Generic;
};

/// Reduces k into the parallelogram spanned by dual_b1, dual_b2 (anchored at 0).
cplx reduce_to_cell(cplx k);

/// Reduces k mod Lambda* and labels its congruence class.
KPoint classify_k(cplx k);

/// A uniform n1 x n2 grid over the fundamental cell of C / Lambda*:
/// k(i, j) = (i / n1) b1 + (j / n2) b2.
struct KGrid {
  int n1 = 0;
  int n2 = 0;

  KGrid(int n1_, int n2_);

  int size() const { return n1 * n2; }
  cplx at(int i, int j) const;
  cplx operator[](int flat) const { return at(flat / n2, flat % n2); }
  std::vector<cplx> points() const;

  /// Flat index of the node congruent to k mod Lambda*, if k is a node.
  std::optional<int> node_of(cplx k) const;
};

/// An ordered list of momenta with cumulative arclength, for 1-D band plots.
struct KPath {
  std::vector<cplx> points;
  std::vector<double> arclength;

  /// Piecewise-linear path through the given vertices with `per_segment` samples
  /// per segment (the final vertex is included once).
  static KPath through(const std::vector<cplx>& vertices, int per_segment);

  /// -K -> Gamma -> K along the real axis.
  static KPath default_path(int per_segment);
};

}  // namespace tbg
