#pragma once

// Uniform grids on the torus C / Lambda and evaluation of Fourier series
//
//   f(z) = sum_j c_j exp(i <z, q_j>),   q_j in one coset q_0 + Lambda*,
//
// at every grid node.

#include <Eigen/Dense>
#include <vector>

#include "tbg/lattice.hpp"

namespace tbg {

/// Nodes z(a, b) = ((a + shift) + (b + shift) omega) / G, a, b = 0..G-1,
/// stored row-major (index a * G + b).  The default half-cell shift keeps
/// every node off Lambda.
struct TorusGrid {
  int G = 96;
  double shift = 0.5;

  TorusGrid() = default;
  explicit TorusGrid(int G_, double shift_ = 0.5);

  std::size_t size() const { return static_cast<std::size_t>(G) * static_cast<std::size_t>(G); }
  cplx point(int a, int b) const;
  cplx operator[](std::size_t flat) const { return point(static_cast<int>(flat / G), static_cast<int>(flat % G)); }
  /// Trapezoidal weight of one node (cell area / G^2).
  double weight() const { return cell_area / (static_cast<double>(G) * G); }

  /// sum_j weight * values[j]
  cplx integrate(const std::vector<cplx>& values) const;
  double integrate(const std::vector<double>& values) const;
};

/// Direct evaluation at a single point.
cplx evaluate_series(const std::vector<cplx>& momenta, const Eigen::VectorXcd& coefficients, cplx z);

/// Values at every node of the grid.  The momenta must share one coset of
/// Lambda*; throws std::invalid_argument otherwise.
std::vector<cplx> sample_series(const std::vector<cplx>& momenta, const Eigen::VectorXcd& coefficients,
                                const TorusGrid& grid);

}  // namespace tbg
