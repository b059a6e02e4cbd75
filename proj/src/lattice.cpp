#include "tbg/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace tbg {

std::pair<double, double> lattice_coordinates(cplx z) {
  const double y = z.imag() / omega.imag();
  const double x = z.real() - y * omega.real();
  return {x, y};
}

std::pair<double, double> dual_coordinates(cplx p) { return lattice_coordinates(p / dual_b1); }

namespace {

std::optional<LatticeCoords> round_coords(std::pair<double, double> xy, double tol) {
  const double m = std::round(xy.first);
  const double n = std::round(xy.second);
  if (std::abs(xy.first - m) > tol || std::abs(xy.second - n) > tol) return std::nullopt;
  return LatticeCoords{static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)};
}

}  // namespace

std::optional<LatticeCoords> in_lattice(cplx z, double tol) { return round_coords(lattice_coordinates(z), tol); }

std::optional<LatticeCoords> in_dual_lattice(cplx p, double tol) { return round_coords(dual_coordinates(p), tol); }

std::string to_string(KClass c) {
  switch (c) {
    case KClass::Gamma: return "Gamma";
    case KClass::K: return "K";
    case KClass::MinusK: return "-K";
    case KClass::Generic: return "generic";
  }
  return "?";
}

cplx reduce_to_cell(cplx k) {
  auto [x, y] = dual_coordinates(k);
  x -= std::floor(x);
  y -= std::floor(y);
  // floor can leave 1.0 after rounding of tiny negative inputs
  if (x >= 1.0) x -= 1.0;
  if (y >= 1.0) y -= 1.0;
  // snap values within the membership tolerance of the cell edge back to 0
  if (std::abs(x - 1.0) < lattice_tol) x = 0.0;
  if (std::abs(y - 1.0) < lattice_tol) y = 0.0;
  return x * dual_b1 + y * dual_b2;
}

KPoint classify_k(cplx k) {
  KPoint out{reduce_to_cell(k), KClass::Generic};
  if (in_dual_lattice(k)) {
    out.cls = KClass::Gamma;
  } else if (in_dual_lattice(k - K)) {
    out.cls = KClass::K;
  } else if (in_dual_lattice(k + K)) {
    out.cls = KClass::MinusK;
  }
  return out;
}

KGrid::KGrid(int n1_, int n2_) : n1(n1_), n2(n2_) {
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("k-grid dimensions must be positive");
}

cplx KGrid::at(int i, int j) const {
  return (static_cast<double>(i) / n1) * dual_b1 + (static_cast<double>(j) / n2) * dual_b2;
}

std::vector<cplx> KGrid::points() const {
  std::vector<cplx> out;
  out.reserve(size());
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) out.push_back(at(i, j));
  return out;
}

std::optional<int> KGrid::node_of(cplx k) const {
  auto [x, y] = dual_coordinates(k);
  const double fi = x * n1;
  const double fj = y * n2;
  const double ri = std::round(fi);
  const double rj = std::round(fj);
  if (std::abs(fi - ri) > 1e-7 || std::abs(fj - rj) > 1e-7) return std::nullopt;
  auto wrap = [](long v, int n) { return static_cast<int>(((v % n) + n) % n); };
  return wrap(static_cast<long>(ri), n1) * n2 + wrap(static_cast<long>(rj), n2);
}

KPath KPath::through(const std::vector<cplx>& vertices, int per_segment) {
  if (vertices.size() < 2) throw std::invalid_argument("k-path needs at least two vertices");
  if (per_segment < 1) throw std::invalid_argument("k-path needs at least one sample per segment");
  KPath path;
  double s = 0.0;
  for (std::size_t v = 0; v + 1 < vertices.size(); ++v) {
    const cplx a = vertices[v];
    const cplx b = vertices[v + 1];
    for (int i = 0; i < per_segment; ++i) {
      const double t = static_cast<double>(i) / per_segment;
      const cplx k = a + t * (b - a);
      if (!path.points.empty()) s += std::abs(k - path.points.back());
      path.points.push_back(k);
      path.arclength.push_back(s);
    }
  }
  s += std::abs(vertices.back() - path.points.back());
  path.points.push_back(vertices.back());
  path.arclength.push_back(s);
  return path;
}

KPath KPath::default_path(int per_segment) { return through({cplx(-K, 0.0), cplx(0.0, 0.0), cplx(K, 0.0)}, per_segment); }

}  // namespace tbg
