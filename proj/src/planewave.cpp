#include "tbg/planewave.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tbg/parallel.hpp"

namespace tbg {

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

// Relative radius perturbations tried in order until no momentum sits on the circle.
constexpr double radius_nudges[] = {0.0, 1e-7, -1e-7, 3e-7, -3e-7, 1e-6, -1e-6, 3e-6, -3e-6};

void couple(const PlaneWaveBasis& b, int src, int dst, const FourierPotential& p, cplx coef, Triplets& out) {
  const std::size_t lo = src == 0 ? 0 : b.split();
  const std::size_t hi = src == 0 ? b.split() : b.size();
  for (std::size_t i = lo; i < hi; ++i)
    for (const auto& t : p.terms())
      if (auto j = b.find(dst, b.momentum(i) + t.momentum)) out.emplace_back(static_cast<int>(*j), static_cast<int>(i), coef * t.amplitude);
}

void require_k_coset(const FourierPotential& p) {
  if (p.charge() != 1)
    throw std::invalid_argument("potential " + p.name() + " does not couple the -K and +K cosets (momenta must lie in K + dual lattice)");
}

SpMat from_triplets(std::size_t n, const Triplets& t) {
  SpMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

PlaneWaveBasis::PlaneWaveBasis(int N, cplx k) : N_(N), k_(k) {
  if (N < 0) throw std::invalid_argument("truncation N must be nonnegative");
  const double r0 = (2 * N + 1) * std::sqrt(dual_cell_area / pi);
  const double b1 = std::abs(dual_b1);
  box_ = static_cast<int>(std::ceil(r0 * 1.01 / (b1 * sqrt3 / 2.0))) + 2;

  struct Candidate {
    int comp;
    LatticeCoords c;
    cplx q;
  };
  std::vector<Candidate> cand;
  for (int comp = 0; comp < 2; ++comp) {
    const cplx base = offset(comp) + k;
    auto [x, y] = dual_coordinates(-base);
    const long m0 = std::lround(x), n0 = std::lround(y);
    for (long m = m0 - box_; m <= m0 + box_; ++m)
      for (long n = n0 - box_; n <= n0 + box_; ++n) {
        const cplx q = base + dual_point(m, n);
        if (std::abs(q) <= r0 * 1.01) cand.push_back({comp, {m, n}, q});
      }
  }
  radius_ = r0;
  for (double d : radius_nudges) {
    const double r = r0 * (1.0 + d);
    bool clear = true;
    for (const auto& c : cand)
      if (std::abs(std::abs(c.q) - r) <= 1e-10 * r) {
        clear = false;
        break;
      }
    radius_ = r;
    if (clear) break;
  }
  for (const auto& c : cand) {
    if (std::abs(c.q) > radius_) continue;
    if (c.comp == 0) ++split_;
    momenta_.push_back(c.q);
    coords_.push_back(c.c);
  }

  const int side = 2 * box_ + 1;
  lookup_.assign(2 * side * side, -1);
  for (std::size_t i = 0; i < momenta_.size(); ++i) {
    const int comp = component(i);
    auto [x, y] = dual_coordinates(-(offset(comp) + k));
    const long m0 = std::lround(x), n0 = std::lround(y);
    const long dm = coords_[i].m - m0 + box_, dn = coords_[i].n - n0 + box_;
    lookup_[(comp * side + dm) * side + dn] = static_cast<int>(i);
  }
}

std::optional<std::size_t> PlaneWaveBasis::find(int comp, cplx q) const {
  const cplx base = offset(comp) + k_;
  auto [x, y] = dual_coordinates(q - base);
  const double mr = std::round(x), nr = std::round(y);
  if (std::abs(x - mr) > 1e-6 || std::abs(y - nr) > 1e-6) return std::nullopt;
  auto [cx, cy] = dual_coordinates(-base);
  const long dm = static_cast<long>(mr) - std::lround(cx) + box_;
  const long dn = static_cast<long>(nr) - std::lround(cy) + box_;
  const long side = 2 * box_ + 1;
  if (dm < 0 || dn < 0 || dm >= side || dn >= side) return std::nullopt;
  const int idx = lookup_[(comp * side + dm) * side + dn];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

std::vector<std::size_t> PlaneWaveBasis::matching(const PlaneWaveBasis& other) const {
  if (other.size() != size()) throw std::invalid_argument("bases have different sizes");
  std::vector<std::size_t> perm(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto j = other.find(component(i), momenta_[i]);
    if (!j || std::abs(other.momentum(*j) - momenta_[i]) > 1e-9) throw std::invalid_argument("bases hold different momenta");
    perm[i] = *j;
  }
  return perm;
}

SpMat assemble_R(const PlaneWaveBasis& b) {
  Triplets t;
  t.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), b.momentum(i));
  return from_triplets(b.size(), t);
}

SpMat assemble_P(const FourierPotential& U, const PlaneWaveBasis& b) {
  require_k_coset(U);
  Triplets t;
  t.reserve(2 * b.size() * U.terms().size());
  couple(b, 1, 0, U, 1.0, t);
  couple(b, 0, 1, U.negated(), 1.0, t);
  return from_triplets(b.size(), t);
}

SpMat assemble_D(const Model& model, cplx alpha, const PlaneWaveBasis& b) {
  require_k_coset(model.U);
  Triplets t;
  t.reserve(b.size() * (1 + 2 * model.U.terms().size()));
  for (std::size_t i = 0; i < b.size(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), b.momentum(i));
  if (alpha != 0.0) {
    couple(b, 1, 0, model.U, alpha, t);
    couple(b, 0, 1, model.U.negated(), alpha, t);
  }
  return from_triplets(b.size(), t);
}

SpMat assemble_C(const Model& model, const PlaneWaveBasis& b) {
  require_k_coset(model.V);
  Triplets t;
  couple(b, 1, 0, model.V, 1.0, t);
  couple(b, 0, 1, model.V.negated(), 1.0, t);
  return from_triplets(b.size(), t);
}

SpMat assemble_H(const Model& model, cplx alpha, double lambda, const PlaneWaveBasis& b) {
  const SpMat A = assemble_D(model, alpha, b);
  const int n = static_cast<int>(b.size());
  Triplets t;
  t.reserve(2 * A.nonZeros() + 4 * b.size() * model.V.terms().size());
  for (int c = 0; c < A.outerSize(); ++c)
    for (SpMat::InnerIterator it(A, c); it; ++it) {
      t.emplace_back(n + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      t.emplace_back(static_cast<int>(it.col()), n + static_cast<int>(it.row()), std::conj(it.value()));
    }
  if (lambda != 0.0) {
    const SpMat C = assemble_C(model, b);
    for (int c = 0; c < C.outerSize(); ++c)
      for (SpMat::InnerIterator it(C, c); it; ++it) {
        const int r = static_cast<int>(it.row()), cc = static_cast<int>(it.col());
        t.emplace_back(r, cc, lambda * it.value());
        t.emplace_back(n + r, n + cc, lambda * it.value());
      }
  }
  return from_triplets(2 * b.size(), t);
}

BandResult bands(const Model& model, cplx alpha, double lambda, cplx k, int N, int count, bool with_vectors,
                 const EigOptions& opt) {
  if (count < 1) throw std::invalid_argument("band count must be positive");
  const PlaneWaveBasis b(N, k);
  const int m = count + (count % 2);
  if (m > static_cast<int>(2 * b.size())) throw std::invalid_argument("band count exceeds the matrix dimension");
  EigenPairs ep;
  try {
    ep = hermitian_nearest_zero(assemble_H(model, alpha, lambda, b), m, opt);
  } catch (const EigenError& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << e.what() << " [alpha=" << alpha << " lambda=" << lambda << " k=" << k << " N=" << N << "]";
    throw EigenError(msg.str());
  }
  BandResult out;
  out.k = {k, classify_k(k).cls};
  const int first = m - count;
  for (int i = first; i < m; ++i) {
    out.energies.push_back(ep.values(i));
    out.labels.push_back(i < m / 2 ? i - m / 2 : i - m / 2 + 1);
  }
  if (with_vectors) out.vectors = ep.vectors.rightCols(count);
  return out;
}

Eigen::VectorXd refined_levels(const Model& model, cplx alpha, double lambda, cplx k, int N, int count,
                               const EigOptions& opt) {
  if (count < 2 || count % 2 != 0) throw std::invalid_argument("level count must be even and positive");
  const PlaneWaveBasis b(N, k);
  const SpMat H = assemble_H(model, alpha, lambda, b);
  const EigenPairs ep = hermitian_nearest_zero(H, count, opt);
  return accurate_ritz_values(H, ep.vectors);
}

double chiral_band(const Model& model, cplx alpha, cplx k, int N, const EigOptions& opt) {
  const PlaneWaveBasis b(N, k);
  return smallest_singular(assemble_D(model, alpha, b), 1, opt).sigma(0);
}

KernelPair kernel_vector(const Model& model, cplx alpha, const PlaneWaveBasis& b, const EigOptions& opt) {
  const auto st = smallest_singular(assemble_D(model, alpha, b), 2, opt);
  KernelPair out;
  out.sigma1 = st.sigma(0);
  out.sigma2 = st.sigma(1);
  if (out.sigma2 < 100.0 * out.sigma1) {
    std::ostringstream msg;
    msg << "kernel not simple at alpha=" << alpha << ", k=" << b.k() << " (sigma1=" << out.sigma1 << ", sigma2=" << out.sigma2 << ")";
    throw NotSimpleError(msg.str());
  }
  out.u = st.right.col(0);
  out.u_star = st.left.col(0);
  fix_gauge(out.u_star);
  return out;
}

double flat_band_residual(const Model& model, cplx alpha, int N, const KGrid& grid, int threads) {
  std::vector<double> e(grid.size());
  parallel_for(e.size(), threads, [&](std::size_t i) { e[i] = chiral_band(model, alpha, grid[static_cast<int>(i)], N); });
  double worst = 0.0;
  for (double v : e) worst = std::max(worst, v);
  return worst;
}

}  // namespace tbg
