#include "tbg/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace tbg {

namespace {

using Trip = Eigen::Triplet<cplx>;
const cplx I_unit{0.0, 1.0};

struct Image {
  int comp;
  cplx q;
  cplx coef;
};

SpMat from_triplets(std::size_t n, const std::vector<Trip>& t) {
  SpMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SpMat identity(std::size_t n) {
  SpMat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setIdentity();
  return m;
}

// C^2 operator sending the plane wave (comp, q) of every block to f(comp, q).
SpMat momentum_map(const SymmetryBasis& b, const std::function<Image(int, cplx)>& f) {
  std::vector<Trip> t;
  t.reserve(b.size2());
  for (int blk = 0; blk < b.blocks(); ++blk) {
    const PlaneWaveBasis& pb = b.block(blk);
    for (std::size_t i = 0; i < pb.size(); ++i) {
      const Image im = f(pb.component(i), pb.momentum(i));
      const auto [ob, oi] = b.locate(im.comp, im.q);
      t.emplace_back(b.index2(ob, oi), b.index2(blk, i), im.coef);
    }
  }
  return from_triplets(b.size2(), t);
}

// [[c00 A, c01 A], [c10 A, c11 A]] acting on pairs of C^2 copies.
SpMat lift(const SymmetryBasis& b, const SpMat& A, cplx c00, cplx c01, cplx c10, cplx c11) {
  std::vector<std::pair<int, std::size_t>> where(b.size2());
  for (int blk = 0; blk < b.blocks(); ++blk)
    for (std::size_t i = 0; i < b.block(blk).size(); ++i) where[b.index2(blk, i)] = {blk, i};
  const cplx c[2][2] = {{c00, c01}, {c10, c11}};
  std::vector<Trip> t;
  t.reserve(4 * A.nonZeros());
  for (int col = 0; col < A.outerSize(); ++col)
    for (SpMat::InnerIterator it(A, col); it; ++it) {
      const auto [rb, ri] = where[it.row()];
      const auto [cb, ci] = where[it.col()];
      for (int out = 0; out < 2; ++out)
        for (int in = 0; in < 2; ++in)
          if (c[out][in] != 0.0) t.emplace_back(b.index4(rb, out, ri), b.index4(cb, in, ci), c[out][in] * it.value());
    }
  return from_triplets(b.size4(), t);
}

double max_abs(const SpMat& m) {
  double w = 0.0;
  for (int c = 0; c < m.outerSize(); ++c)
    for (SpMat::InnerIterator it(m, c); it; ++it) w = std::max(w, std::abs(it.value()));
  return w;
}

SpMat block_indicator(const SymmetryBasis& b, int blk) {
  std::vector<Trip> t;
  for (int copy = 0; copy < 2; ++copy)
    for (std::size_t i = 0; i < b.block(blk).size(); ++i) {
      const auto j = b.index4(blk, copy, i);
      t.emplace_back(j, j, 1.0);
    }
  return from_triplets(b.size4(), t);
}

SymmetryOperator translation4(const SymmetryBasis& b, cplx gamma) { return build("L4", b, gamma); }

bool is_real(cplx a) { return std::abs(a.imag()) <= 1e-15 * std::max(1.0, std::abs(a)); }

// Orthonormal basis of the range of a Hermitian projector (dense).
Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (P + P.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Eigen::MatrixXcd W(P.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) W.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  return W;
}

// Spectra of H on L2_{k,p}, k in {K, -K}, p in Z_3.
std::vector<Eigen::VectorXd> block_spectra(const Model& model, double alpha, double lambda, int N) {
  const SymmetryBasis b = SymmetryBasis::high_symmetry(N);
  const SpMat H = union_H(model, alpha, lambda, b);
  std::vector<Eigen::VectorXd> out;
  for (cplx k : {cplx(K, 0.0), cplx(-K, 0.0)}) {
    const int blk = b.block_of(k);
    const auto off = static_cast<Eigen::Index>(b.index4(blk, 0, 0));
    const auto n = static_cast<Eigen::Index>(2 * b.block(blk).size());
    const Eigen::MatrixXcd Hb = Eigen::MatrixXcd(H).block(off, off, n, n);
    for (int p = 0; p < 3; ++p) {
      const Eigen::MatrixXcd P = Eigen::MatrixXcd(subspace_projector(b, k, p)).block(off, off, n, n);
      const Eigen::MatrixXcd W = range_basis(P);
      const Eigen::MatrixXcd h = W.adjoint() * Hb * W;
      out.push_back(hermitian_dense(0.5 * (h + h.adjoint()), false).values);
    }
  }
  return out;
}

}  // namespace

SymmetryBasis::SymmetryBasis(int N, const std::vector<cplx>& seeds) : N_(N) {
  std::vector<cplx> ks;
  auto add = [&ks](cplx k) {
    for (cplx o : ks)
      if (in_dual_lattice(k - o)) return;
    ks.push_back(k);
  };
  for (cplx s : seeds) add(s);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const cplx k = ks[i];
    add(-k);
    add(std::conj(k));
    add(omega * k);
  }
  for (cplx k : ks) {
    offset_.push_back(size2_);
    bases_.emplace_back(N, k);
    size2_ += bases_.back().size();
  }
}

SymmetryBasis SymmetryBasis::high_symmetry(int N) { return SymmetryBasis(N, {0.0, K, -K}); }

int SymmetryBasis::block_of(cplx k) const {
  for (int b = 0; b < blocks(); ++b)
    if (in_dual_lattice(k - bases_[b].k())) return b;
  return -1;
}

std::pair<int, std::size_t> SymmetryBasis::locate(int comp, cplx q) const {
  const int b = block_of(q - PlaneWaveBasis::offset(comp));
  if (b < 0) throw std::out_of_range("momentum outside the k orbit of the symmetry basis");
  const auto i = bases_[b].find(comp, q);
  if (!i) throw std::out_of_range("truncation window is not symmetric under the requested map");
  return {b, *i};
}

SymmetryOperator SymmetryOperator::operator*(const SymmetryOperator& o) const {
  SymmetryOperator r;
  r.name = name + " " + o.name;
  r.matrix = antilinear ? SpMat(matrix * SpMat(o.matrix.conjugate())) : SpMat(matrix * o.matrix);
  r.antilinear = antilinear != o.antilinear;
  return r;
}

SymmetryOperator operator*(cplx s, const SymmetryOperator& o) {
  SymmetryOperator r = o;
  r.matrix = s * o.matrix;
  return r;
}

SymmetryOperator SymmetryOperator::inverse() const {
  SymmetryOperator r;
  r.name = name + "^-1";
  r.antilinear = antilinear;
  r.matrix = antilinear ? SpMat(matrix.transpose()) : SpMat(matrix.adjoint());
  return r;
}

Eigen::VectorXcd SymmetryOperator::apply(const Eigen::VectorXcd& v) const {
  return antilinear ? Eigen::VectorXcd(matrix * v.conjugate()) : Eigen::VectorXcd(matrix * v);
}

SymmetryOperator linear_operator(const SpMat& m, std::string name) { return {std::move(name), m, false}; }

SymmetryOperator build(const std::string& name, const SymmetryBasis& b, cplx gamma) {
  if (name == "Omega")
    return {name, momentum_map(b, [](int c, cplx q) { return Image{c, omega_bar * q, 1.0}; }), false};
  if (name == "inversion") return {name, momentum_map(b, [](int c, cplx q) { return Image{c, -q, 1.0}; }), false};
  if (name == "Q") return {name, momentum_map(b, [](int c, cplx q) { return Image{c, q, 1.0}; }), true};
  if (name == "H")
    return {name, momentum_map(b, [](int c, cplx q) { return Image{1 - c, -q, c == 1 ? -I_unit : I_unit}; }), false};
  if (name == "E")
    return {name, momentum_map(b, [](int c, cplx q) { return Image{1 - c, -q, c == 1 ? 1.0 : -1.0}; }), false};
  if (name == "N")
    return {name, momentum_map(b, [](int c, cplx q) { return Image{1 - c, -std::conj(q), 1.0}; }), false};
  if (name == "L" || name == "L4") {
    if (!in_lattice(gamma)) throw std::invalid_argument("translation needs gamma in the period lattice");
    const SpMat L = momentum_map(b, [gamma](int c, cplx q) {
      const double s = c == 0 ? 1.0 : -1.0;
      return Image{c, q, std::exp(I_unit * (s * inner(gamma, K) + inner(gamma, q)))};
    });
    if (name == "L") return {name, L, false};
    return {name, lift(b, L, 1.0, 0.0, 0.0, 1.0), false};
  }
  if (name == "C") return {name, lift(b, build("Omega", b).matrix, 1.0, 0.0, 0.0, omega_bar), false};
  if (name == "PT") return {name, lift(b, identity(b.size2()), 0.0, 1.0, 1.0, 0.0), true};
  if (name == "S") return {name, lift(b, build("H", b).matrix, 1.0, 0.0, 0.0, 1.0), false};
  if (name == "M") return {name, lift(b, build("N", b).matrix, 0.0, I_unit, -I_unit, 0.0), false};
  if (name == "U+") {
    SymmetryOperator u = build("S", b) * build("M", b) * build("PT", b);
    u.name = name;
    return u;
  }
  if (name == "U-") {
    SymmetryOperator u = build("M", b) * build("S", b) * build("PT", b);
    u.name = name;
    return u;
  }
  throw std::invalid_argument("unknown symmetry operator: " + name);
}

SpMat tau(const PlaneWaveBasis& at_k_plus_p, const PlaneWaveBasis& at_k) {
  const auto perm = at_k_plus_p.matching(at_k);
  std::vector<Trip> t;
  t.reserve(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) t.emplace_back(perm[i], i, 1.0);
  SpMat m(static_cast<Eigen::Index>(at_k.size()), static_cast<Eigen::Index>(at_k_plus_p.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat union_D(const Model& model, cplx alpha, const SymmetryBasis& b) {
  std::vector<Trip> t;
  for (int blk = 0; blk < b.blocks(); ++blk) {
    const SpMat D = assemble_D(model, alpha, b.block(blk));
    const auto off = b.index2(blk, 0);
    for (int c = 0; c < D.outerSize(); ++c)
      for (SpMat::InnerIterator it(D, c); it; ++it) t.emplace_back(off + it.row(), off + it.col(), it.value());
  }
  return from_triplets(b.size2(), t);
}

SpMat union_H(const Model& model, cplx alpha, double lambda, const SymmetryBasis& b) {
  std::vector<Trip> t;
  for (int blk = 0; blk < b.blocks(); ++blk) {
    const SpMat H = assemble_H(model, alpha, lambda, b.block(blk));
    const auto off = b.index4(blk, 0, 0);
    for (int c = 0; c < H.outerSize(); ++c)
      for (SpMat::InnerIterator it(H, c); it; ++it) t.emplace_back(off + it.row(), off + it.col(), it.value());
  }
  return from_triplets(b.size4(), t);
}

SpMat subspace_projector(const SymmetryBasis& b, cplx k, int p) {
  if (!in_dual_lattice(omega * k - k)) throw std::invalid_argument("projectors need a high-symmetry k");
  const int blk = b.block_of(k);
  if (blk < 0) throw std::invalid_argument("k is not in the symmetry basis");
  const SpMat C = build("C", b).matrix;
  const SpMat C2 = C * C;
  const cplx w = std::pow(omega, ((p % 3) + 3) % 3);
  const SpMat E = block_indicator(b, blk);
  return SpMat(E * SpMat((identity(b.size4()) + w * C + (w * w) * C2) / 3.0) * E);
}

double residual(const SymmetryOperator& a, const SymmetryOperator& b) {
  if (a.antilinear != b.antilinear) return std::numeric_limits<double>::infinity();
  return max_abs(SpMat(a.matrix - b.matrix));
}

double worst(const SymmetryReport& r) {
  double w = 0.0;
  for (const auto& e : r) w = std::max(w, std::isnan(e.residual) ? std::numeric_limits<double>::infinity() : e.residual);
  return w;
}

SymmetryReport square_residuals(const SymmetryBasis& b) {
  const SymmetryOperator I2 = linear_operator(identity(b.size2()), "I");
  const SymmetryOperator I4 = linear_operator(identity(b.size4()), "I");
  SymmetryReport r;
  for (const char* n : {"PT", "S", "M"}) {
    const auto A = build(n, b);
    r.push_back({std::string(n) + "^2 = I", residual(A * A, I4)});
  }
  for (const char* n : {"Q", "H", "N"}) {
    const auto A = build(n, b);
    r.push_back({std::string(n) + "^2 = I", residual(A * A, I2)});
  }
  const auto E = build("E", b);
  r.push_back({"E^2 = -I", residual(E * E, -1.0 * I2)});
  const auto C = build("C", b);
  r.push_back({"C^3 = I", residual(C * C * C, I4)});
  const auto O = build("Omega", b);
  r.push_back({"Omega^3 = I", residual(O * O * O, I2)});
  return r;
}

SymmetryReport commutation_residuals(const Model& model, cplx alpha, double lambda, const SymmetryBasis& b) {
  const auto H = linear_operator(union_H(model, alpha, lambda, b), "H(a)");
  const auto Hc = linear_operator(union_H(model, std::conj(alpha), lambda, b), "H(conj a)");
  const auto D = linear_operator(union_D(model, alpha, b), "D(a)");
  const auto Dc = union_D(model, std::conj(alpha), b);
  const auto PT = build("PT", b), S = build("S", b), M = build("M", b), C = build("C", b);
  const auto E = build("E", b), Q = build("Q", b), Hs = build("H", b), N = build("N", b), Om = build("Omega", b);

  SymmetryReport r;
  r.push_back({"PT H = H PT", residual(PT * H, H * PT)});
  r.push_back({"M H(a) = H(conj a) M", residual(M * H, Hc * M)});
  r.push_back({"S H = -H S", residual(S * H, -1.0 * (H * S))});
  r.push_back({"C H = H C", residual(C * H, H * C)});
  r.push_back({"Omega D = omega D Omega", residual(Om * D, omega * (D * Om))});
  r.push_back({"E D E^-1 = -D", residual(E * D * E.inverse(), -1.0 * D)});
  r.push_back({"Q D Q = D^*", residual(Q * D * Q, linear_operator(SpMat(D.matrix.adjoint()), "D^*"))});
  r.push_back({"H D H = -D", residual(Hs * D * Hs, -1.0 * D)});
  r.push_back({"N D N = -D(conj a)^*", residual(N * D * N, linear_operator(SpMat(-Dc.adjoint()), "-D(conj a)^*"))});
  r.push_back({"E = i H", residual(E, I_unit * Hs)});
  for (cplx g : {cplx(1.0, 0.0), omega, cplx(2.0, 0.0) - 3.0 * omega}) {
    const auto L = translation4(b, g);
    r.push_back({"L H = H L", residual(L * H, H * L)});
  }
  if (is_real(alpha)) {
    for (const char* n : {"U+", "U-"}) {
      const auto U = build(n, b);
      r.push_back({std::string(n) + " H " + n + "^-1 = -H", residual(U * H * U.inverse(), -1.0 * H)});
    }
  }
  return r;
}

SymmetryReport mapping_checks(const SymmetryBasis& b) {
  const cplx ks[3] = {0.0, K, -K};
  for (cplx k : ks)
    if (b.block_of(k) < 0) throw std::invalid_argument("mapping checks need the high-symmetry union");
  const auto PT = build("PT", b), S = build("S", b), M = build("M", b), C = build("C", b);
  const auto Up = build("U+", b), Um = build("U-", b);
  SymmetryReport r;

  const cplx gammas[3] = {1.0, omega, cplx(2.0, 0.0) - 3.0 * omega};
  double bloch = 0.0, lpt = 0.0, ls = 0.0, lm = 0.0, lc = 0.0;
  for (cplx g : gammas) {
    const auto L = translation4(b, g);
    std::vector<Trip> t;
    for (int blk = 0; blk < b.blocks(); ++blk)
      for (int copy = 0; copy < 2; ++copy)
        for (std::size_t i = 0; i < b.block(blk).size(); ++i) {
          const auto j = b.index4(blk, copy, i);
          t.emplace_back(j, j, std::exp(I_unit * inner(b.k(blk), g)));
        }
    bloch = std::max(bloch, residual(L, linear_operator(from_triplets(b.size4(), t), "phase")));
    lpt = std::max(lpt, residual(L * PT, PT * translation4(b, -g)));
    ls = std::max(ls, residual(L * S, S * translation4(b, -g)));
    lm = std::max(lm, residual(L * M, M * translation4(b, -std::conj(g))));
    lc = std::max(lc, residual(L * C, C * translation4(b, omega * g)));
  }
  r.push_back({"L_gamma = exp(i<k,gamma>) on block k", bloch});
  r.push_back({"L_gamma PT = PT L_-gamma", lpt});
  r.push_back({"L_gamma S = S L_-gamma", ls});
  r.push_back({"L_gamma M = M L_-conj(gamma)", lm});
  r.push_back({"L_gamma C = C L_omega gamma", lc});

  r.push_back({"C PT = omega_bar PT C", residual(C * PT, omega_bar * (PT * C))});
  r.push_back({"C S = S C", residual(C * S, S * C)});
  r.push_back({"C M = omega_bar M C^*", residual(C * M, omega_bar * (M * C.inverse()))});

  SpMat P[3][3];
  for (int a = 0; a < 3; ++a)
    for (int p = 0; p < 3; ++p) P[a][p] = subspace_projector(b, ks[a], p);
  auto index_of = [&](cplx k) {
    for (int a = 0; a < 3; ++a)
      if (in_dual_lattice(k - ks[a])) return a;
    throw std::logic_error("not a high-symmetry point");
  };
  auto mod3 = [](int p) { return ((p % 3) + 3) % 3; };

  double psum = 0.0, porth = 0.0, pherm = 0.0;
  {
    SpMat total(static_cast<Eigen::Index>(b.size4()), static_cast<Eigen::Index>(b.size4()));
    for (int a = 0; a < 3; ++a)
      for (int p = 0; p < 3; ++p) {
        total += P[a][p];
        pherm = std::max(pherm, max_abs(SpMat(P[a][p] - SpMat(P[a][p].adjoint()))));
        for (int q = 0; q < 3; ++q) {
          const SpMat prod = P[a][p] * P[a][q];
          porth = std::max(porth, max_abs(p == q ? SpMat(prod - P[a][p]) : prod));
        }
      }
    psum = max_abs(SpMat(total - identity(b.size4())));
  }
  r.push_back({"sum of projectors = I", psum});
  r.push_back({"projectors orthogonal", porth});
  r.push_back({"projectors Hermitian", pherm});

  // A maps L2_{k,p} into L2_{k',p'}: (1 - P') A P = 0
  auto map_residual = [&](const SymmetryOperator& A, const std::function<std::pair<cplx, int>(cplx, int)>& target,
                          bool only_pm_K) {
    double w = 0.0;
    for (int a = 0; a < 3; ++a) {
      if (only_pm_K && a == 0) continue;
      for (int p = 0; p < 3; ++p) {
        const auto [k2, p2] = target(ks[a], p);
        const SymmetryOperator src = linear_operator(P[a][p], "P");
        const SymmetryOperator AP = A * src;
        const SpMat leak = AP.matrix - SpMat(P[index_of(k2)][mod3(p2)] * AP.matrix);
        w = std::max(w, max_abs(leak));
      }
    }
    return w;
  };
  r.push_back({"PT: L2_{k,p} -> L2_{k,1-p}", map_residual(PT, [](cplx k, int p) { return std::pair{k, 1 - p}; }, false)});
  r.push_back({"S: L2_{k,p} -> L2_{-k,p}", map_residual(S, [](cplx k, int p) { return std::pair{-k, p}; }, false)});
  r.push_back({"M: L2_{k,p} -> L2_{-k,1-p}", map_residual(M, [](cplx k, int p) { return std::pair{-k, 1 - p}; }, false)});
  r.push_back({"U+: L2_{+-K,p} -> L2_{+-K,p}", map_residual(Up, [](cplx k, int p) { return std::pair{k, p}; }, true)});
  r.push_back({"U-: L2_{+-K,p} -> L2_{+-K,p}", map_residual(Um, [](cplx k, int p) { return std::pair{k, p}; }, true)});
  return r;
}

ProtectedKernel protected_kernel_dim(const Model& model, double alpha, double lambda, int N, double tol) {
  auto count = [&](cplx k) {
    const PlaneWaveBasis b(N, k);
    const auto ep = hermitian_nearest_zero(assemble_H(model, alpha, lambda, b), 6);
    int c = 0;
    for (Eigen::Index i = 0; i < ep.values.size(); ++i) c += std::abs(ep.values(i)) < tol;
    return c;
  };
  return {count(K), count(-K)};
}

std::vector<int> block_kernel_dims(const Model& model, double alpha, double lambda, int N, double tol) {
  std::vector<int> out;
  for (const auto& e : block_spectra(model, alpha, lambda, N)) {
    int c = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i) c += std::abs(e(i)) < tol;
    out.push_back(c);
  }
  return out;
}

double block_spectral_asymmetry(const Model& model, double alpha, double lambda, int N) {
  double w = 0.0;
  for (const auto& e : block_spectra(model, alpha, lambda, N)) {
    const Eigen::Index n = e.size();
    for (Eigen::Index i = 0; i < n; ++i) w = std::max(w, std::abs(e(i) + e(n - 1 - i)));
  }
  return w;
}

}  // namespace tbg
