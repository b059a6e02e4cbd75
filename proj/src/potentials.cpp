#include "tbg/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tbg {

namespace {

int coset_charge(cplx q) {
  for (int c : {0, 1, -1})
    if (in_dual_lattice(q - static_cast<double>(c) * K)) return c;
  throw std::invalid_argument("potential momentum is not in 0, K or -K + dual lattice");
}

double max_abs(double a, double b) { return std::max(a, b); }

}  // namespace

FourierPotential::FourierPotential(std::vector<FourierTerm> terms, std::string name)
    : terms_(std::move(terms)), name_(std::move(name)) {
  if (terms_.empty()) throw std::invalid_argument("potential has no terms");
  charge_ = coset_charge(terms_.front().momentum);
  for (const auto& t : terms_)
    if (coset_charge(t.momentum) != charge_)
      throw std::invalid_argument("potential momenta lie in different cosets of the dual lattice");
}

cplx FourierPotential::character(cplx gamma) const {
  return std::polar(1.0, static_cast<double>(charge_) * inner(gamma, cplx(K, 0.0)));
}

cplx FourierPotential::operator()(cplx z) const {
  cplx s = 0.0;
  for (const auto& t : terms_) s += t.amplitude * std::polar(1.0, inner(z, t.momentum));
  return s;
}

FourierPotential FourierPotential::negated() const {
  std::vector<FourierTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({-t.momentum, t.amplitude});
  return FourierPotential(std::move(out), name_ + "(-z)");
}

FourierPotential FourierPotential::conjugated() const {
  std::vector<FourierTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({-t.momentum, std::conj(t.amplitude)});
  return FourierPotential(std::move(out), "conj " + name_);
}

FourierPotential FourierPotential::simplified(double tol) const {
  std::vector<FourierTerm> out;
  for (const auto& t : terms_) {
    auto it = std::find_if(out.begin(), out.end(), [&](const FourierTerm& o) { return std::abs(o.momentum - t.momentum) < 1e-9; });
    if (it == out.end())
      out.push_back(t);
    else
      it->amplitude += t.amplitude;
  }
  std::erase_if(out, [&](const FourierTerm& t) { return std::abs(t.amplitude) <= tol; });
  if (out.empty()) throw std::invalid_argument("potential vanishes identically");
  return FourierPotential(std::move(out), name_);
}

FourierPotential make_U() {
  std::vector<FourierTerm> t;
  cplx w = 1.0;
  for (int l = 0; l < 3; ++l, w *= omega) t.push_back({w * K, cplx(0.0, -4.0 * pi / 3.0) * w});
  return FourierPotential(std::move(t), "U");
}

FourierPotential make_V() {
  std::vector<FourierTerm> t;
  cplx w = 1.0;
  for (int l = 0; l < 3; ++l, w *= omega) t.push_back({w * K, 1.0});
  return FourierPotential(std::move(t), "V");
}

FourierPotential make_U1() {
  const double s = 1.0 / std::sqrt(2.0);
  const FourierPotential U = make_U();
  std::vector<FourierTerm> t;
  for (const auto& u : U.terms()) {
    t.push_back({u.momentum, s * u.amplitude});
    t.push_back({-2.0 * u.momentum, -s * u.amplitude});
  }
  return FourierPotential(std::move(t), "U1");
}

FourierPotential potential_by_name(const std::string& name_or_path) {
  if (name_or_path == "U") return make_U();
  if (name_or_path == "V") return make_V();
  if (name_or_path == "U1") return make_U1();
  return load_potential(name_or_path);
}

FourierPotential parse_potential(std::istream& in, const std::string& name) {
  std::vector<FourierTerm> terms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long m = 0, n = 0;
    double re = 0.0, im = 0.0;
    if (!(ls >> m >> n >> re >> im))
      throw std::invalid_argument(name + ":" + std::to_string(lineno) + ": expected \"m n re im\"");
    std::string extra;
    if (ls >> extra && extra[0] != '#')
      throw std::invalid_argument(name + ":" + std::to_string(lineno) + ": trailing text");
    terms.push_back({dual_point(m, n) + K, cplx(re, im)});
  }
  return FourierPotential(std::move(terms), name);
}

FourierPotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential file " + path);
  return parse_potential(in, path);
}

void write_potential(std::ostream& out, const FourierPotential& p) {
  if (p.charge() != 1) throw std::invalid_argument("only K-coset potentials can be written in the file format");
  out << "# m n re im   momentum = (4 pi i / sqrt 3)(m + n omega) + K\n";
  auto old = out.precision(17);
  for (const auto& t : p.terms()) {
    const auto c = in_dual_lattice(t.momentum - K);
    out << c->m << ' ' << c->n << ' ' << t.amplitude.real() << ' ' << t.amplitude.imag() << '\n';
  }
  out.precision(old);
}

double SymmetryResiduals::max() const {
  return max_abs(max_abs(translation, rotation), max_abs(reflection, inversion));
}

std::vector<cplx> cell_samples(int n) {
  // additive recurrence with the plastic-number constants
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g;
  const double a2 = 1.0 / (g * g);
  std::vector<cplx> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x = std::fmod(0.5 + a1 * (i + 1), 1.0);
    const double y = std::fmod(0.5 + a2 * (i + 1), 1.0);
    out.push_back(x + y * omega);
  }
  return out;
}

SymmetryResiduals validate_symmetries(const FourierPotential& p, PotentialKind kind, int samples) {
  SymmetryResiduals r;
  const cplx gens[2] = {1.0, omega};
  const cplx phase[2] = {std::polar(1.0, inner(gens[0], K)), std::polar(1.0, inner(gens[1], K))};
  for (cplx z : cell_samples(samples)) {
    const cplx f = p(z);
    for (int g = 0; g < 2; ++g) r.translation = max_abs(r.translation, std::abs(p(z + gens[g]) - phase[g] * f));
    if (kind == PotentialKind::UType) {
      r.rotation = max_abs(r.rotation, std::abs(p(omega * z) - omega * f));
      r.reflection = max_abs(r.reflection, std::abs(std::conj(p(std::conj(z))) + p(-z)));
    } else {
      r.rotation = max_abs(r.rotation, std::abs(p(omega * z) - f));
      r.reflection = max_abs(r.reflection, std::abs(p(std::conj(z)) - f));
      r.inversion = max_abs(r.inversion, std::abs(std::conj(p(-z)) - f));
    }
  }
  return r;
}

}  // namespace tbg
