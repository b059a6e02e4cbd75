#pragma once

// Tunnelling potentials stored as finite Fourier sums
//
//   f(z) = sum_j a_j exp(i <z, q_j>).
//
// Every momentum of one potential lies in a single coset c K + Lambda*,
// c in {-1, 0, 1}; the coset fixes the translation character
// f(z + gamma) = exp(i c <gamma, K>) f(z).

#include <iosfwd>
#include <string>
#include <vector>

#include "tbg/lattice.hpp"

namespace tbg {

struct FourierTerm {
  cplx momentum;
  cplx amplitude;
};

class FourierPotential {
 public:
  FourierPotential() = default;
  /// Throws std::invalid_argument if the momenta span more than one coset of Lambda*
  /// or are not congruent to 0 or +-K.
  explicit FourierPotential(std::vector<FourierTerm> terms, std::string name = "custom");

  const std::vector<FourierTerm>& terms() const { return terms_; }
  const std::string& name() const { return name_; }
  /// c with momenta in c K + Lambda*.
  int charge() const { return charge_; }
  /// exp(i c <gamma, K>).
  cplx character(cplx gamma) const;

  cplx operator()(cplx z) const;

  /// z -> f(-z).
  FourierPotential negated() const;
  /// z -> conj(f(z)).
  FourierPotential conjugated() const;
  /// Combines terms with equal momenta and drops zero amplitudes.
  FourierPotential simplified(double tol = 1e-15) const;

 private:
  std::vector<FourierTerm> terms_;
  std::string name_ = "empty";
  int charge_ = 0;
};

FourierPotential make_U();
FourierPotential make_V();
/// (U(z) - U(-2z)) / sqrt 2, the potential with doubly degenerate magic parameters.
FourierPotential make_U1();

/// Built-in names: "U", "V", "U1".  Anything else is read as a potential file.
FourierPotential potential_by_name(const std::string& name_or_path);

/// Text format: one term per line, "m n re im" for the momentum
/// (4 pi i / sqrt 3)(m + n omega) + K and amplitude re + i im.
/// Blank lines and lines starting with '#' are skipped.
FourierPotential parse_potential(std::istream& in, const std::string& name = "file");
FourierPotential load_potential(const std::string& path);
void write_potential(std::ostream& out, const FourierPotential& p);

enum class PotentialKind { UType, VType };

struct SymmetryResiduals {
  double translation = 0.0;
  double rotation = 0.0;
  double reflection = 0.0;
  double inversion = 0.0;  // V only: conj(V(-z)) = V(z)
  double max() const;
};

/// Quasi-random sample of n points in the fundamental cell of Lambda.
std::vector<cplx> cell_samples(int n);

/// U type: f(z + gamma) = exp(i <gamma, K>) f(z), f(omega z) = omega f(z), conj(f(conj z)) = -f(-z).
/// V type: the same translation rule, f(omega z) = f(z), f(conj z) = f(z), conj(f(-z)) = f(z).
SymmetryResiduals validate_symmetries(const FourierPotential& p, PotentialKind kind, int samples = 200);

}  // namespace tbg
