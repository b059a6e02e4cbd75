#pragma once

// Subcommands of the batch front-end.  Each compute_* returns plain data; the
// run_* wrappers write CSV and JSON files into config.out.  Data files carry no
// timestamps and are written in a fixed order, so equal configs give equal bytes.

#include <iosfwd>
#include <string>
#include <vector>

#include "tbg/config.hpp"
#include "tbg/magic.hpp"
#include "tbg/perturb.hpp"
#include "tbg/symmetry.hpp"

namespace tbg {

inline constexpr const char* tool_version = "0.1.0";

Model model_for(const RunConfig& c);

struct ResolvedAlpha {
  double input = 0.0;
  double value = 0.0;
  bool refined = false;
  int multiplicity = 0;       // of `value` at the configured truncation
};

/// With refine_alpha, scans [alpha - 0.005, alpha + 0.005] for magic values and
/// takes the only one found; otherwise keeps alpha as given.
ResolvedAlpha resolve_alpha(const Model& model, const RunConfig& c);

struct BandRow {
  int k_index = 0;
  cplx k;
  int label = 0;
  double energy = 0.0;
};

/// Along the k-path, or on the k-grid when kpath is empty.
std::vector<cplx> band_points(const RunConfig& c);
std::vector<BandRow> compute_bands(const Model& model, double alpha, const RunConfig& c);

struct SlopeFit {
  SlopeWindow window;
  int points = 0;
  double slope = 0.0;         // NaN with fewer than two points
  double intercept = 0.0;     // log10 max|E1| at lambda = 1
};

/// Least-squares line through (log10 lambda, log10 y) for lambda in the window.
SlopeFit fit_slope(const std::vector<double>& lambda, const std::vector<double>& y, SlopeWindow w);

struct SweepPoint {
  double lambda = 0.0;
  double max_abs_E1 = 0.0;
  int argmax = 0;             // index into SweepResult::sites
  bool at_boundary = false;
};

struct SweepResult {
  std::vector<cplx> sites;
  int levels = 2;             // eigenvalues computed per site; E1 is levels / 2 from the bottom
  int evaluated_sites = 0;    // after folding by k -> omega k, k -> -conj k
  std::vector<SweepPoint> points;
  std::vector<SlopeFit> fits;
  std::vector<std::string> warnings;
};

/// For each lambda, max over the sites of |E_1(alpha, lambda, k)|.  Sites are
/// the k-grid, or k = 0 alone.  levels = 2 * max(1, multiplicity of alpha).
SweepResult compute_sweep(const Model& model, double alpha, int multiplicity, const RunConfig& c);

/// Orbit representative of each node under k -> omega k and k -> -conj k.
std::vector<int> grid_orbit_representatives(const KGrid& grid);

struct MapSummary {
  double max_abs_e = 0.0;
  double max_abs_f = 0.0;
  double rotation = 0.0;      // max |e(omega k) - e(k)| over nodes
  double odd = 0.0;           // max |e(-k) + e(k)|
  double reflection = 0.0;    // max |e(conj k) + e(k)|
  double real_line = 0.0;     // max |e| over nodes congruent to real k
  int real_line_nodes = 0;
  double abs_f_near_K = 0.0;
  double abs_f_near_minus_K = 0.0;
  cplx node_near_K;
  cplx node_near_minus_K;
  double e_over_f = 0.0;      // max|e| / max|f|
};

struct PerturbMapResult {
  std::vector<CoefficientSample> samples;
  MapSummary summary;
};

/// Throws std::invalid_argument unless alpha is a simple magic parameter.
PerturbMapResult compute_perturb_map(const Model& model, double alpha, int multiplicity, const RunConfig& c);

struct SymcheckEntry {
  std::string group;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<SymcheckEntry> compute_symcheck(const Model& model, double alpha, const RunConfig& c);

/// Real scan over [magic_lo, magic_hi], plus the complex search when magic_complex.
struct MagicResult {
  std::vector<MagicAngleReport> real;
  ComplexSearchResult complex;
};
MagicResult compute_magic(const Model& model, const RunConfig& c);

struct PotentialSample {
  cplx z;
  double abs_U = 0.0;
  double abs_V = 0.0;
};

/// |U| and |V| on a map_samples x map_samples grid over [-map_extent, map_extent]^2, rows of constant y.
std::vector<PotentialSample> compute_potential_map(const Model& model, const RunConfig& c);

/// Runs a subcommand and writes its files; returns the process exit status.
/// Messages and warnings go to `log`.
int run_command(const std::string& name, const RunConfig& c, std::ostream& log);

std::vector<std::string> command_names();

}  // namespace tbg
