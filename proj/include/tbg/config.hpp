#pragma once

// Run configuration shared by all subcommands.  The text form is line-oriented
// key=value with '#' comments; emit() writes every key in a fixed order so that
// parse(emit(c)) == c.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tbg/lattice.hpp"

namespace tbg {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LambdaRange {
  double lo = 1e-5;
  double hi = 1.0;
  int count = 25;

  /// count log-spaced values from lo to hi inclusive.
  std::vector<double> values() const;
  bool operator==(const LambdaRange&) const = default;
};

struct SlopeWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const SlopeWindow&) const = default;
};

enum class SweepSite { Grid, Gamma };

struct RunConfig {
  std::string potential = "U";         // U, U1 or a potential file
  double alpha = 0.586;
  bool refine_alpha = true;            // snap alpha to a magic value within 0.005
  double lambda = 0.0;
  LambdaRange lambda_range;
  std::string kpath = "-K,G,K";        // empty: bands on the k-grid
  int path_samples = 32;               // per segment
  int kgrid_n1 = 18;
  int kgrid_n2 = 18;
  int trunc = 12;
  std::string out = "out";
  double tol = 1e-9;                   // eigenvalue threshold for protected states
  double sym_tol = 1e-10;              // pass threshold for operator identities
  int count = 2;                       // bands per k
  std::vector<SlopeWindow> slope_windows{{1e-5, 1e-4}, {1e-2, 1e-1}};
  SweepSite sweep_site = SweepSite::Grid;
  double magic_lo = 0.3;
  double magic_hi = 2.5;
  double magic_step = 0.01;
  bool magic_complex = false;
  int map_samples = 121;               // potential-map points per axis
  double map_extent = 1.5;             // potential-map square [-extent, extent]^2
  int threads = 0;

  bool operator==(const RunConfig&) const = default;

  /// Throws ConfigError when a value is out of range.
  void validate() const;

  std::vector<cplx> path_vertices() const;
};

/// Applies key=value lines on top of `base`.  Unknown keys, malformed values and
/// repeated keys throw ConfigError.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig parse_config_string(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies one assignment; used for files and command-line overrides alike.
void set_key(RunConfig& c, const std::string& key, const std::string& value);

std::string emit_config(const RunConfig& c);

std::string to_string(SweepSite s);
std::string format_double(double x);

/// "lo:hi:count"
LambdaRange parse_lambda_range(const std::string& s);
/// "lo:hi,lo:hi,..."
std::vector<SlopeWindow> parse_slope_windows(const std::string& s);
/// "n1xn2"
std::pair<int, int> parse_kgrid(const std::string& s);
/// Vertex names G, K, -K, or "re:im".
cplx parse_vertex(const std::string& s);

}  // namespace tbg
