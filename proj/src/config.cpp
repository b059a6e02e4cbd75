#include "tbg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace tbg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, x);
  if (s.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(x))
    throw ConfigError(key + ": not a number: '" + s + "'");
  return x;
}

int to_int(const std::string& key, const std::string& s) {
  int x = 0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, x);
  if (s.empty() || r.ec != std::errc() || r.ptr != end) throw ConfigError(key + ": not an integer: '" + s + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + s + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::vector<double> LambdaRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (count - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_string(SweepSite s) { return s == SweepSite::Grid ? "grid" : "gamma"; }

LambdaRange parse_lambda_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ConfigError("lambda_range: expected lo:hi:count, got '" + s + "'");
  return {to_double("lambda_range", parts[0]), to_double("lambda_range", parts[1]), to_int("lambda_range", parts[2])};
}

std::vector<SlopeWindow> parse_slope_windows(const std::string& s) {
  std::vector<SlopeWindow> out;
  if (trim(s).empty()) return out;
  for (const auto& w : split(s, ',')) {
    const auto parts = split(w, ':');
    if (parts.size() != 2) throw ConfigError("slope_windows: expected lo:hi, got '" + w + "'");
    out.push_back({to_double("slope_windows", parts[0]), to_double("slope_windows", parts[1])});
  }
  return out;
}

std::pair<int, int> parse_kgrid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("kgrid: expected n1xn2, got '" + s + "'");
  return {to_int("kgrid", trim(s.substr(0, x))), to_int("kgrid", trim(s.substr(x + 1)))};
}

cplx parse_vertex(const std::string& s) {
  if (s == "G") return 0.0;
  if (s == "K") return K;
  if (s == "-K") return -K;
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw ConfigError("kpath: unknown vertex '" + s + "'");
  return {to_double("kpath", parts[0]), to_double("kpath", parts[1])};
}

std::vector<cplx> RunConfig::path_vertices() const {
  std::vector<cplx> v;
  if (trim(kpath).empty()) return v;
  for (const auto& name : split(kpath, ',')) v.push_back(parse_vertex(name));
  return v;
}

void RunConfig::validate() const {
  require(!potential.empty(), "potential: empty");
  require(std::abs(alpha) <= 10.0, "alpha: outside [-10, 10]");
  require(std::abs(lambda) <= 10.0, "lambda: outside [-10, 10]");
  require(lambda_range.lo > 0.0 && lambda_range.lo < lambda_range.hi && lambda_range.hi <= 10.0,
          "lambda_range: need 0 < lo < hi <= 10");
  require(lambda_range.count >= 2 && lambda_range.count <= 1000, "lambda_range: count outside [2, 1000]");
  const auto v = path_vertices();
  require(v.empty() || v.size() >= 2, "kpath: need at least two vertices");
  require(path_samples >= 1 && path_samples <= 10000, "path_samples: outside [1, 10000]");
  require(kgrid_n1 >= 1 && kgrid_n1 <= 512 && kgrid_n2 >= 1 && kgrid_n2 <= 512, "kgrid: sizes outside [1, 512]");
  require(trunc >= 1 && trunc <= 40, "trunc: outside [1, 40]");
  require(!out.empty(), "out: empty");
  require(tol > 0.0 && sym_tol > 0.0, "tol, sym_tol: must be positive");
  require(count >= 1 && count <= 64, "count: outside [1, 64]");
  for (const auto& w : slope_windows) require(w.lo > 0.0 && w.lo < w.hi, "slope_windows: need 0 < lo < hi");
  require(magic_lo >= 0.0 && magic_lo < magic_hi && magic_hi <= 20.0, "magic range: need 0 <= lo < hi <= 20");
  require(magic_step > 0.0 && magic_step <= magic_hi - magic_lo, "magic_step: outside (0, hi - lo]");
  require(map_samples >= 2 && map_samples <= 4096, "map_samples: outside [2, 4096]");
  require(map_extent > 0.0 && map_extent <= 100.0, "map_extent: outside (0, 100]");
  require(threads >= 0, "threads: negative");
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "potential") c.potential = value;
  else if (key == "alpha") c.alpha = to_double(key, value);
  else if (key == "refine_alpha") c.refine_alpha = to_bool(key, value);
  else if (key == "lambda") c.lambda = to_double(key, value);
  else if (key == "lambda_range") c.lambda_range = parse_lambda_range(value);
  else if (key == "kpath") c.kpath = value;
  else if (key == "path_samples") c.path_samples = to_int(key, value);
  else if (key == "kgrid") std::tie(c.kgrid_n1, c.kgrid_n2) = parse_kgrid(value);
  else if (key == "trunc") c.trunc = to_int(key, value);
  else if (key == "out") c.out = value;
  else if (key == "tol") c.tol = to_double(key, value);
  else if (key == "sym_tol") c.sym_tol = to_double(key, value);
  else if (key == "count") c.count = to_int(key, value);
  else if (key == "slope_windows") c.slope_windows = parse_slope_windows(value);
  else if (key == "sweep_site") {
    if (value == "grid") c.sweep_site = SweepSite::Grid;
    else if (value == "gamma") c.sweep_site = SweepSite::Gamma;
    else throw ConfigError("sweep_site: expected grid or gamma, got '" + value + "'");
  }
  else if (key == "magic_lo") c.magic_lo = to_double(key, value);
  else if (key == "magic_hi") c.magic_hi = to_double(key, value);
  else if (key == "magic_step") c.magic_step = to_double(key, value);
  else if (key == "magic_complex") c.magic_complex = to_bool(key, value);
  else if (key == "map_samples") c.map_samples = to_int(key, value);
  else if (key == "map_extent") c.map_extent = to_double(key, value);
  else if (key == "threads") c.threads = to_int(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    set_key(base, key, trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig parse_config_string(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  return parse_config(in, std::move(base));
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream o;
  auto b = [](bool x) { return x ? "true" : "false"; };
  o << "potential=" << c.potential << '\n';
  o << "alpha=" << format_double(c.alpha) << '\n';
  o << "refine_alpha=" << b(c.refine_alpha) << '\n';
  o << "lambda=" << format_double(c.lambda) << '\n';
  o << "lambda_range=" << format_double(c.lambda_range.lo) << ':' << format_double(c.lambda_range.hi) << ':'
    << c.lambda_range.count << '\n';
  o << "kpath=" << c.kpath << '\n';
  o << "path_samples=" << c.path_samples << '\n';
  o << "kgrid=" << c.kgrid_n1 << 'x' << c.kgrid_n2 << '\n';
  o << "trunc=" << c.trunc << '\n';
  o << "out=" << c.out << '\n';
  o << "tol=" << format_double(c.tol) << '\n';
  o << "sym_tol=" << format_double(c.sym_tol) << '\n';
  o << "count=" << c.count << '\n';
  o << "slope_windows=";
  for (std::size_t i = 0; i < c.slope_windows.size(); ++i)
    o << (i ? "," : "") << format_double(c.slope_windows[i].lo) << ':' << format_double(c.slope_windows[i].hi);
  o << '\n';
  o << "sweep_site=" << to_string(c.sweep_site) << '\n';
  o << "magic_lo=" << format_double(c.magic_lo) << '\n';
  o << "magic_hi=" << format_double(c.magic_hi) << '\n';
  o << "magic_step=" << format_double(c.magic_step) << '\n';
  o << "magic_complex=" << b(c.magic_complex) << '\n';
  o << "map_samples=" << c.map_samples << '\n';
  o << "map_extent=" << format_double(c.map_extent) << '\n';
  o << "threads=" << c.threads << '\n';
  return o.str();
}

}  // namespace tbg
