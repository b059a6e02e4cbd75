#include "tbg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tbg/parallel.hpp"
#include "tbg/theta.hpp"

namespace tbg {

using json = nlohmann::ordered_json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double symcheck_lambda = 0.37;
const cplx symcheck_generic_k{0.37, -0.81};

double mod_distance(cplx k, cplx target) {
  double best = std::numeric_limits<double>::infinity();
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n) best = std::min(best, std::abs(k - target - dual_point(m, n)));
  return best;
}

bool congruent_to_real(cplx k) {
  for (int m = -3; m <= 3; ++m)
    for (int n = -3; n <= 3; ++n)
      if (std::abs((k - dual_point(m, n)).imag()) < 1e-9) return true;
  return false;
}

bool standard_symmetries(const Model& model) {
  return validate_symmetries(model.U, PotentialKind::UType).max() < 1e-12 &&
         validate_symmetries(model.V, PotentialKind::VType).max() < 1e-12;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json complex_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json manifest(const std::string& command, const RunConfig& c) {
  json cfg = json::object();
  std::istringstream lines(emit_config(c));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  json m;
  m["command"] = command;
  m["version"] = tool_version;
  m["config"] = cfg;
  return m;
}

json alpha_json(const ResolvedAlpha& a) {
  return json{{"input", a.input}, {"value", a.value}, {"refined", a.refined}, {"multiplicity", a.multiplicity}};
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

void write_json(const std::filesystem::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string csv_line(std::initializer_list<std::string> fields) {
  std::string s;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) s += ',';
    s += f;
    first = false;
  }
  return s + '\n';
}

}  // namespace

Model model_for(const RunConfig& c) { return Model{potential_by_name(c.potential), make_V()}; }

ResolvedAlpha resolve_alpha(const Model& model, const RunConfig& c) {
  ResolvedAlpha r;
  r.input = r.value = c.alpha;
  if (c.refine_alpha) {
    RealScanOptions o;
    o.lo = c.alpha - 0.005;
    o.hi = c.alpha + 0.005;
    o.step = 0.001;
    o.N = c.trunc;
    o.threads = c.threads;
    const auto found = find_real_magic(model, o);
    if (found.size() == 1) {
      r.value = found[0].alpha.real();
      r.refined = true;
    }
  }
  try {
    r.multiplicity = multiplicity(model, r.value, c.trunc);
  } catch (const std::exception&) {
    r.multiplicity = -1;
  }
  return r;
}

std::vector<cplx> band_points(const RunConfig& c) {
  const auto v = c.path_vertices();
  if (v.empty()) return KGrid(c.kgrid_n1, c.kgrid_n2).points();
  return KPath::through(v, c.path_samples).points;
}

std::vector<BandRow> compute_bands(const Model& model, double alpha, const RunConfig& c) {
  const auto ks = band_points(c);
  const int m = c.count + c.count % 2;
  std::vector<Eigen::VectorXd> levels(ks.size());
  parallel_for(ks.size(), c.threads,
               [&](std::size_t i) { levels[i] = refined_levels(model, alpha, c.lambda, ks[i], c.trunc, m); });
  std::vector<BandRow> rows;
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (int j = m - c.count; j < m; ++j) {
      const int label = j < m / 2 ? j - m / 2 : j - m / 2 + 1;
      rows.push_back({static_cast<int>(i), ks[i], label, levels[i](j)});
    }
  return rows;
}

SlopeFit fit_slope(const std::vector<double>& lambda, const std::vector<double>& y, SlopeWindow w) {
  SlopeFit f;
  f.window = w;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < w.lo * (1.0 - 1e-9) || lambda[i] > w.hi * (1.0 + 1e-9) || !(y[i] > 0.0)) continue;
    const double x = std::log10(lambda[i]), v = std::log10(y[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++f.points;
  }
  if (f.points < 2) {
    f.slope = f.intercept = nan;
    return f;
  }
  const double n = f.points;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

std::vector<int> grid_orbit_representatives(const KGrid& grid) {
  std::vector<int> rep(static_cast<std::size_t>(grid.size()));
  for (int f = 0; f < grid.size(); ++f) rep[static_cast<std::size_t>(f)] = f;
  if (grid.n1 != grid.n2) return rep;
  for (int f = 0; f < grid.size(); ++f) {
    const cplx k = grid[f];
    int best = f;
    for (cplx r : {cplx(1.0), omega, omega_bar})
      for (cplx img : {r * k, -std::conj(r * k)}) {
        const auto node = grid.node_of(img);
        if (!node) {
          for (int g = 0; g < grid.size(); ++g) rep[static_cast<std::size_t>(g)] = g;
          return rep;
        }
        best = std::min(best, *node);
      }
    rep[static_cast<std::size_t>(f)] = best;
  }
  return rep;
}

SweepResult compute_sweep(const Model& model, double alpha, int multiplicity, const RunConfig& c) {
  SweepResult r;
  r.levels = 2 * std::max(1, multiplicity);
  const KGrid grid(c.kgrid_n1, c.kgrid_n2);
  std::vector<int> rep;
  if (c.sweep_site == SweepSite::Grid) {
    r.sites = grid.points();
    rep = standard_symmetries(model) ? grid_orbit_representatives(grid) : std::vector<int>();
    if (rep.empty())
      for (int f = 0; f < grid.size(); ++f) rep.push_back(f);
  } else {
    r.sites = {cplx(0.0)};
    rep = {0};
  }
  std::vector<int> unique;
  std::vector<int> slot(rep.size());
  for (std::size_t i = 0; i < rep.size(); ++i)
    if (rep[i] == static_cast<int>(i)) {
      slot[i] = static_cast<int>(unique.size());
      unique.push_back(static_cast<int>(i));
    }
  r.evaluated_sites = static_cast<int>(unique.size());

  const auto lambdas = c.lambda_range.values();
  const std::size_t nu = unique.size();
  std::vector<double> value(lambdas.size() * nu);
  parallel_for(value.size(), c.threads, [&](std::size_t t) {
    const double lambda = lambdas[t / nu];
    const cplx k = r.sites[static_cast<std::size_t>(unique[t % nu])];
    const Eigen::VectorXd v = refined_levels(model, alpha, lambda, k, c.trunc, r.levels);
    value[t] = std::abs(v(r.levels / 2));
  });

  auto on_boundary = [&](int f) {
    if (c.sweep_site != SweepSite::Grid) return false;
    const int i = f / grid.n2, j = f % grid.n2;
    return i == 0 || j == 0 || i == grid.n1 - 1 || j == grid.n2 - 1;
  };
  auto at = [&](std::size_t l, std::size_t f) {
    return value[l * nu + static_cast<std::size_t>(slot[static_cast<std::size_t>(rep[f])])];
  };
  std::vector<double> maxima;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    SweepPoint p;
    p.lambda = lambdas[l];
    p.max_abs_E1 = -1.0;
    for (std::size_t f = 0; f < rep.size(); ++f) p.max_abs_E1 = std::max(p.max_abs_E1, at(l, f));
    int first = -1, interior = -1;
    for (std::size_t f = 0; f < rep.size(); ++f) {
      if (at(l, f) != p.max_abs_E1) continue;
      if (first < 0) first = static_cast<int>(f);
      if (interior < 0 && !on_boundary(static_cast<int>(f))) interior = static_cast<int>(f);
    }
    p.argmax = interior >= 0 ? interior : first;
    p.at_boundary = interior < 0 && on_boundary(first);
    if (p.at_boundary) {
      const cplx k = r.sites[static_cast<std::size_t>(p.argmax)];
      r.warnings.push_back("lambda=" + format_double(p.lambda) + ": maximum attained only on the grid boundary, k=(" +
                           format_double(k.real()) + "," + format_double(k.imag()) + ")");
    }
    maxima.push_back(p.max_abs_E1);
    r.points.push_back(p);
  }
  for (const auto& w : c.slope_windows) {
    r.fits.push_back(fit_slope(lambdas, maxima, w));
    if (w.lo < lambdas.front() * (1.0 - 1e-9) || w.hi > lambdas.back() * (1.0 + 1e-9))
      r.warnings.push_back("slope window [" + format_double(w.lo) + ", " + format_double(w.hi) +
                           "] extends beyond the sweep range");
    if (r.fits.back().points < 2)
      r.warnings.push_back("slope window [" + format_double(w.lo) + ", " + format_double(w.hi) +
                           "] holds fewer than two points");
  }
  return r;
}

PerturbMapResult compute_perturb_map(const Model& model, double alpha, int multiplicity, const RunConfig& c) {
  if (multiplicity != 1)
    throw std::invalid_argument("alpha=" + format_double(alpha) + " has kernel multiplicity " +
                                std::to_string(multiplicity) +
                                "; the e/f expansion needs a simple magic parameter (degenerate values such as "
                                "those of U1 need a larger Grushin problem)");
  const KGrid grid(c.kgrid_n1, c.kgrid_n2);
  PerturbMapResult r;
  r.samples = coefficient_map(model, alpha, grid.points(), c.trunc, c.threads);
  MapSummary& s = r.summary;
  const auto& smp = r.samples;
  double dK = std::numeric_limits<double>::infinity(), dmK = dK;
  for (int f = 0; f < grid.size(); ++f) {
    const auto& p = smp[static_cast<std::size_t>(f)];
    const double af = std::abs(p.f);
    s.max_abs_e = std::max(s.max_abs_e, std::abs(p.e));
    s.max_abs_f = std::max(s.max_abs_f, af);
    auto other = [&](cplx k) -> const CoefficientSample* {
      const auto node = grid.node_of(k);
      return node ? &smp[static_cast<std::size_t>(*node)] : nullptr;
    };
    if (const auto* q = other(omega * p.k)) s.rotation = std::max(s.rotation, std::abs(q->e - p.e));
    if (const auto* q = other(-p.k)) s.odd = std::max(s.odd, std::abs(q->e + p.e));
    if (const auto* q = other(std::conj(p.k))) s.reflection = std::max(s.reflection, std::abs(q->e + p.e));
    if (congruent_to_real(p.k)) {
      s.real_line = std::max(s.real_line, std::abs(p.e));
      ++s.real_line_nodes;
    }
    if (const double d = mod_distance(p.k, K); d < dK) {
      dK = d;
      s.abs_f_near_K = af;
      s.node_near_K = p.k;
    }
    if (const double d = mod_distance(p.k, -K); d < dmK) {
      dmK = d;
      s.abs_f_near_minus_K = af;
      s.node_near_minus_K = p.k;
    }
  }
  s.e_over_f = s.max_abs_f > 0.0 ? s.max_abs_e / s.max_abs_f : nan;
  return r;
}

std::vector<SymcheckEntry> compute_symcheck(const Model& model, double alpha, const RunConfig& c) {
  std::vector<SymcheckEntry> out;
  auto add = [&](const std::string& group, const std::string& name, double res, double tol) {
    out.push_back({group, name, res, tol, std::isfinite(res) && res < tol});
  };
  const SymmetryBasis hs = SymmetryBasis::high_symmetry(c.trunc);
  for (const auto& e : square_residuals(hs)) add("squares", e.name, e.residual, c.sym_tol);
  for (double lambda : {c.lambda, symcheck_lambda}) {
    const std::string at = " (lambda=" + format_double(lambda) + ")";
    for (const auto& e : commutation_residuals(model, alpha, lambda, hs))
      add("commutation", e.name + at, e.residual, c.sym_tol);
  }
  const SymmetryBasis generic(c.trunc, {symcheck_generic_k});
  for (const auto& e : commutation_residuals(model, alpha, symcheck_lambda, generic))
    add("commutation_generic_k", e.name, e.residual, c.sym_tol);
  for (const auto& e : mapping_checks(hs)) add("mapping", e.name, e.residual, c.sym_tol);

  const auto ru = validate_symmetries(model.U, PotentialKind::UType);
  const auto rv = validate_symmetries(model.V, PotentialKind::VType);
  add("potential", "U translation", ru.translation, c.sym_tol);
  add("potential", "U rotation", ru.rotation, c.sym_tol);
  add("potential", "U reflection", ru.reflection, c.sym_tol);
  add("potential", "V translation", rv.translation, c.sym_tol);
  add("potential", "V rotation", rv.rotation, c.sym_tol);
  add("potential", "V reflection", rv.reflection, c.sym_tol);
  add("potential", "V inversion", rv.inversion, c.sym_tol);

  double th = 0.0;
  const cplx phase = std::polar(1.0, -pi / 4.0);
  for (cplx z : cell_samples(100)) th = std::max(th, std::abs(theta(z) - phase * std::conj(theta(std::conj(z)))));
  add("theta", "theta reflection", th, 1e-13);
  double rot = 0.0, refl = 0.0;
  for (cplx k : {cplx(0.41, 0.27), cplx(-0.9, 1.3), cplx(1.7, -0.35)}) {
    const auto t = transformation_checks(k);
    rot = std::max(rot, t.rotation);
    refl = std::max(refl, t.reflection);
  }
  add("theta", "F_k rotation", rot, 1e-10);
  add("theta", "F_k reflection", refl, 1e-10);

  for (double lambda : {c.lambda, symcheck_lambda})
    for (cplx k : {cplx(K), cplx(-K)}) {
      const Eigen::VectorXd v = refined_levels(model, alpha, lambda, k, c.trunc, 2);
      add("protected", std::string(k.real() > 0 ? "H_K" : "H_-K") + " two levels at 0 (lambda=" +
                           format_double(lambda) + ")",
          v.cwiseAbs().maxCoeff(), c.tol);
    }
  return out;
}

MagicResult compute_magic(const Model& model, const RunConfig& c) {
  MagicResult r;
  RealScanOptions o;
  o.lo = c.magic_lo;
  o.hi = c.magic_hi;
  o.step = c.magic_step;
  o.N = c.trunc;
  o.threads = c.threads;
  r.real = find_real_magic(model, o);
  if (c.magic_complex) r.complex = find_complex_magic(model);
  return r;
}

std::vector<PotentialSample> compute_potential_map(const Model& model, const RunConfig& c) {
  std::vector<PotentialSample> out;
  const int n = c.map_samples;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const cplx z(-c.map_extent + 2.0 * c.map_extent * i / (n - 1), -c.map_extent + 2.0 * c.map_extent * j / (n - 1));
      out.push_back({z, std::abs(model.U(z)), std::abs(model.V(z))});
    }
  return out;
}

std::vector<std::string> command_names() {
  return {"bands", "split-sweep", "perturb-map", "symcheck", "magic", "potential-map"};
}

namespace {

json magic_json(const MagicAngleReport& m) {
  return json{{"alpha", complex_json(m.alpha)},
              {"multiplicity", m.multiplicity},
              {"residual", m.residual},
              {"method", to_string(m.method)},
              {"at_boundary", m.at_boundary}};
}

int cmd_bands(const RunConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  const Model model = model_for(c);
  const ResolvedAlpha a = resolve_alpha(model, c);
  const auto rows = compute_bands(model, a.value, c);
  std::string csv = "# k_index,k_re,k_im,band_label,energy\n";
  for (const auto& r : rows)
    csv += csv_line({std::to_string(r.k_index), format_double(r.k.real()), format_double(r.k.imag()),
                     std::to_string(r.label), format_double(r.energy)});
  write_text(dir / "bands.csv", csv);
  json m = manifest("bands", c);
  m["alpha"] = alpha_json(a);
  m["mode"] = c.path_vertices().empty() ? "grid" : "path";
  m["points"] = rows.empty() ? 0 : rows.back().k_index + 1;
  if (!c.path_vertices().empty()) {
    const auto path = KPath::through(c.path_vertices(), c.path_samples);
    m["arclength"] = path.arclength;
  }
  double mx = 0.0;
  for (const auto& r : rows) mx = std::max(mx, std::abs(r.energy));
  m["max_abs_energy"] = mx;
  m["files"] = json::array({"bands.csv"});
  write_json(dir / "bands.json", m);
  log << "bands: " << rows.size() << " rows, alpha=" << format_double(a.value) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  const Model model = model_for(c);
  const ResolvedAlpha a = resolve_alpha(model, c);
  const SweepResult r = compute_sweep(model, a.value, a.multiplicity, c);
  std::string csv = "# lambda,max_abs_E1\n";
  for (const auto& p : r.points) csv += csv_line({format_double(p.lambda), format_double(p.max_abs_E1)});
  write_text(dir / "sweep.csv", csv);
  json m = manifest("split-sweep", c);
  m["alpha"] = alpha_json(a);
  m["site"] = to_string(c.sweep_site);
  m["sites"] = r.sites.size();
  m["evaluated_sites"] = r.evaluated_sites;
  m["levels"] = r.levels;
  const double marker = 0.7 * a.value;
  m["lambda_marker"] = json{{"value", marker},
                            {"rule", "0.7 alpha"},
                            {"in_range", marker >= r.points.front().lambda && marker <= r.points.back().lambda}};
  json fits = json::array();
  for (const auto& f : r.fits)
    fits.push_back(json{{"lo", f.window.lo}, {"hi", f.window.hi}, {"points", f.points}, {"slope", number(f.slope)},
                        {"intercept", number(f.intercept)}});
  m["fits"] = fits;
  json arg = json::array();
  for (const auto& p : r.points)
    arg.push_back(json{{"lambda", p.lambda},
                       {"k", complex_json(r.sites[static_cast<std::size_t>(p.argmax)])},
                       {"at_boundary", p.at_boundary}});
  m["argmax"] = arg;
  m["warnings"] = r.warnings;
  m["files"] = json::array({"sweep.csv"});
  write_json(dir / "slopes.json", m);
  for (const auto& w : r.warnings) log << "warning: " << w << "\n";
  for (const auto& f : r.fits)
    log << "slope on [" << format_double(f.window.lo) << ", " << format_double(f.window.hi)
        << "]: " << format_double(f.slope) << "\n";
  return 0;
}

int cmd_perturb_map(const RunConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  const Model model = model_for(c);
  const ResolvedAlpha a = resolve_alpha(model, c);
  const PerturbMapResult r = compute_perturb_map(model, a.value, a.multiplicity, c);
  std::string csv = "# k_re,k_im,e,abs_f,re_f,im_f\n";
  for (const auto& s : r.samples)
    csv += csv_line({format_double(s.k.real()), format_double(s.k.imag()), format_double(s.e),
                     format_double(std::abs(s.f)), format_double(s.f.real()), format_double(s.f.imag())});
  write_text(dir / "ef.csv", csv);
  const MapSummary& s = r.summary;
  json m = manifest("perturb-map", c);
  m["alpha"] = alpha_json(a);
  m["summary"] = json{{"max_abs_e", s.max_abs_e},
                      {"max_abs_f", s.max_abs_f},
                      {"rotation", s.rotation},
                      {"odd", s.odd},
                      {"reflection", s.reflection},
                      {"real_line", s.real_line},
                      {"real_line_nodes", s.real_line_nodes},
                      {"abs_f_near_K", s.abs_f_near_K},
                      {"node_near_K", complex_json(s.node_near_K)},
                      {"abs_f_near_minus_K", s.abs_f_near_minus_K},
                      {"node_near_minus_K", complex_json(s.node_near_minus_K)},
                      {"max_e_over_max_f", number(s.e_over_f)}};
  const double me = s.max_abs_e, mf = s.max_abs_f;
  m["checks"] = json{{"rotation", s.rotation < 1e-7 * me},
                     {"odd", s.odd < 1e-7 * me},
                     {"reflection", s.reflection < 1e-7 * me},
                     {"real_line", s.real_line < 1e-7 * me},
                     {"f_near_K", s.abs_f_near_K < 1e-4 * mf},
                     {"f_near_minus_K", s.abs_f_near_minus_K < 1e-4 * mf}};
  m["files"] = json::array({"ef.csv"});
  write_json(dir / "ef.json", m);
  log << "perturb-map: " << r.samples.size() << " nodes, max|e|/max|f|=" << format_double(s.e_over_f) << "\n";
  return 0;
}

int cmd_symcheck(const RunConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  const Model model = model_for(c);
  const auto entries = compute_symcheck(model, c.alpha, c);
  bool ok = true;
  json list = json::array();
  for (const auto& e : entries) {
    ok = ok && e.pass;
    list.push_back(json{{"group", e.group},
                        {"name", e.name},
                        {"residual", number(e.residual)},
                        {"tolerance", e.tolerance},
                        {"pass", e.pass}});
    if (!e.pass) log << "FAIL " << e.group << ": " << e.name << " residual " << format_double(e.residual) << "\n";
  }
  json m = manifest("symcheck", c);
  m["alpha"] = c.alpha;
  m["all_pass"] = ok;
  m["identities"] = list;
  write_json(dir / "symreport.json", m);
  log << "symcheck: " << entries.size() << " identities, " << (ok ? "all pass" : "failures") << "\n";
  return ok ? 0 : 1;
}

int cmd_magic(const RunConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  const Model model = model_for(c);
  const MagicResult r = compute_magic(model, c);
  json m = manifest("magic", c);
  json real = json::array();
  for (const auto& e : r.real) real.push_back(magic_json(e));
  m["real"] = real;
  if (c.magic_complex) {
    json cx = json::array();
    for (const auto& e : r.complex.verified) cx.push_back(magic_json(e));
    json rej = json::array();
    for (cplx z : r.complex.rejected) rej.push_back(complex_json(z));
    m["complex"] = cx;
    m["complex_rejected"] = rej;
  }
  write_json(dir / "magic.json", m);
  for (const auto& e : r.real)
    log << "magic: alpha=" << format_double(e.alpha.real()) << " multiplicity " << e.multiplicity << "\n";
  return 0;
}

int cmd_potential_map(const RunConfig& c, const std::filesystem::path& dir, std::ostream& log) {
  const Model model = model_for(c);
  const auto samples = compute_potential_map(model, c);
  std::string csv = "# x,y,abs_U,abs_V\n";
  for (const auto& s : samples)
    csv += csv_line({format_double(s.z.real()), format_double(s.z.imag()), format_double(s.abs_U),
                     format_double(s.abs_V)});
  write_text(dir / "potential.csv", csv);
  json m = manifest("potential-map", c);
  m["potential_U"] = model.U.name();
  m["potential_V"] = model.V.name();
  m["samples_per_axis"] = c.map_samples;
  m["files"] = json::array({"potential.csv"});
  write_json(dir / "potential.json", m);
  log << "potential-map: " << samples.size() << " points\n";
  return 0;
}

}  // namespace

int run_command(const std::string& name, const RunConfig& c, std::ostream& log) {
  const auto names = command_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    log << "error: unknown command '" << name << "'\n";
    return 2;
  }
  try {
    c.validate();
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    write_text(dir / "run.cfg", emit_config(c));
    if (name == "bands") return cmd_bands(c, dir, log);
    if (name == "split-sweep") return cmd_sweep(c, dir, log);
    if (name == "perturb-map") return cmd_perturb_map(c, dir, log);
    if (name == "symcheck") return cmd_symcheck(c, dir, log);
    if (name == "magic") return cmd_magic(c, dir, log);
    return cmd_potential_map(c, dir, log);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tbg
