#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "magic_constants.hpp"
#include "tbg/commands.hpp"

using namespace tbg;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.trunc = 6;
  c.kgrid_n1 = c.kgrid_n2 = 6;
  c.lambda_range = {1e-4, 1e-1, 4};
  c.path_samples = 4;
  c.refine_alpha = false;
  c.alpha = testdata::alpha1_U;
  return c;
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string s;
  std::getline(in, s);
  return s;
}

}  // namespace

TEST_CASE("slope fit") {
  std::vector<double> lam, y;
  for (int i = 0; i < 9; ++i) {
    lam.push_back(std::pow(10.0, -4.0 + 0.5 * i));
    y.push_back(3.0 * std::pow(lam.back(), 1.5));
  }
  const auto f = fit_slope(lam, y, {1e-4, 1e-2});
  CHECK(f.points == 5);
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log10(3.0)).epsilon(1e-12));
  CHECK(std::isnan(fit_slope(lam, y, {2e-4, 3e-4}).slope));
}

TEST_CASE("grid orbits under rotation and -conj") {
  const KGrid grid(18, 18);
  const auto rep = grid_orbit_representatives(grid);
  std::set<int> reps(rep.begin(), rep.end());
  for (int f = 0; f < grid.size(); ++f) {
    const int r = rep[static_cast<std::size_t>(f)];
    CHECK(r <= f);
    CHECK(rep[static_cast<std::size_t>(r)] == r);
    CHECK(rep[static_cast<std::size_t>(*grid.node_of(omega * grid[f]))] == r);
    CHECK(rep[static_cast<std::size_t>(*grid.node_of(-std::conj(grid[f])))] == r);
  }
  CHECK(reps.size() * 6 >= static_cast<std::size_t>(grid.size()));
  CHECK(reps.size() < static_cast<std::size_t>(grid.size()) / 4);
  const auto id = grid_orbit_representatives(KGrid(6, 5));
  for (int f = 0; f < 30; ++f) CHECK(id[static_cast<std::size_t>(f)] == f);
}

TEST_CASE("folded sweep equals the full grid maximum") {
  const Model model;
  const RunConfig c = small_config();
  const SweepResult r = compute_sweep(model, c.alpha, 1, c);
  CHECK(r.levels == 2);
  CHECK(r.evaluated_sites < 36);
  const auto lambdas = c.lambda_range.values();
  REQUIRE(r.points.size() == lambdas.size());
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    double mx = 0.0;
    for (cplx k : KGrid(6, 6).points())
      mx = std::max(mx, std::abs(refined_levels(model, c.alpha, lambdas[l], k, c.trunc, 2)(1)));
    CHECK(r.points[l].max_abs_E1 == doctest::Approx(mx).epsilon(1e-12));
  }
  REQUIRE(r.fits.size() == 2);
  CHECK(r.fits[0].points == 1);
  CHECK(std::isnan(r.fits[0].slope));
  CHECK(r.warnings.size() >= 2);
}

TEST_CASE("sweep at Gamma for a degenerate parameter tracks four levels") {
  const Model model{make_U1(), make_V()};
  RunConfig c = small_config();
  c.sweep_site = SweepSite::Gamma;
  const SweepResult r = compute_sweep(model, 0.8538, 2, c);
  CHECK(r.levels == 4);
  CHECK(r.sites.size() == 1);
  CHECK(r.evaluated_sites == 1);
  for (const auto& p : r.points) CHECK(!p.at_boundary);
}

TEST_CASE("bands: free Dirac point and flat band") {
  RunConfig c = small_config();
  c.alpha = 0.0;
  c.lambda = 0.0;
  const Model model;
  const auto free = compute_bands(model, 0.0, c);
  REQUIRE(free.size() == 2 * 9);
  for (const auto& row : free)
    if (std::abs(row.k - cplx(K)) < 1e-12) CHECK(std::abs(row.energy) < 1e-12);
  CHECK(free[0].label == -1);
  CHECK(free[1].label == 1);
  const auto flat = compute_bands(model, testdata::alpha1_U, c);
  for (const auto& row : flat) CHECK(std::abs(row.energy) < 1e-6);
  c.count = 3;
  const auto odd = compute_bands(model, 0.3, c);
  REQUIRE(odd.size() == 3 * 9);
  CHECK(odd[0].label == -1);
  CHECK(odd[1].label == 1);
  CHECK(odd[2].label == 2);
  CHECK(odd[0].energy <= odd[1].energy);
}

TEST_CASE("alpha refinement") {
  const Model model;
  RunConfig c;
  c.alpha = 0.586;
  const auto a = resolve_alpha(model, c);
  CHECK(a.refined);
  CHECK(a.input == 0.586);
  CHECK(std::abs(a.value - testdata::alpha1_U) < 1e-8);
  CHECK(a.multiplicity == 1);
  c.alpha = 1.0;
  const auto b = resolve_alpha(model, c);
  CHECK(!b.refined);
  CHECK(b.value == 1.0);
  CHECK(b.multiplicity == 0);
}

TEST_CASE("perturbation map summary") {
  const Model model;
  RunConfig c = small_config();
  c.trunc = 8;
  const auto r = compute_perturb_map(model, testdata::alpha1_U, 1, c);
  const auto& s = r.summary;
  REQUIRE(r.samples.size() == 36);
  CHECK(s.max_abs_e > 1e-6);
  CHECK(s.rotation < 1e-7 * s.max_abs_e);
  CHECK(s.odd < 1e-7 * s.max_abs_e);
  CHECK(s.reflection < 1e-7 * s.max_abs_e);
  CHECK(s.real_line_nodes >= 3);
  CHECK(s.real_line < 1e-7 * s.max_abs_e);
  CHECK(s.abs_f_near_K < 1e-4 * s.max_abs_f);
  CHECK(s.abs_f_near_minus_K < 1e-4 * s.max_abs_f);
  CHECK(s.e_over_f == doctest::Approx(s.max_abs_e / s.max_abs_f));
  CHECK_THROWS_AS(compute_perturb_map(model, 0.8538, 2, c), std::invalid_argument);
  CHECK_THROWS_AS(compute_perturb_map(model, 1.0, 0, c), std::invalid_argument);
}

TEST_CASE("potential map") {
  RunConfig c;
  c.map_samples = 11;
  c.map_extent = 1.0;
  const Model model;
  const auto m = compute_potential_map(model, c);
  REQUIRE(m.size() == 121);
  CHECK(m.front().z == cplx(-1.0, -1.0));
  CHECK(m.back().z == cplx(1.0, 1.0));
  CHECK(m[60].abs_U < 1e-12);
  for (const auto& s : m) {
    CHECK(s.abs_U == doctest::Approx(std::abs(model.U(omega * s.z))).epsilon(1e-12));
    CHECK(s.abs_V == doctest::Approx(std::abs(model.V(s.z))).epsilon(1e-15));
  }
}

TEST_CASE("symcheck passes at the default parameters") {
  RunConfig c = small_config();
  c.alpha = 0.586;
  c.lambda = 0.2;
  const auto entries = compute_symcheck(Model{}, c.alpha, c);
  CHECK(entries.size() > 20);
  for (const auto& e : entries) {
    INFO(e.group << ": " << e.name << " = " << e.residual);
    CHECK(e.pass);
  }
}

TEST_CASE("run_command writes headed data files and reports errors") {
  const auto dir = std::filesystem::temp_directory_path() / "tbg_run_command_test";
  std::filesystem::remove_all(dir);
  RunConfig c = small_config();
  c.out = dir.string();
  std::ostringstream log;
  CHECK(run_command("bands", c, log) == 0);
  CHECK(first_line(dir / "bands.csv") == "# k_index,k_re,k_im,band_label,energy");
  CHECK(std::filesystem::exists(dir / "bands.json"));
  std::ifstream echoed(dir / "run.cfg");
  CHECK(parse_config(echoed) == c);
  CHECK(run_command("split-sweep", c, log) == 0);
  CHECK(first_line(dir / "sweep.csv") == "# lambda,max_abs_E1");
  CHECK(std::filesystem::exists(dir / "slopes.json"));
  CHECK(run_command("perturb-map", c, log) == 0);
  CHECK(first_line(dir / "ef.csv") == "# k_re,k_im,e,abs_f,re_f,im_f");
  c.map_samples = 5;
  CHECK(run_command("potential-map", c, log) == 0);
  CHECK(first_line(dir / "potential.csv") == "# x,y,abs_U,abs_V");
  CHECK(run_command("nonsense", c, log) == 2);
  c.trunc = 0;
  CHECK(run_command("bands", c, log) == 2);
  c = small_config();
  c.out = dir.string();
  c.potential = (dir / "missing.pot").string();
  CHECK(run_command("bands", c, log) == 2);
  std::filesystem::remove_all(dir);
}
