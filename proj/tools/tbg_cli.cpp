// tbg: batch front-end.  Settings come from defaults, then --config, then flags.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbg/commands.hpp"

namespace {

struct Overrides {
  std::vector<std::pair<std::string, std::string>> set;
  std::string config_file;
};

void add_common(CLI::App* sub, Overrides& o) {
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        name, [&o, key](const std::string& v) { o.set.emplace_back(key, v); }, help);
  };
  sub->add_option("--config", o.config_file, "key=value config file");
  flag("--potential", "potential", "U, U1 or a potential file");
  flag("--alpha", "alpha", "coupling alpha");
  flag("--refine-alpha", "refine_alpha", "snap alpha to a nearby magic value (true/false)");
  flag("--lambda", "lambda", "chiral-breaking coupling lambda");
  flag("--lambda-range", "lambda_range", "log-spaced sweep lo:hi:count");
  flag("--kpath", "kpath", "path vertices, e.g. -K,G,K (empty for the k-grid)");
  flag("--path-samples", "path_samples", "samples per path segment");
  flag("--kgrid", "kgrid", "k-grid n1xn2");
  flag("--trunc", "trunc", "plane-wave truncation N");
  flag("--out", "out", "output directory");
  flag("--tol", "tol", "eigenvalue tolerance");
  flag("--sym-tol", "sym_tol", "identity tolerance");
  flag("--count", "count", "bands per k");
  flag("--slope-windows", "slope_windows", "fit windows lo:hi,lo:hi");
  flag("--sweep-site", "sweep_site", "grid or gamma");
  flag("--magic-lo", "magic_lo", "real scan start");
  flag("--magic-hi", "magic_hi", "real scan end");
  flag("--magic-step", "magic_step", "real scan step");
  flag("--complex", "magic_complex", "also search complex magic values (true/false)");
  flag("--map-samples", "map_samples", "potential-map points per axis");
  flag("--map-extent", "map_extent", "potential-map half width");
  flag("--threads", "threads", "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the chiral-limit twisted bilayer graphene Hamiltonian"};
  app.require_subcommand(1);
  Overrides o;
  for (const auto& name : tbg::command_names()) add_common(app.add_subcommand(name), o);
  CLI11_PARSE(app, argc, argv);

  tbg::RunConfig cfg;
  try {
    if (!o.config_file.empty()) cfg = tbg::load_config(o.config_file);
    for (const auto& [key, value] : o.set) tbg::set_key(cfg, key, value);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return tbg::run_command(app.get_subcommands().front()->get_name(), cfg, std::cerr);
}
