#include <doctest.h>

#include <cmath>

#include "tbg/config.hpp"

using namespace tbg;

TEST_CASE("config round trip") {
  RunConfig c;
  CHECK(parse_config_string(emit_config(c)) == c);
  c.potential = "U1";
  c.alpha = 0.1 + 0.2;
  c.refine_alpha = false;
  c.lambda = -1.0 / 3.0;
  c.lambda_range = {3e-6, 0.5, 7};
  c.kpath = "G,K,0.25:-1.5,-K";
  c.kgrid_n1 = 9;
  c.kgrid_n2 = 12;
  c.slope_windows = {{1e-4, 2e-3}};
  c.sweep_site = SweepSite::Gamma;
  c.magic_complex = true;
  c.map_samples = 7;
  c.map_extent = 2.25;
  c.threads = 3;
  const std::string text = emit_config(c);
  const RunConfig back = parse_config_string(text);
  CHECK(back == c);
  CHECK(emit_config(back) == text);
  c.slope_windows.clear();
  CHECK(parse_config_string(emit_config(c)) == c);
}

TEST_CASE("config syntax") {
  const RunConfig c = parse_config_string("# header\n  alpha = 0.6  # trailing\n\nkgrid=4x5\ntrunc=8\n");
  CHECK(c.alpha == 0.6);
  CHECK(c.kgrid_n1 == 4);
  CHECK(c.kgrid_n2 == 5);
  CHECK(c.trunc == 8);
  CHECK(c.potential == "U");
  CHECK_THROWS_AS(parse_config_string("alpha\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("colour=red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("alpha=1\nalpha=2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("alpha=0.5x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("trunc=1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("kgrid=12\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("lambda_range=1e-5:1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("sweep_site=edge\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("magic_complex=maybe\n"), ConfigError);
}

TEST_CASE("config ranges") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto edit) {
    RunConfig x;
    edit(x);
    CHECK_THROWS_AS(x.validate(), ConfigError);
  };
  bad([](RunConfig& x) { x.alpha = 11.0; });
  bad([](RunConfig& x) { x.lambda_range = {1e-5, 1e-6, 10}; });
  bad([](RunConfig& x) { x.lambda_range = {0.0, 1.0, 10}; });
  bad([](RunConfig& x) { x.lambda_range.count = 1; });
  bad([](RunConfig& x) { x.trunc = 0; });
  bad([](RunConfig& x) { x.kgrid_n1 = 0; });
  bad([](RunConfig& x) { x.kpath = "K"; });
  bad([](RunConfig& x) { x.kpath = "K,Q"; });
  bad([](RunConfig& x) { x.count = 0; });
  bad([](RunConfig& x) { x.slope_windows = {{1e-2, 1e-3}}; });
  bad([](RunConfig& x) { x.magic_step = 0.0; });
  bad([](RunConfig& x) { x.map_samples = 1; });
  bad([](RunConfig& x) { x.threads = -1; });
}

TEST_CASE("lambda range is log-spaced with exact ends") {
  const LambdaRange r{1e-5, 1.0, 25};
  const auto v = r.values();
  REQUIRE(v.size() == 25);
  CHECK(v.front() == 1e-5);
  CHECK(v.back() == 1.0);
  for (std::size_t i = 1; i < v.size(); ++i)
    CHECK(std::log10(v[i] / v[i - 1]) == doctest::Approx(5.0 / 24.0).epsilon(1e-12));
}

TEST_CASE("path vertices") {
  RunConfig c;
  const auto v = c.path_vertices();
  REQUIRE(v.size() == 3);
  CHECK(v[0] == cplx(-K, 0.0));
  CHECK(v[1] == cplx(0.0, 0.0));
  CHECK(v[2] == cplx(K, 0.0));
  CHECK(parse_vertex("0.5:-2") == cplx(0.5, -2.0));
  c.kpath = "";
  CHECK(c.path_vertices().empty());
}
