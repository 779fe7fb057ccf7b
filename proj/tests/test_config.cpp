#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "smilansky/config.hpp"
#include "smilansky/error.hpp"
#include "smilansky/report.hpp"

using namespace smilansky;

namespace {
const std::string kHead = "schema = smilansky-config/1\n";
}

TEST_CASE("parse with defaults, comments and lists") {
  const auto c = parse_config(kHead +
                              "# comment line\n"
                              "name = demo   # trailing comment\n"
                              "model.omega = 2\n"
                              "model.lambda = 0.5\n"
                              "potential.kind = smooth-bump\n"
                              "ladder.x_half_widths = 4, 6 8\n"
                              "run.strict = true\n");
  CHECK(c.name == "demo");
  CHECK(c.omega == 2.0);
  CHECK(c.lambda == 0.5);
  CHECK(c.potential_kind == PotentialKind::smooth_bump);
  CHECK(c.ladder_x == std::vector<double>{4, 6, 8});
  CHECK(c.strict);
  CHECK(c.tol_regime == 1e-7);
  CHECK(c.eigen_count == 10u);
}

TEST_CASE("schema line is mandatory and versioned") {
  CHECK_THROWS_AS(parse_config("model.omega = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("schema = smilansky-config/2\n"), ConfigError);
  CHECK_NOTHROW(parse_config(kHead));
}

TEST_CASE("unknown keys and malformed values are rejected with the key named") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(kHead + "model.omgea = 1\n").find("model.omgea") != std::string::npos);
  CHECK(message(kHead + "model.omega = 1x\n").find("model.omega") != std::string::npos);
  CHECK(message(kHead + "model.omega\n").find("line 2") != std::string::npos);
  CHECK(message(kHead + "model.omega = 1\nmodel.omega = 2\n").find("duplicate") != std::string::npos);
  CHECK(message(kHead + "eigen.count = -3\n").find("eigen.count") != std::string::npos);
  CHECK(message(kHead + "run.strict = maybe\n").find("run.strict") != std::string::npos);
}

TEST_CASE("validation names the offending key") {
  auto failing_key = [](RunConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  RunConfig c;
  CHECK(failing_key(c).empty());
  {
    auto d = c;
    d.omega = 0.0;
    CHECK(failing_key(d).find("model.omega") != std::string::npos);
  }
  {
    auto d = c;
    d.lambda = -1.0;
    CHECK(failing_key(d).find("model.lambda") != std::string::npos);
  }
  {
    auto d = c;
    d.lambda = 1.0;
    d.ladder_dx = 0.05;  // a / (8 * 4.5) = 0.0278
    CHECK(failing_key(d).find("ladder.dx") != std::string::npos);
    d.lambda = 0.0;      // resolution only matters with a potential
    CHECK(failing_key(d).empty());
  }
  {
    auto d = c;
    d.ladder_x = {1000.0};
    CHECK(failing_key(d).find("grid.memory_cap") != std::string::npos);
  }
  {
    auto d = c;
    d.ladder_y = {4.0, 5.0};
    CHECK(failing_key(d).find("ladder.y_half_widths") != std::string::npos);
  }
  {
    auto d = c;
    d.sigma_list = {0.5, 1.0};
    CHECK(failing_key(d).find("moment.sigma_list") != std::string::npos);
  }
  {
    auto d = c;
    d.quasimode_n = {8, 4};
    CHECK(failing_key(d).find("quasimode.n_list") != std::string::npos);
  }
  {
    auto d = c;
    d.kappa_fine_step = 1.0;
    CHECK(failing_key(d).find("kappa.fine_step") != std::string::npos);
  }
}

TEST_CASE("per-rung y half widths") {
  auto c = parse_config(kHead + "ladder.x_half_widths = 4, 6\nladder.y_half_widths = 4, 6\n");
  const auto l = c.ladder();
  REQUIRE(l.size() == 2);
  CHECK(l[0].y_half_width == 4.0);
  CHECK(l[1].y_half_width == 6.0);
  c = parse_config(kHead + "ladder.x_half_widths = 4, 6\nladder.y_half_widths = 3\n");
  CHECK(c.ladder()[1].y_half_width == 3.0);
}

TEST_CASE("text and JSON round trips preserve every key and the hash") {
  auto c = parse_config(kHead + "model.lambda = 1.4331521776929255\nmodel.omega = 0.3\ntol.eigen = 1e-9\n"
                                "potential.kind = tabulated\npotential.a = 1\n"
                                "potential.samples = -1,0, 0,1, 1,0\n");
  const auto again = parse_config(c.to_text());
  CHECK(again.to_key_values() == c.to_key_values());
  CHECK(again.hash() == c.hash());
  CHECK(again.omega == c.omega);
  CHECK(again.lambda == c.lambda);

  const auto from_json = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
  CHECK(from_json.to_key_values() == c.to_key_values());
  CHECK(from_json.hash_hex() == c.hash_hex());
  CHECK(c.hash_hex().size() == 16);

  auto d = c;
  d.omega = std::nextafter(d.omega, 1.0);
  CHECK(d.hash() != c.hash());
}

TEST_CASE("every key can be set and read back") {
  const RunConfig defaults;
  for (const auto& [key, value] : defaults.to_key_values()) {
    RunConfig c;
    CHECK_NOTHROW(c.set(key, value));
  }
  CHECK(config_keys().size() == defaults.to_key_values().size());
}

TEST_CASE("environment overrides") {
  CHECK(environment_name("model.lambda") == "SMILANSKY_MODEL_LAMBDA");
  CHECK(environment_name("potential.slope_bound") == "SMILANSKY_POTENTIAL_SLOPE_BOUND");
  RunConfig c;
  setenv("SMILANSKY_MODEL_LAMBDA", "0.25", 1);
  setenv("SMILANSKY_CERTIFY_MU_GRID", "1,3", 1);
  const auto applied = apply_environment(c);
  unsetenv("SMILANSKY_MODEL_LAMBDA");
  unsetenv("SMILANSKY_CERTIFY_MU_GRID");
  CHECK(applied.size() == 2);
  CHECK(c.lambda == 0.25);
  CHECK(c.mu_grid == std::vector<double>{1, 3});

  setenv("SMILANSKY_MODEL_OMEGA", "fast", 1);
  RunConfig d;
  CHECK_THROWS_AS(apply_environment(d), ConfigError);
  unsetenv("SMILANSKY_MODEL_OMEGA");
}

TEST_CASE("options builders carry the configured values") {
  auto c = parse_config(kHead + "tol.gamma0 = 1e-9\neigen.seed = 7\ntol.disc = 0.02\ngrid.memory_cap = 1000\n"
                                "run.strict = 1\nkappa.step = 0.5\n");
  CHECK(c.gamma0_options().accuracy == 1e-9);
  CHECK(c.eigen_options().seed == 7u);
  CHECK(c.lhs_options().tol_disc == 0.02);
  CHECK(c.lhs_options().assembly.memory_cap == 1000u);
  CHECK(c.lhs_options().assembly.strict);
  CHECK(c.kappa_options().step == 0.5);
  CHECK(c.moment_options().ladder.size() == 3);
}
