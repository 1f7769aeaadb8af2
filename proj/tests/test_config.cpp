#include <cstdio>
#include <string>

#include "doctest.h"
#include "swashsim/config.hpp"
#include "swashsim/errors.hpp"

using namespace swash;

namespace {

const char* kFullExample = R"(# example configuration
[vehicle]
M = 1.1
m = 0.1
m_b = 0.7
L = 0.2
g = 9.81

[gains]
preset = complex
k3 = 1.25
theta1 = 1.0
theta2 = 5.0

[run]
scenario = complex
model = full2d
Ts = 1e-4
Tf = 14
log_period = 0.01
ideal_servo = true
diagonal_inertia = true
theta_mode = true

[output]
trace = trace.csv
summary = summary.json

[sizing]
betas = 0.05 0.09
lengths = 0.1 0.2
stroke_fraction = 0.5
period = 4.0
traces = 0.09:0.3 0.21:0.4
)";

}  // namespace

TEST_CASE("empty text yields the documented defaults") {
  const RunConfig cfg = parse_config_text("");
  CHECK(cfg.vehicle == DesignParams{});
  CHECK(cfg.gains == linear_gains());
  CHECK(cfg.gain_preset == "linear");
  CHECK(cfg.scenario == "linear");
  CHECK(cfg.model == PlantModel::full2d);
  CHECK(cfg.Ts == 1e-4);
  CHECK(cfg.Tf == 10.0);
  CHECK(cfg.theta_mode == false);
}

TEST_CASE("full example parses with preset, overrides, and lists") {
  const RunConfig cfg = parse_config_text(kFullExample);
  GainSet expected = complex_gains();
  expected.k3 = 1.25;  // explicit override wins over the preset
  expected.theta1 = 1.0;
  expected.theta2 = 5.0;
  CHECK(cfg.gains == expected);
  CHECK(cfg.gain_preset == "complex");
  CHECK(cfg.scenario == "complex");
  CHECK(cfg.Tf == 14.0);
  CHECK(cfg.theta_mode == true);
  REQUIRE(cfg.sizing_betas.size() == 2);
  CHECK(cfg.sizing_betas[1] == 0.09);
  REQUIRE(cfg.sizing_traces.size() == 2);
  CHECK(cfg.sizing_traces[0].first == 0.09);
  CHECK(cfg.sizing_traces[0].second == 0.3);
  CHECK(cfg.sizing_traces[1].second == 0.4);
  CHECK(cfg.stroke_fraction == 0.5);
}

TEST_CASE("preset resolves before overrides regardless of key order") {
  const RunConfig cfg = parse_config_text(
      "[gains]\nk1 = 9.5\npreset = complex\n");
  GainSet expected = complex_gains();
  expected.k1 = 9.5;
  CHECK(cfg.gains == expected);
}

TEST_CASE("compensation magnitudes are zeroed while theta_mode is off") {
  const RunConfig cfg = parse_config_text(
      "[gains]\ntheta1 = 3\ntheta2 = 7\n[run]\ntheta_mode = false\n");
  CHECK(cfg.gains.theta1 == 0.0);
  CHECK(cfg.gains.theta2 == 0.0);
  const RunConfig on = parse_config_text(
      "[gains]\ntheta1 = 3\ntheta2 = 7\n[run]\ntheta_mode = true\n");
  CHECK(on.gains.theta1 == 3.0);
  CHECK(on.gains.theta2 == 7.0);
}

TEST_CASE("unknown keys and sections are rejected with line diagnostics") {
  try {
    parse_config_text("[vehicle]\nM = 1.1\nwingspan = 2\n", "test.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    const std::string msg = err.what();
    CHECK(msg.find("test.cfg:3") != std::string::npos);
    CHECK(msg.find("wingspan") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[engine]\nrpm = 100\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("M = 1.1\n"), ConfigError);  // no section
  CHECK_THROWS_AS(parse_config_text("[run]\nscenario\n"), ConfigError);
}

TEST_CASE("malformed values name the offending field") {
  try {
    parse_config_text("[run]\nTs = fast\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    const std::string msg = err.what();
    CHECK(msg.find("bad.cfg:2") != std::string::npos);
    CHECK(msg.find("'Ts'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[run]\nideal_servo = yes\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nmodel = quad\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[gains]\npreset = softest\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sizing]\nbetas = 0.1 x\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sizing]\ntraces = 0.1-0.2\n"),
                  ConfigError);
}

TEST_CASE("semantic validation names out-of-range settings") {
  try {
    parse_config_text("[run]\nTs = 0\n", "range.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(std::string(err.what()).find("'Ts'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[run]\nTs = 0.02\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nTf = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nscenario = spiral\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nscenario = csv:\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[vehicle]\nM = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[gains]\nk1 = -2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sizing]\nstroke_fraction = 2\n"),
                  ConfigError);
}

TEST_CASE("parse-serialize-parse is the identity") {
  const RunConfig first = parse_config_text(kFullExample);
  const std::string text = serialize_config(first);
  const RunConfig second = parse_config_text(text);
  CHECK(first == second);
  // And a config relying entirely on defaults survives the round trip too.
  const RunConfig defaults = parse_config_text("");
  CHECK(parse_config_text(serialize_config(defaults)) == defaults);
}

TEST_CASE("load_config reads files and reports missing ones") {
  const std::string path = "roundtrip_test.cfg";
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fputs(kFullExample, f);
    std::fclose(f);
  }
  const RunConfig cfg = load_config(path);
  CHECK(cfg.scenario == "complex");
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("no_such_file.cfg"), ConfigError);
}

TEST_CASE("scenario selector produces the matching references") {
  RunConfig cfg;
  cfg.scenario = "hover";
  const ReferenceFn hover = make_reference(cfg);
  CHECK(hover(3.7).pos.norm() == 0.0);
  CHECK(hover(3.7).vel.norm() == 0.0);

  cfg.scenario = "linear";
  const ReferenceFn lin = make_reference(cfg);
  CHECK(lin(2.0).pos.y() == doctest::Approx(0.857 * 2.0).epsilon(1e-15));

  cfg.scenario = "complex";
  const ReferenceFn cpx = make_reference(cfg);
  CHECK(cpx(1.0).pos.z() == doctest::Approx(5.0 * std::sin(1.0)).epsilon(1e-15));
}

TEST_CASE("csv scenario loads a sampled table eagerly") {
  const std::string path = "ref_table_test.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fputs("t,x,y,z\n0,0,0,0\n1,0,1,2\n2,0,2,4\n3,0,3,6\n", f);
    std::fclose(f);
  }
  RunConfig cfg;
  cfg.scenario = "csv:" + path;
  const ReferenceFn ref = make_reference(cfg);
  CHECK(ref(1.0).pos.y() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ref(1.0).pos.z() == doctest::Approx(2.0).epsilon(1e-12));
  std::remove(path.c_str());

  cfg.scenario = "csv:definitely_missing.csv";
  CHECK_THROWS_AS(make_reference(cfg), MalformedTable);
}

TEST_CASE("sim settings bind the run section and planar replication rule") {
  RunConfig cfg = parse_config_text(kFullExample);
  SimConfig sim = make_sim_config(cfg);
  CHECK(sim.model == PlantModel::full2d);
  CHECK(sim.Ts == cfg.Ts);
  CHECK(sim.Tf == cfg.Tf);
  CHECK(sim.planar_3d == false);

  cfg.model = PlantModel::full3d;
  CHECK(make_sim_config(cfg).planar_3d == true);  // built-in planar scenario

  cfg.scenario = "csv:whatever.csv";
  CHECK(make_sim_config(cfg).planar_3d == false);  // spatial table tracks 3 axes
}
