#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "hopf_twistor/cli.hpp"

using namespace hopf;

namespace {

std::string data_file(const std::string& name) { return std::string(HOPF_TEST_DATA_DIR) + "/" + name; }

RunConfig config_for(Command c) {
  RunConfig cfg;
  cfg.command = c;
  return cfg;
}

}  // namespace

TEST_CASE("command names round-trip") {
  for (Command c : {Command::verify_curves, Command::build_example, Command::verify_hopf, Command::cko_run,
                    Command::mc_check})
    CHECK(parse_command(to_string(c)) == c);
  CHECK_THROWS_AS(parse_command("frobnicate"), InputError);
}

TEST_CASE("RunConfig validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  RunConfig bad = cfg;
  bad.grid_density = 1;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = cfg;
  bad.fd_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = cfg;
  bad.fd_step = 0.02;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = cfg;
  bad.n = 1;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = cfg;
  bad.tolerances["nonsense"] = 1e-3;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = cfg;
  bad.tolerances["hopf"] = -1.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = cfg;
  bad.r = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("tolerance precedence: defaults, config file, then flags") {
  RunConfig cfg;
  CHECK(cfg.tol("hopf") == default_tolerances().at("hopf"));
  apply_config_json(cfg, Json::parse(R"({"tolerances": {"hopf": 1e-3}, "grid": 4, "s": "minus", "r": 0.25})"));
  CHECK(cfg.tol("hopf") == 1e-3);
  CHECK(cfg.grid_density == 4);
  CHECK(cfg.s == Sign::minus);
  CHECK(cfg.r == 0.25);
  cfg.tolerances["hopf"] = 2e-3;  // a later flag wins
  CHECK(cfg.tol("hopf") == 2e-3);
  CHECK(cfg.verify_tolerances().hopf == 2e-3);
  CHECK(cfg.tol("mu") == default_tolerances().at("mu"));
  CHECK_THROWS_AS(cfg.tol("nonsense"), InputError);

  CHECK_THROWS_AS(apply_config_json(cfg, Json::parse(R"({"colour": 1})")), InputError);
  CHECK_THROWS_AS(apply_config_json(cfg, Json::parse(R"({"n": "two"})")), InputError);
  CHECK_THROWS_AS(apply_config_json(cfg, Json::parse("[1]")), InputError);

  const Json echoed = config_to_json(cfg);
  CHECK(echoed["tolerances"]["hopf"] == 2e-3);
  CHECK(echoed["tolerances"].size() == default_tolerances().size());
}

TEST_CASE("make_check relations") {
  CHECK(make_check("a", 1.0, 1.00005, 1e-4).pass);
  CHECK_FALSE(make_check("a", 1.0, 1.001, 1e-4).pass);
  CHECK(make_check("g", 3.0, 2.0, 1e-4, "gt").pass);
  CHECK_FALSE(make_check("g", 2.00001, 2.0, 1e-4, "gt").pass);
  CHECK(make_check("l", 1.0, 2.0, 1e-4, "lt").pass);
  CHECK_FALSE(make_check("l", 2.0, 2.0, 1e-4, "lt").pass);
  CHECK_FALSE(make_check("nan", std::nan(""), 0.0, 1.0).pass);
}

TEST_CASE("envelope certification") {
  ReportEnvelope env;
  env.finalize();
  CHECK_FALSE(env.certified);
  env.add(make_check("ok", 0.0, 0.0, 1e-9));
  env.finalize();
  CHECK(env.certified);
  env.errors.push_back("broken");
  env.finalize();
  CHECK_FALSE(env.certified);
}

TEST_CASE("serialize_json") {
  Json j = Json::object();
  j["a"] = 0.1;
  j["b"] = std::nan("");
  j["c"] = Json::array({1.0, 2.5});
  const std::string text = serialize_json(j);
  CHECK(text.back() == '\n');
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  const Json back = Json::parse(text);
  CHECK(back["a"].get<double>() == 0.1);
  CHECK(back["b"].is_null());
  CHECK(back["c"].size() == 2);
}

TEST_CASE("envelope JSON round-trip and determinism") {
  const RunConfig cfg = config_for(Command::mc_check);
  const ReportEnvelope a = run_command(cfg);
  const ReportEnvelope b = run_command(cfg);
  const Json ja = envelope_to_json(a);
  const std::string text = serialize_json(ja);
  CHECK(text == serialize_json(envelope_to_json(b)));
  CHECK(Json::parse(text) == ja);
  CHECK(a.wall_time_ms == 0);

  std::vector<std::string> keys;
  for (auto it = ja.begin(); it != ja.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"artifact_version", "config", "reports", "checks", "errors",
                                         "certified", "wall_time_ms"});
  CHECK(ja["artifact_version"] == kArtifactVersion);
  CHECK(a.certified);
}

TEST_CASE("verify-curves is certified and reproducible") {
  const RunConfig cfg = config_for(Command::verify_curves);
  const ReportEnvelope a = run_command(cfg);
  CHECK(a.certified);
  CHECK(serialize_json(envelope_to_json(a)) == serialize_json(envelope_to_json(run_command(cfg))));
  RunConfig plus = cfg;
  plus.s = Sign::plus;
  plus.r = 0.0;
  const ReportEnvelope d = run_command(plus);
  CHECK_FALSE(d.certified);
  REQUIRE_FALSE(d.errors.empty());
}

TEST_CASE("CSV output") {
  const ReportEnvelope env = run_command(config_for(Command::mc_check));
  const std::string csv = serialize_csv(env);
  CHECK(csv.rfind("name,value,expected,tolerance,relation,pass\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == env.checks.size() + 1);

  RunConfig cfg = config_for(Command::build_example);
  cfg.s = Sign::zero;
  cfg.grid_density = 2;
  const ReportEnvelope ex = run_command(cfg);
  CHECK(ex.certified);
  const std::string rows = serialize_csv(ex);
  CHECK(rows.rfind("report,point,coordinates,index,eigenvalue\n", 0) == 0);
  std::size_t n_rows = 0;
  for (char c : rows) n_rows += c == '\n';
  CHECK(n_rows == 1 + 16 * 3);
}

TEST_CASE("constants parsing") {
  const ParsedConstants ref = load_constants(data_file("cko_reference.json"));
  REQUIRE(ref.one_param);
  CHECK(ref.one_param->x == 1.0);
  CHECK(ref.one_param->y0 == 1.0);
  const Json again = one_param_to_json(*ref.one_param);
  CHECK(parse_constants(again).one_param->y0 == 1.0);

  const ParsedConstants form = load_constants(data_file("cko_form_dim2.json"));
  REQUIRE(form.form);
  CHECK(form.form->dim_g == 2);
  CHECK(parse_constants(cko_form_to_json(*form.form)).form->alpha0 == form.form->alpha0);

  CHECK_THROWS_AS(load_constants(data_file("cko_form_corrupt.json")), InputError);
  CHECK_THROWS_AS(load_constants(data_file("missing.json")), InputError);
  CHECK_THROWS_AS(parse_constants(Json::parse(R"({"x": "one"})")), InputError);
  CHECK_THROWS_AS(parse_constants(Json::parse("{}")), InputError);
}

TEST_CASE("closed-form spectra") {
  const auto chk = closed_form_spectrum("tube-chk", 3, 1, 0.4);
  REQUIRE(chk.size() == 5);
  CHECK(chk.front() == doctest::Approx(-2.0 / std::tanh(0.8)));
  const auto horo = closed_form_spectrum("horosphere", 2, 0, 0.0);
  REQUIRE(horo.size() == 3);
  CHECK(horo[0] == doctest::Approx(-2.0));
  CHECK(horo[2] == doctest::Approx(-1.0));
  CHECK_THROWS_AS(closed_form_spectrum("torus", 2, 0, 0.0), InputError);
}

TEST_CASE("cko-run on the data files") {
  RunConfig cfg = config_for(Command::cko_run);
  cfg.grid_density = 2;
  cfg.constants_path = data_file("cko_reference.json");
  CHECK(run_command(cfg).certified);
  cfg.constants_path = data_file("cko_horosphere.json");
  CHECK(run_command(cfg).certified);
  cfg.constants_path = data_file("cko_degenerate.json");
  const ReportEnvelope d = run_command(cfg);
  CHECK_FALSE(d.certified);
  REQUIRE_FALSE(d.errors.empty());
}

TEST_CASE("integrable examples satisfy Maurer-Cartan") {
  const auto ex = integrable_examples(20240607);
  CHECK(ex.size() == 3);
  for (const auto& [name, f] : ex) {
    CAPTURE(name);
    CHECK(maurer_cartan_residual(f) <= 1e-12);
    Eigen::VectorXd end(2);
    end << 0.9, -0.7;
    CHECK(two_path_witness(f, GroupElement::identity(3), end) <= 1e-6);
  }
}
