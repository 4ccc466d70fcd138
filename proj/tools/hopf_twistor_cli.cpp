#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopf_twistor/cli.hpp"

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string config_path;
  int n = 2;
  std::string s;
  double r = 0.0;
  int k = 0;
  int grid = 3;
  double step = 1e-4;
  std::vector<std::string> tols;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::string constants;
  bool timing = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its keys");
  sub->add_option("--n", f.n, "complex dimension n >= 2");
  sub->add_option("--s", f.s, "twistor sign: plus, minus or zero");
  sub->add_option("--r", f.r, "radius parameter");
  sub->add_option("--k", f.k, "dimension of the CH^k core (tube over CH^k)");
  sub->add_option("--grid", f.grid, "samples per chart coordinate (>= 2)");
  sub->add_option("--step", f.step, "finite-difference step in (0, 1e-2]");
  sub->add_option("--tol", f.tols, "tolerance override name=value (repeatable)");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "json or csv");
  sub->add_option("--constants", f.constants, "JSON file of CKO constants");
  sub->add_flag("--timing", f.timing, "record wall time in the report");
}

hopf::RunConfig build_config(const std::string& command, const CLI::App& sub, const Flags& f) {
  hopf::RunConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw hopf::InputError("cannot open config file '" + f.config_path + "'");
    try {
      hopf::apply_config_json(cfg, hopf::Json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw hopf::InputError("config file: " + std::string(e.what()));
    }
  }
  cfg.command = hopf::parse_command(command);
  if (sub.count("--n")) cfg.n = f.n;
  if (sub.count("--s")) cfg.s = hopf::parse_sign(f.s);
  if (sub.count("--r")) cfg.r = f.r;
  if (sub.count("--k")) cfg.k = f.k;
  if (sub.count("--grid")) cfg.grid_density = f.grid;
  if (sub.count("--step")) cfg.fd_step = f.step;
  for (const std::string& t : f.tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw hopf::InputError("--tol expects name=value, got '" + t + "'");
    try {
      cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      throw hopf::InputError("--tol value is not a number: '" + t + "'");
    }
  }
  if (sub.count("--seed")) cfg.seed = f.seed;
  if (sub.count("--out")) cfg.output_path = f.out;
  if (sub.count("--format")) {
    if (f.format == "json") cfg.format = hopf::OutputFormat::json;
    else if (f.format == "csv") cfg.format = hopf::OutputFormat::csv;
    else throw hopf::InputError("--format must be json or csv");
  }
  if (sub.count("--constants")) cfg.constants_path = f.constants;
  if (f.timing) cfg.timing = true;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopf hypersurfaces in complex hyperbolic space from twistor data"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify-curves", "curvatures, circle residuals and parallel shifts of the sign curves"},
      {"build-example", "build one classical example (chosen by --s) and verify it"},
      {"verify-hopf", "verify the classical examples and the mu trichotomy"},
      {"cko-run", "verify a mu = 2 hypersurface built from CKO constants"},
      {"mc-check", "Maurer-Cartan residuals and two-path witness"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    subs[name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitCertified : kExitConfig;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  hopf::RunConfig cfg;
  hopf::ReportEnvelope env;
  try {
    cfg = build_config(command, *subs[command], flags);
    env = hopf::run_command(cfg);
  } catch (const hopf::InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hopf::HopfError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }

  const std::string text = cfg.format == hopf::OutputFormat::json
                               ? hopf::serialize_json(hopf::envelope_to_json(env))
                               : hopf::serialize_csv(env);
  if (cfg.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write '" << cfg.output_path << "'\n";
      return kExitConfig;
    }
    out << text;
  }
  for (const std::string& e : env.errors) std::cerr << "error: " << e << "\n";
  if (!env.certified) {
    for (const hopf::CheckRecord& c : env.checks)
      if (!c.pass) std::cerr << "failed: " << c.name << " = " << c.value << "\n";
  }
  return env.certified ? kExitCertified : kExitFailed;
}
