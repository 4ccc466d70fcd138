#pragma once

// Run configuration, report envelope and the command implementations behind
// the hopf_twistor executable.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopf_twistor/cko.hpp"

namespace hopf {

using Json = nlohmann::ordered_json;

inline constexpr const char* kArtifactVersion = "1.0.0";

enum class Command { verify_curves, build_example, verify_hopf, cko_run, mc_check };

std::string to_string(Command c);
Command parse_command(const std::string& text);

enum class OutputFormat { json, csv };

struct RunConfig {
  Command command = Command::verify_hopf;
  int n = 2;
  std::optional<Sign> s;
  std::optional<double> r;
  int k = 0;
  int grid_density = 3;
  double fd_step = 1e-4;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20240607;
  std::string output_path;
  OutputFormat format = OutputFormat::json;
  std::string constants_path;
  bool timing = false;

  /// Throws InputError unless grid_density >= 2, fd_step in (0, 1e-2],
  /// n >= 2 and every tolerance name is known and positive.
  void validate() const;
  /// Configured tolerance, or the default for `name`.
  double tol(const std::string& name) const;
  VerifyTolerances verify_tolerances() const;
};

/// Tolerance names with their defaults.
const std::map<std::string, double>& default_tolerances();

/// Applies the keys of a JSON config object to cfg. Unknown keys throw
/// InputError.
void apply_config_json(RunConfig& cfg, const Json& j);

Json config_to_json(const RunConfig& cfg);

struct CheckRecord {
  std::string name;
  double value = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  std::string relation = "abs_le";  // abs_le: |value - expected| <= tol; gt, lt against expected
  bool pass = false;
};

CheckRecord make_check(std::string name, double value, std::optional<double> expected,
                       double tolerance, std::string relation = "abs_le");

struct ReportEnvelope {
  std::string artifact_version = kArtifactVersion;
  RunConfig config;
  std::vector<Json> reports;
  std::vector<CheckRecord> checks;
  std::vector<std::string> errors;
  bool certified = false;
  std::int64_t wall_time_ms = 0;

  void add(CheckRecord c) { checks.push_back(std::move(c)); }
  /// certified = no errors and every check passes (and at least one check).
  void finalize();
};

Json envelope_to_json(const ReportEnvelope& env);
Json shape_report_to_json(const ShapeReport& rep);

/// JSON text with every number printed as %.17g; non-finite numbers become
/// null. Two-space indentation, trailing newline.
std::string serialize_json(const Json& j);
/// One row per (grid point, eigenvalue) of every shape report; envelopes
/// without shape reports list their checks.
std::string serialize_csv(const ReportEnvelope& env);

/// JSON constants: objects with "dim_g" parse as CKOForm, otherwise as
/// OneParamData (alpha0, alpha1, x, y0, y1, w, optional base as
/// [[re, im], ...] rows).
struct ParsedConstants {
  std::optional<OneParamData> one_param;
  std::optional<CKOForm> form;
};
ParsedConstants parse_constants(const Json& j);
ParsedConstants load_constants(const std::string& path);
Json one_param_to_json(const OneParamData& d);
Json cko_form_to_json(const CKOForm& f);

/// Closed-form spectra (under normal_lift) of the classical examples.
std::vector<double> closed_form_spectrum(const std::string& example, int n, int k, double r);

ReportEnvelope cmd_verify_curves(const RunConfig& cfg);
ReportEnvelope cmd_build_example(const RunConfig& cfg);
ReportEnvelope cmd_verify_hopf(const RunConfig& cfg);
ReportEnvelope cmd_cko(const RunConfig& cfg);
ReportEnvelope cmd_mc_check(const RunConfig& cfg);

/// Dispatches on cfg.command and fills wall_time_ms when cfg.timing.
ReportEnvelope run_command(const RunConfig& cfg);

/// Built-in dim_g = 2 forms that satisfy the Maurer-Cartan system.
std::vector<std::pair<std::string, CKOForm>> integrable_examples(std::uint64_t seed);

}  // namespace hopf
