#include "hopf_twistor/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace hopf {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CMatrix random_algebra_matrix(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix x = CMatrix::Zero(n + 1, n + 1);
  x(0, 0) = cplx(0.0, u(rng));
  for (int k = 1; k <= n; ++k) {
    x(k, 0) = cplx(u(rng), u(rng));
    x(0, k) = std::conj(x(k, 0));
    x(k, k) = cplx(0.0, u(rng));
    for (int l = k + 1; l <= n; ++l) {
      x(k, l) = cplx(u(rng), u(rng));
      x(l, k) = -std::conj(x(k, l));
    }
  }
  return x * (scale / std::max(1e-12, x.cwiseAbs().maxCoeff()));
}

StiefelPoint seeded_base(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const GroupElement g = matrix_exp(validate_algebra(random_algebra_matrix(n, rng, 0.5)), 1.0);
  return g * StiefelPoint(IndefVector::basis(n, 0), IndefVector::basis(n, 1));
}

double abs_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Json chart_json(const ChartVector& at) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < at.size(); ++k) a.push_back(at[k]);
  return a;
}

Json clusters_json(const std::vector<EigenCluster>& cs) {
  Json a = Json::array();
  for (const EigenCluster& c : cs) a.push_back(Json{{"value", c.value}, {"multiplicity", c.multiplicity}});
  return a;
}

std::vector<double> expand(const std::vector<EigenCluster>& cs) {
  std::vector<double> out;
  for (const EigenCluster& c : cs)
    for (int m = 0; m < c.multiplicity; ++m) out.push_back(c.value);
  std::sort(out.begin(), out.end());
  return out;
}

void emit(const Json& j, int indent, std::string& out) {
  const std::string pad(2 * indent, ' ');
  const std::string inner(2 * (indent + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], indent + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(j[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default: out += j.dump(); return;
  }
}

Json opt_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void shape_checks(ReportEnvelope& env, const RunConfig& cfg, const std::string& label,
                  const ShapeReport& rep) {
  const VerifyTolerances vt = cfg.verify_tolerances();
  env.add(make_check(label + " points verified", static_cast<double>(rep.points.size()),
                     static_cast<double>(rep.grid_size), 0.0));
  if (rep.points.empty()) return;
  env.add(make_check(label + " hopf residual", rep.hopf_residual, 0.0, vt.hopf));
  env.add(make_check(label + " symmetry residual", rep.symmetry_residual, 0.0, vt.symmetry));
  env.add(make_check(label + " lsq residual", rep.lsq_residual, 0.0, vt.lsq));
  env.add(make_check(label + " mu spread", rep.mu_spread, 0.0, vt.mu_const));
  if (rep.expected_mu) env.add(make_check(label + " mu", rep.mu, *rep.expected_mu, vt.mu));
  env.add(make_check(label + " pc2 residual", abs_max(rep.pc2_residuals), 0.0, vt.pc2));
}

void example_checks(ReportEnvelope& env, const RunConfig& cfg, Sign s) {
  const double r = cfg.r.value_or(s == Sign::plus ? 0.5 : s == Sign::minus ? 0.3 : 0.0);
  const std::string example = s == Sign::plus ? "tube-chk" : s == Sign::minus ? "tube-rhn" : "horosphere";
  std::optional<HypersurfacePatch> patch;
  try {
    if (s == Sign::plus) {
      patch = example_tube_chk(cfg.n, cfg.k, r);
    } else if (s == Sign::minus) {
      patch = example_tube_rhn(cfg.n, r);
    } else {
      patch = example_horosphere(cfg.n, r);
    }
  } catch (const InputError&) {
    throw;
  } catch (const HopfError& e) {
    env.errors.push_back(example + ": " + e.what());
    env.reports.push_back(Json{{"example", example}, {"error", e.what()}});
    return;
  }
  ShapeReport rep;
  try {
    rep = verify_hopf(*patch, patch->grid(cfg.grid_density, 81), cfg.fd_step,
                      cfg.verify_tolerances());
  } catch (const HopfError& e) {
    env.errors.push_back(patch->label() + ": " + e.what());
    env.reports.push_back(Json{{"example", example}, {"label", patch->label()}, {"error", e.what()}});
    return;
  }
  const std::string& label = patch->label();
  Json j = shape_report_to_json(rep);
  j["example"] = example;
  const double abs_mu = std::abs(rep.mu);
  j["trichotomy_margin"] = abs_mu - 2.0;
  env.reports.push_back(std::move(j));

  shape_checks(env, cfg, label, rep);
  if (rep.points.empty()) return;
  const double tol_mu = cfg.verify_tolerances().mu;
  switch (s) {
    case Sign::plus: env.add(make_check(label + " |mu| > 2", abs_mu, 2.0, tol_mu, "gt")); break;
    case Sign::minus: env.add(make_check(label + " |mu| < 2", abs_mu, 2.0, tol_mu, "lt")); break;
    case Sign::zero: env.add(make_check(label + " |mu| = 2", abs_mu, 2.0, tol_mu)); break;
  }

  const std::vector<double> expected = closed_form_spectrum(example, cfg.n, cfg.k, r);
  const std::vector<double> measured = expand(rep.eigenvalues);
  env.add(make_check(label + " spectrum uniform", rep.spectrum_uniform ? 0.0 : 1.0, 0.0, 0.0));
  if (measured.size() != expected.size()) {
    env.add(make_check(label + " spectrum size", static_cast<double>(measured.size()),
                       static_cast<double>(expected.size()), 0.0));
  } else {
    const double tol_eig = cfg.tol("eigen");
    for (std::size_t i = 0; i < expected.size(); ++i)
      env.add(make_check(label + " eigenvalue " + std::to_string(i), measured[i], expected[i], tol_eig));
    Eigen::VectorXd ev = Eigen::Map<const Eigen::VectorXd>(expected.data(), expected.size());
    std::vector<int> want, got;
    for (const EigenCluster& c : cluster_eigenvalues(ev)) want.push_back(c.multiplicity);
    for (const EigenCluster& c : rep.eigenvalues) got.push_back(c.multiplicity);
    env.add(make_check(label + " multiplicities", want == got ? 0.0 : 1.0, 0.0, 0.0));
  }
  if (s == Sign::zero) {
    double worst = 0.0;
    for (const ChartVector& at : patch->grid(cfg.grid_density, 81))
      worst = std::max(worst, horosphere_defect(*patch, at));
    env.add(make_check(label + " horosphere relation", worst, 0.0, cfg.tol("horosphere")));
  }
}

void one_param_checks(ReportEnvelope& env, const RunConfig& cfg, const OneParamData& d) {
  std::optional<HypersurfacePatch> patch;
  try {
    patch = build_psi(d);
  } catch (const ImmersionError& e) {
    env.errors.push_back(std::string("non-immersion: ") + e.what());
    env.reports.push_back(Json{{"constants", one_param_to_json(d)},
                               {"error", e.what()},
                               {"condition", "y0 = y1 = 0 and alpha0 + alpha1 = 2w"}});
    return;
  }
  const std::string& label = patch->label();
  const ShapeReport rep = verify_axi2xi(*patch, patch->grid(cfg.grid_density, 81), cfg.fd_step,
                                        cfg.verify_tolerances());
  Json j = shape_report_to_json(rep);
  j["constants"] = one_param_to_json(d);
  shape_checks(env, cfg, label, rep);
  int unit_failures = 0;
  for (const std::string& f : rep.failures)
    if (f.rfind("eigenvalue 1", 0) == 0) ++unit_failures;
  env.add(make_check(label + " eigenvalue 1 multiplicity failures", unit_failures, 0.0, 0.0));

  const double tol_rho = cfg.tol("rho");
  const int lam = cko_lambda_index(2);
  Json rho = Json::array();
  std::vector<double> measured_at;
  for (double lambda : {0.5, 1.0, 2.0}) {
    ChartVector at = patch->center();
    at[lam] = lambda;
    const RhoMeasurement m = measured_rho(*patch, at, cfg.fd_step);
    measured_at.push_back(m.rho);
    try {
      const double pred = predicted_rho(d, lambda);
      env.add(make_check(label + " rho(" + fmt(lambda) + ")", m.rho, pred, tol_rho));
      rho.push_back(Json{{"lambda", lambda}, {"measured", m.rho}, {"predicted", pred}, {"alignment", m.alignment}});
    } catch (const DegenerateError& e) {
      env.errors.push_back(label + ": " + e.what());
      rho.push_back(Json{{"lambda", lambda}, {"measured", m.rho}, {"predicted", nullptr}});
    }
  }
  j["rho"] = rho;

  // rho depends on lambda only
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double theta : {0.0, 0.5, 1.0})
    for (double x : {-0.5, 0.5})
      for (double h : {-0.5, 0.5}) {
        ChartVector at(4);
        at << theta, x, h, 1.0;
        const double v = measured_rho(*patch, at, cfg.fd_step).rho;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  env.add(make_check(label + " rho spread at lambda 1", hi - lo, 0.0, tol_rho));

  const bool horo = horosphere_test(d);
  j["horosphere"] = horo;
  j["rho_variation"] = std::abs(measured_at[1] - measured_at[2]);
  if (horo) {
    double dev = 0.0;
    for (double v : measured_at) dev = std::max(dev, std::abs(v - 1.0));
    env.add(make_check(label + " rho constant 1", dev, 0.0, tol_rho));
  }
  env.reports.push_back(std::move(j));
}

void form_mc_checks(ReportEnvelope& env, const RunConfig& cfg, const std::string& name,
                    const CKOForm& f) {
  const MaurerCartanReport mc = maurer_cartan_report(f);
  Json j{{"form", name}, {"dim_g", f.dim_g}, {"n", f.dim_n()}, {"trivially_integrable", mc.trivially_integrable}};
  Json eq = Json::object();
  for (const MaurerCartanEquation& e : mc.equations) eq[e.name] = e.residual;
  j["equations"] = eq;
  j["residual"] = mc.residual;
  j["commutator_residual"] = mc.commutator_residual;
  const double tol_mc = cfg.tol("mc");
  env.add(make_check(name + " maurer-cartan residual", mc.residual, 0.0, tol_mc));
  env.add(make_check(name + " commutator residual", mc.commutator_residual, 0.0, tol_mc));
  if (f.dim_g >= 2) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::VectorXd end(f.dim_g);
    for (int k = 0; k < f.dim_g; ++k) end[k] = u(rng);
    const double w = two_path_witness(f, GroupElement::identity(f.dim_n()), end);
    j["witness_endpoint"] = chart_json(end);
    j["two_path_witness"] = w;
    env.add(make_check(name + " two-path witness", w, 0.0, cfg.tol("witness")));
  }
  env.reports.push_back(std::move(j));
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::verify_curves: return "verify-curves";
    case Command::build_example: return "build-example";
    case Command::verify_hopf: return "verify-hopf";
    case Command::cko_run: return "cko-run";
    case Command::mc_check: return "mc-check";
  }
  return "";
}

Command parse_command(const std::string& text) {
  for (Command c : {Command::verify_curves, Command::build_example, Command::verify_hopf,
                    Command::cko_run, Command::mc_check})
    if (to_string(c) == text) return c;
  throw InputError("unknown command '" + text + "'");
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tols = {
      {"curvature", 1e-4}, {"circle", 1e-4},   {"parallel", 1e-10},  {"hopf", 1e-4},
      {"symmetry", 1e-5},  {"lsq", 1e-4},      {"mu", 1e-4},         {"mu_const", 1e-4},
      {"pc2", 1e-4},       {"eigen", 1e-4},    {"horosphere", 1e-12}, {"rho", 1e-4},
      {"mc", 1e-12},       {"witness", 1e-6}};
  return tols;
}

void RunConfig::validate() const {
  if (n < 2) throw InputError("n must be at least 2");
  if (grid_density < 2) throw InputError("grid density must be at least 2");
  if (!(fd_step > 0.0 && fd_step <= 1e-2)) throw InputError("step must lie in (0, 1e-2]");
  if (r && !std::isfinite(*r)) throw InputError("r must be finite");
  for (const auto& [name, v] : tolerances) {
    if (!default_tolerances().count(name)) throw InputError("unknown tolerance '" + name + "'");
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("tolerance '" + name + "' must be positive");
  }
}

double RunConfig::tol(const std::string& name) const {
  auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  auto d = default_tolerances().find(name);
  if (d == default_tolerances().end()) throw InputError("unknown tolerance '" + name + "'");
  return d->second;
}

VerifyTolerances RunConfig::verify_tolerances() const {
  VerifyTolerances t;
  t.hopf = tol("hopf");
  t.symmetry = tol("symmetry");
  t.lsq = tol("lsq");
  t.mu = tol("mu");
  t.mu_const = tol("mu_const");
  t.pc2 = tol("pc2");
  return t;
}

void apply_config_json(RunConfig& cfg, const Json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const Json& v = it.value();
      if (key == "command") cfg.command = parse_command(v.get<std::string>());
      else if (key == "n") cfg.n = v.get<int>();
      else if (key == "s") cfg.s = v.is_null() ? std::nullopt : std::optional<Sign>(parse_sign(v.get<std::string>()));
      else if (key == "r") cfg.r = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "k") cfg.k = v.get<int>();
      else if (key == "grid") cfg.grid_density = v.get<int>();
      else if (key == "step") cfg.fd_step = v.get<double>();
      else if (key == "tolerances") {
        for (auto t = v.begin(); t != v.end(); ++t) cfg.tolerances[t.key()] = t.value().get<double>();
      } else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "out") cfg.output_path = v.get<std::string>();
      else if (key == "format") {
        const std::string f = v.get<std::string>();
        if (f == "json") cfg.format = OutputFormat::json;
        else if (f == "csv") cfg.format = OutputFormat::csv;
        else throw InputError("format must be json or csv");
      } else if (key == "constants") cfg.constants_path = v.get<std::string>();
      else if (key == "timing") cfg.timing = v.get<bool>();
      else throw InputError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

Json config_to_json(const RunConfig& cfg) {
  Json tols = Json::object();
  for (const auto& [name, v] : default_tolerances()) tols[name] = cfg.tol(name);
  return Json{{"command", to_string(cfg.command)},
              {"n", cfg.n},
              {"s", cfg.s ? Json(to_string(*cfg.s)) : Json(nullptr)},
              {"r", opt_number(cfg.r)},
              {"k", cfg.k},
              {"grid", cfg.grid_density},
              {"step", cfg.fd_step},
              {"tolerances", tols},
              {"seed", cfg.seed},
              {"out", cfg.output_path},
              {"format", cfg.format == OutputFormat::json ? "json" : "csv"},
              {"constants", cfg.constants_path},
              {"timing", cfg.timing}};
}

CheckRecord make_check(std::string name, double value, std::optional<double> expected,
                       double tolerance, std::string relation) {
  CheckRecord c{std::move(name), value, expected, tolerance, std::move(relation), false};
  const double e = expected.value_or(0.0);
  if (std::isfinite(value)) {
    if (c.relation == "gt") c.pass = value - e > tolerance;
    else if (c.relation == "lt") c.pass = e - value > tolerance;
    else c.pass = std::abs(value - e) <= tolerance;
  }
  return c;
}

void ReportEnvelope::finalize() {
  certified = errors.empty() && !checks.empty() &&
              std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

Json shape_report_to_json(const ShapeReport& rep) {
  Json points = Json::array();
  for (const PointSummary& p : rep.points) {
    Json ev = Json::array();
    for (Eigen::Index k = 0; k < p.eigenvalues.size(); ++k) ev.push_back(p.eigenvalues[k]);
    points.push_back(Json{{"at", chart_json(p.at)},
                          {"mu", p.mu},
                          {"hopf_residual", p.hopf_residual},
                          {"symmetry_residual", p.symmetry_residual},
                          {"eigenvalues", ev}});
  }
  return Json{{"label", rep.label},
              {"sign", to_string(rep.sign)},
              {"r", rep.r},
              {"n", rep.dim_n},
              {"mu", rep.mu},
              {"mu_spread", rep.mu_spread},
              {"expected_mu", opt_number(rep.expected_mu)},
              {"orientation", rep.orientation()},
              {"eigenvalues_normal_lift", clusters_json(rep.eigenvalues)},
              {"eigenvalues_flipped_normal", clusters_json(rep.flipped_eigenvalues())},
              {"eigenvalues_adjusted", clusters_json(rep.adjusted_eigenvalues())},
              {"spectrum_uniform", rep.spectrum_uniform},
              {"hopf_residual", rep.hopf_residual},
              {"symmetry_residual", rep.symmetry_residual},
              {"lsq_residual", rep.lsq_residual},
              {"min_singular", rep.min_singular},
              {"pc2_residual_max", abs_max(rep.pc2_residuals)},
              {"pc2_pairs", rep.pc2_residuals.size()},
              {"grid_size", rep.grid_size},
              {"certified", rep.certified},
              {"failures", rep.failures},
              {"points", points}};
}

Json envelope_to_json(const ReportEnvelope& env) {
  Json checks = Json::array();
  for (const CheckRecord& c : env.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"value", c.value},
                          {"expected", opt_number(c.expected)},
                          {"tolerance", c.tolerance},
                          {"relation", c.relation},
                          {"pass", c.pass}});
  }
  return Json{{"artifact_version", env.artifact_version},
              {"config", config_to_json(env.config)},
              {"reports", env.reports},
              {"checks", checks},
              {"errors", env.errors},
              {"certified", env.certified},
              {"wall_time_ms", env.wall_time_ms}};
}

std::string serialize_json(const Json& j) {
  std::string out;
  emit(j, 0, out);
  out += "\n";
  return out;
}

std::string serialize_csv(const ReportEnvelope& env) {
  std::ostringstream os;
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  bool any_points = false;
  for (const Json& r : env.reports) any_points = any_points || r.contains("points");
  if (any_points) {
    os << "report,point,coordinates,index,eigenvalue\n";
    for (const Json& r : env.reports) {
      if (!r.contains("points")) continue;
      const std::string label = r.value("label", std::string());
      std::size_t pi = 0;
      for (const Json& p : r["points"]) {
        std::string coords;
        for (const Json& c : p["at"]) coords += (coords.empty() ? "" : ";") + num(c.get<double>());
        std::size_t ei = 0;
        for (const Json& e : p["eigenvalues"])
          os << '"' << label << "\"," << pi << ',' << coords << ',' << ei++ << ',' << num(e.get<double>()) << '\n';
        ++pi;
      }
    }
  } else {
    os << "name,value,expected,tolerance,relation,pass\n";
    for (const CheckRecord& c : env.checks) {
      os << '"' << c.name << "\"," << num(c.value) << ',' << (c.expected ? num(*c.expected) : "")
         << ',' << num(c.tolerance) << ',' << c.relation << ',' << (c.pass ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

ParsedConstants parse_constants(const Json& j) {
  if (!j.is_object()) throw InputError("constants must be a JSON object");
  ParsedConstants out;
  try {
    if (j.contains("dim_g")) {
      CKOForm f;
      f.dim_g = j.at("dim_g").get<int>();
      const int m = static_cast<int>(j.at("x").size());
      auto vec = [&](const char* key) {
        const std::vector<double> v = j.at(key).get<std::vector<double>>();
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
      };
      auto mat = [&](const Json& rows) {
        Eigen::MatrixXd out_m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != static_cast<std::size_t>(out_m.cols()))
            throw InputError("constants: ragged matrix");
          for (std::size_t c = 0; c < rows[r].size(); ++c) out_m(r, c) = rows[r][c].get<double>();
        }
        return out_m;
      };
      f.alpha0 = vec("alpha0");
      f.alpha1 = vec("alpha1");
      f.x_form = mat(j.at("x"));
      f.y0 = mat(j.at("y0"));
      f.y1 = mat(j.at("y1"));
      for (const char* key : {"w1", "w2"}) {
        std::vector<Eigen::MatrixXd>& slices = key[1] == '1' ? f.w1 : f.w2;
        if (j.contains(key)) {
          for (const Json& s : j.at(key)) slices.push_back(mat(s));
        } else {
          slices.assign(f.dim_g, Eigen::MatrixXd::Zero(m, m));
        }
      }
      validate_cko(f);
      out.form = std::move(f);
    } else {
      OneParamData d;
      d.alpha0 = j.value("alpha0", 0.0);
      d.alpha1 = j.value("alpha1", 0.0);
      d.x = j.value("x", 0.0);
      d.y0 = j.value("y0", 0.0);
      d.y1 = j.value("y1", 0.0);
      d.w = j.value("w", 0.0);
      for (auto it = j.begin(); it != j.end(); ++it) {
        static const char* known[] = {"alpha0", "alpha1", "x", "y0", "y1", "w", "base"};
        if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }))
          throw InputError("constants: unknown key '" + it.key() + "'");
      }
      if (j.contains("base")) {
        const Json& rows = j.at("base");
        CMatrix b(rows.size(), rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].size() != rows.size()) throw InputError("constants: base must be square");
          for (std::size_t c = 0; c < rows.size(); ++c)
            b(r, c) = cplx(rows[r][c].at(0).get<double>(), rows[r][c].at(1).get<double>());
        }
        d.base = validate_group(b);
      }
      d.validate();
      out.one_param = d;
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("constants: ") + e.what());
  } catch (const ValidationError& e) {
    throw InputError(std::string("constants: ") + e.what());
  }
  return out;
}

ParsedConstants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open constants file '" + path + "'");
  try {
    return parse_constants(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("constants file '" + path + "': " + e.what());
  }
}

Json one_param_to_json(const OneParamData& d) {
  Json base = Json::array();
  const CMatrix& b = d.base.matrix();
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(Json::array({b(r, c).real(), b(r, c).imag()}));
    base.push_back(row);
  }
  return Json{{"alpha0", d.alpha0}, {"alpha1", d.alpha1}, {"x", d.x}, {"y0", d.y0},
              {"y1", d.y1},         {"w", d.w},           {"base", base}};
}

Json cko_form_to_json(const CKOForm& f) {
  auto mat = [](const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  Json w1 = Json::array(), w2 = Json::array();
  for (const auto& s : f.w1) w1.push_back(mat(s));
  for (const auto& s : f.w2) w2.push_back(mat(s));
  return Json{{"dim_g", f.dim_g}, {"alpha0", vec(f.alpha0)}, {"alpha1", vec(f.alpha1)},
              {"x", mat(f.x_form)}, {"y0", mat(f.y0)}, {"y1", mat(f.y1)}, {"w1", w1}, {"w2", w2}};
}

std::vector<double> closed_form_spectrum(const std::string& example, int n, int k, double r) {
  std::vector<double> out;
  if (example == "tube-chk") {
    if (r == 0.0) throw DegenerateError("tube over CH^k: radius 0");
    out.push_back(-2.0 / std::tanh(2.0 * r));
    out.insert(out.end(), 2 * k, -std::tanh(r));
    out.insert(out.end(), 2 * (n - k - 1), -1.0 / std::tanh(r));
  } else if (example == "tube-rhn") {
    if (r == 0.0) throw DegenerateError("tube over RH^n: radius 0");
    out.push_back(-2.0 * std::tanh(2.0 * r));
    out.insert(out.end(), n - 1, -std::tanh(r));
    out.insert(out.end(), n - 1, -1.0 / std::tanh(r));
  } else if (example == "horosphere") {
    out.push_back(-2.0);
    out.insert(out.end(), 2 * n - 2, -1.0);
  } else {
    throw InputError("unknown example '" + example + "'");
  }
  std::sort(out.begin(), out.end());
  return out;
}

ReportEnvelope cmd_verify_curves(const RunConfig& cfg) {
  ReportEnvelope env;
  env.config = cfg;
  const StiefelPoint base = seeded_base(cfg.n, cfg.seed);
  std::vector<Sign> signs = cfg.s ? std::vector<Sign>{*cfg.s}
                                  : std::vector<Sign>{Sign::plus, Sign::minus, Sign::zero};
  const std::vector<double> radii = cfg.r ? std::vector<double>{*cfg.r}
                                          : std::vector<double>{-1.0, -0.5, 0.2, 0.5, 1.0};
  const std::vector<double> times = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const std::vector<double> shift_r = cfg.r ? std::vector<double>{*cfg.r}
                                            : std::vector<double>{-1.0, -0.6, -0.2, 0.3, 0.8};
  const std::vector<double> shifts = {-0.5, -0.25, 0.0, 0.25, 0.5};
  for (Sign s : signs) {
    Json rec{{"sign", to_string(s)}};
    double kappa_dev = 0.0, circle = 0.0, parallel = 0.0;
    Json items = Json::array();
    for (double r : radii) {
      const std::string key = "curve s=" + to_string(s) + " r=" + fmt(r);
      if (s == Sign::plus && r == 0.0) {
        env.errors.push_back(key + ": degenerate radius");
        items.push_back(Json{{"r", r}, {"error", "degenerate radius"}});
        continue;
      }
      // kappa is reported unsigned; sigma carries the orientation.
      const double expected = std::abs(s == Sign::plus    ? 2.0 / std::tanh(2.0 * r)
                                       : s == Sign::minus ? 2.0 * std::tanh(2.0 * r)
                                                          : 2.0);
      const ParamCurve c = gamma_curve(s, r, base);
      for (double t : times) {
        try {
          const CurvatureResult k = curve_curvature(c, t, cfg.fd_step);
          kappa_dev = std::max(kappa_dev, std::abs(k.kappa - expected));
          circle = std::max(circle, k.residual);
          items.push_back(Json{{"r", r}, {"t", t}, {"kappa", k.kappa}, {"sigma", k.sigma}, {"expected", expected}});
          env.add(make_check(key + " t=" + fmt(t) + " curvature", k.kappa, expected,
                             cfg.tol("curvature")));
          env.add(make_check(key + " t=" + fmt(t) + " circle residual", k.residual, 0.0,
                             cfg.tol("circle")));
        } catch (const HopfError& e) {
          env.errors.push_back(key + " t=" + fmt(t) + ": " + e.what());
        }
      }
    }
    for (double r : shift_r) {
      if (s == Sign::plus && r == 0.0) continue;
      for (double rp : shifts)
        for (double t : times) {
          try {
            const double res = parallel_shift_residual(s, r, rp, base, t);
            parallel = std::max(parallel, res);
            env.add(make_check("parallel s=" + to_string(s) + " r=" + fmt(r) + " r'=" + fmt(rp) +
                                   " t=" + fmt(t),
                               res, 0.0, cfg.tol("parallel")));
          } catch (const HopfError& e) {
            env.errors.push_back("parallel s=" + to_string(s) + " r=" + fmt(r) + ": " + e.what());
          }
        }
    }
    rec["max_curvature_deviation"] = kappa_dev;
    rec["max_circle_residual"] = circle;
    rec["max_parallel_residual"] = parallel;
    rec["items"] = items;
    env.reports.push_back(std::move(rec));
  }
  env.finalize();
  return env;
}

ReportEnvelope cmd_build_example(const RunConfig& cfg) {
  ReportEnvelope env;
  env.config = cfg;
  example_checks(env, cfg, cfg.s.value_or(Sign::plus));
  env.finalize();
  return env;
}

ReportEnvelope cmd_verify_hopf(const RunConfig& cfg) {
  ReportEnvelope env;
  env.config = cfg;
  if (cfg.s) {
    example_checks(env, cfg, *cfg.s);
  } else {
    for (Sign s : {Sign::plus, Sign::minus, Sign::zero}) example_checks(env, cfg, s);
  }
  env.finalize();
  return env;
}

ReportEnvelope cmd_cko(const RunConfig& cfg) {
  if (cfg.constants_path.empty()) throw InputError("cko-run needs --constants");
  const ParsedConstants pc = load_constants(cfg.constants_path);
  ReportEnvelope env;
  env.config = cfg;
  if (pc.one_param) {
    one_param_checks(env, cfg, *pc.one_param);
  } else {
    const CKOForm& f = *pc.form;
    form_mc_checks(env, cfg, "constants", f);
    if (maurer_cartan_residual(f) <= cfg.tol("mc")) {
      try {
        const HypersurfacePatch patch = build_psi(f, GroupElement::identity(f.dim_n()));
        const ShapeReport rep = verify_axi2xi(patch, patch.grid(cfg.grid_density, 81), cfg.fd_step,
                                              cfg.verify_tolerances());
        Json j = shape_report_to_json(rep);
        j["constants"] = cko_form_to_json(f);
        env.reports.push_back(std::move(j));
        shape_checks(env, cfg, patch.label(), rep);
        env.add(make_check(patch.label() + " certified", rep.certified ? 0.0 : 1.0, 0.0, 0.0));
      } catch (const HopfError& e) {
        env.errors.push_back(e.what());
      }
    }
  }
  env.finalize();
  return env;
}

ReportEnvelope cmd_mc_check(const RunConfig& cfg) {
  ReportEnvelope env;
  env.config = cfg;
  if (!cfg.constants_path.empty()) {
    const ParsedConstants pc = load_constants(cfg.constants_path);
    form_mc_checks(env, cfg, "constants", pc.form ? *pc.form : pc.one_param->as_form());
  } else {
    for (const auto& [name, f] : integrable_examples(cfg.seed)) form_mc_checks(env, cfg, name, f);
  }
  env.finalize();
  return env;
}

ReportEnvelope run_command(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ReportEnvelope env;
  switch (cfg.command) {
    case Command::verify_curves: env = cmd_verify_curves(cfg); break;
    case Command::build_example: env = cmd_build_example(cfg); break;
    case Command::verify_hopf: env = cmd_verify_hopf(cfg); break;
    case Command::cko_run: env = cmd_cko(cfg); break;
    case Command::mc_check: env = cmd_mc_check(cfg); break;
  }
  if (cfg.timing) {
    env.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
  return env;
}

std::vector<std::pair<std::string, CKOForm>> integrable_examples(std::uint64_t seed) {
  std::vector<std::pair<std::string, CKOForm>> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  CKOForm axis = CKOForm::zero(3, 2);
  axis.x_form(0, 0) = 1.0;
  out.emplace_back("x-axis", axis);

  // Every coefficient proportional to one direction c: all wedges vanish.
  CKOForm prop = CKOForm::zero(3, 2);
  const Eigen::Vector2d c(u(rng), u(rng));
  const double a0 = u(rng), a1 = u(rng), w12 = u(rng);
  const Eigen::Vector2d x(u(rng), u(rng)), y0(u(rng), u(rng));
  const double y_ratio = u(rng);
  Eigen::Matrix2d w1, w2;
  w1 << 0.0, w12, -w12, 0.0;
  w2 << u(rng), 0.0, 0.0, u(rng);
  w2(0, 1) = w2(1, 0) = u(rng);
  for (int j = 0; j < 2; ++j) {
    prop.alpha0[j] = c[j] * a0;
    prop.alpha1[j] = c[j] * a1;
    prop.x_form.col(j) = c[j] * x;
    prop.y0.col(j) = c[j] * y0;
    prop.y1.col(j) = c[j] * y_ratio * y0;
    prop.w1[j] = c[j] * w1;
    prop.w2[j] = c[j] * w2;
  }
  out.emplace_back("proportional", prop);

  // alpha0 = alpha1 with diagonal w2 slices: the axis generators commute.
  CKOForm diag = CKOForm::zero(3, 2);
  for (int j = 0; j < 2; ++j) {
    diag.alpha0[j] = diag.alpha1[j] = u(rng);
    diag.w2[j] = Eigen::Vector2d(u(rng), u(rng)).asDiagonal();
  }
  out.emplace_back("diagonal", diag);
  return out;
}

}  // namespace hopf
