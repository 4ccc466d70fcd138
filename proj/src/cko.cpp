#include "hopf_twistor/cko.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hopf {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                   const std::string& what) {
  if (m.rows() != rows || m.cols() != cols)
    throw InputError("CKO form: " + what + " must be " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  if (!m.allFinite()) throw InputError("CKO form: " + what + " has non-finite entries");
}

// (sigma ^ tau)(e_i, e_j) for the block shapes appearing in the system.
Eigen::VectorXd vs_wedge(const Eigen::VectorXd& vi, const Eigen::VectorXd& vj, double ti,
                         double tj) {
  return vi * tj - vj * ti;
}

Eigen::VectorXd mv_wedge(const Eigen::MatrixXd& mi, const Eigen::MatrixXd& mj,
                         const Eigen::VectorXd& vi, const Eigen::VectorXd& vj) {
  return mi * vj - mj * vi;
}

Eigen::MatrixXd outer_wedge(const Eigen::VectorXd& ui, const Eigen::VectorXd& uj,
                            const Eigen::VectorXd& vi, const Eigen::VectorXd& vj) {
  return ui * vj.transpose() - uj * vi.transpose();
}

Eigen::MatrixXd mat_wedge(const Eigen::MatrixXd& ai, const Eigen::MatrixXd& aj,
                          const Eigen::MatrixXd& bi, const Eigen::MatrixXd& bj) {
  return ai * bj - aj * bi;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Complex lifts of the model point and normal before g and the fibre phase.
CVector model_position(double h, double lambda, const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size()) + 1;
  CVector z(n + 1);
  z[0] = cplx(1.0 + 0.5 * lambda * lambda, -h);
  z[1] = cplx(-0.5 * lambda * lambda, h);
  for (int k = 0; k < n - 1; ++k) z[2 + k] = lambda * p[k];
  return z;
}

CVector model_normal(double h, double lambda, const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size()) + 1;
  CVector z(n + 1);
  z[0] = cplx(-0.5 * lambda * lambda, h);
  z[1] = cplx(0.5 * lambda * lambda - 1.0, -h);
  for (int k = 0; k < n - 1; ++k) z[2 + k] = -lambda * p[k];
  return z;
}

Eigen::VectorXd sphere_point(const Eigen::VectorXd& v) {
  Eigen::VectorXd p(v.size() + 1);
  p << 1.0, v;
  return p / p.norm();
}

}  // namespace

CKOForm CKOForm::zero(int n, int dim_g) {
  if (n < 2) throw InputError("CKO form: n must be at least 2");
  if (dim_g < 1) throw InputError("CKO form: dim_g must be at least 1");
  CKOForm f;
  f.dim_g = dim_g;
  f.alpha0 = Eigen::VectorXd::Zero(dim_g);
  f.alpha1 = Eigen::VectorXd::Zero(dim_g);
  f.x_form = Eigen::MatrixXd::Zero(n - 1, dim_g);
  f.y0 = Eigen::MatrixXd::Zero(n - 1, dim_g);
  f.y1 = Eigen::MatrixXd::Zero(n - 1, dim_g);
  f.w1.assign(dim_g, Eigen::MatrixXd::Zero(n - 1, n - 1));
  f.w2.assign(dim_g, Eigen::MatrixXd::Zero(n - 1, n - 1));
  return f;
}

double y_wedge_residual(const CKOForm& f) {
  double worst = 0.0;
  for (int i = 0; i < f.dim_g; ++i)
    for (int j = i + 1; j < f.dim_g; ++j)
      worst = std::max(worst, std::abs(f.y0.col(i).dot(f.y1.col(j)) - f.y0.col(j).dot(f.y1.col(i))));
  return worst;
}

void validate_cko(const CKOForm& f) {
  if (f.dim_g < 1) throw InputError("CKO form: dim_g must be at least 1");
  const Eigen::Index m = f.x_form.rows();
  if (m < 1) throw InputError("CKO form: n must be at least 2");
  if (f.dim_g != m) throw InputError("CKO form: dim_g must equal n - 1");
  require_shape(f.alpha0, f.dim_g, 1, "alpha0");
  require_shape(f.alpha1, f.dim_g, 1, "alpha1");
  require_shape(f.x_form, m, f.dim_g, "x");
  require_shape(f.y0, m, f.dim_g, "y0");
  require_shape(f.y1, m, f.dim_g, "y1");
  if (f.w1.size() != static_cast<std::size_t>(f.dim_g) ||
      f.w2.size() != static_cast<std::size_t>(f.dim_g))
    throw InputError("CKO form: w1 and w2 need one slice per direction");
  for (int j = 0; j < f.dim_g; ++j) {
    require_shape(f.w1[j], m, m, "w1 slice " + std::to_string(j));
    require_shape(f.w2[j], m, m, "w2 slice " + std::to_string(j));
    const double alt = max_abs(f.w1[j] + f.w1[j].transpose());
    if (alt != 0.0)
      throw ValidationError("CKO form: w1 slice " + std::to_string(j) + " is not alternating", alt);
    const double sym = max_abs(f.w2[j] - f.w2[j].transpose());
    if (sym != 0.0)
      throw ValidationError("CKO form: w2 slice " + std::to_string(j) + " is not symmetric", sym);
    if (m == 1 && f.w1[j](0, 0) != 0.0)
      throw ValidationError("CKO form: w1 must vanish for n = 2", std::abs(f.w1[j](0, 0)));
  }
  const double wedge_res = y_wedge_residual(f);
  if (wedge_res > 1e-12)
    throw ValidationError("CKO form: y0 and y1 are not linearly dependent (wedge " +
                              num(wedge_res) + ")",
                          wedge_res);
}

AlgebraElement assemble_omega(const CKOForm& f, const Eigen::VectorXd& y) {
  validate_cko(f);
  if (y.size() != f.dim_g) throw InputError("assemble_omega: direction has the wrong length");
  if (!y.allFinite()) throw InputError("assemble_omega: direction has non-finite entries");
  const int n = f.dim_n();
  const int m = n - 1;
  const double a0 = f.alpha0.dot(y);
  const double a1 = f.alpha1.dot(y);
  const Eigen::VectorXd x = f.x_form * y;
  const Eigen::VectorXd y0 = f.y0 * y;
  const Eigen::VectorXd y1 = f.y1 * y;
  Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(m, m), w2 = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < f.dim_g; ++j) {
    w1 += y[j] * f.w1[j];
    w2 += y[j] * f.w2[j];
  }
  CMatrix om = CMatrix::Zero(n + 1, n + 1);
  om(0, 0) = cplx(0.0, a0);
  om(0, 1) = cplx(0.0, 0.5 * (a0 - a1));
  om(1, 0) = cplx(0.0, 0.5 * (a1 - a0));
  om(1, 1) = cplx(0.0, a1);
  for (int k = 0; k < m; ++k) {
    om(0, 2 + k) = cplx(x[k], -y0[k]);
    om(1, 2 + k) = cplx(-x[k], y1[k]);
    om(2 + k, 0) = cplx(x[k], y0[k]);
    om(2 + k, 1) = cplx(x[k], y1[k]);
    for (int l = 0; l < m; ++l) om(2 + k, 2 + l) = cplx(w1(k, l), w2(k, l));
  }
  return validate_algebra(om, 1e-12);
}

AlgebraElement omega_axis(const CKOForm& f, int j) {
  if (j < 0 || j >= f.dim_g) throw InputError("omega_axis: direction index out of range");
  return assemble_omega(f, Eigen::VectorXd::Unit(f.dim_g, j));
}

MaurerCartanTerms maurer_cartan_terms(const CKOForm& f, int i, int j) {
  validate_cko(f);
  if (i < 0 || j < 0 || i >= f.dim_g || j >= f.dim_g)
    throw InputError("maurer_cartan_terms: direction index out of range");
  const double a0i = f.alpha0[i], a0j = f.alpha0[j], a1i = f.alpha1[i], a1j = f.alpha1[j];
  const Eigen::VectorXd xi = f.x_form.col(i), xj = f.x_form.col(j);
  const Eigen::VectorXd y0i = f.y0.col(i), y0j = f.y0.col(j);
  const Eigen::VectorXd y1i = f.y1.col(i), y1j = f.y1.col(j);
  const Eigen::MatrixXd &w1i = f.w1[i], &w1j = f.w1[j], &w2i = f.w2[i], &w2j = f.w2[j];

  MaurerCartanTerms t;
  t.alpha0 = 2.0 * (xi.dot(y0j) - xj.dot(y0i));
  t.alpha1 = -2.0 * (xi.dot(y1j) - xj.dot(y1i));
  t.y0y1 = y0i.dot(y1j) - y0j.dot(y1i);
  t.x_from_y0 = -vs_wedge(y0i, y0j, a0i, a0j) - 0.5 * vs_wedge(y1i, y1j, a1i, a1j) +
                0.5 * vs_wedge(y1i, y1j, a0i, a0j) + mv_wedge(w1i, w1j, xi, xj) -
                mv_wedge(w2i, w2j, y0i, y0j);
  t.y0 = 0.5 * vs_wedge(xi, xj, a0i, a0j) + 0.5 * vs_wedge(xi, xj, a1i, a1j) +
         mv_wedge(w2i, w2j, xi, xj) + mv_wedge(w1i, w1j, y0i, y0j);
  t.x_from_y1 = -0.5 * vs_wedge(y0i, y0j, a0i, a0j) + 0.5 * vs_wedge(y0i, y0j, a1i, a1j) -
                vs_wedge(y1i, y1j, a1i, a1j) + mv_wedge(w1i, w1j, xi, xj) -
                mv_wedge(w2i, w2j, y1i, y1j);
  t.y1 = 0.5 * vs_wedge(xi, xj, a0i, a0j) + 0.5 * vs_wedge(xi, xj, a1i, a1j) +
         mv_wedge(w1i, w1j, y1i, y1j) + mv_wedge(w2i, w2j, xi, xj);
  t.w1 = outer_wedge(y0i, y0j, y0i, y0j) - outer_wedge(y1i, y1j, y1i, y1j) +
         mat_wedge(w1i, w1j, w1i, w1j) - mat_wedge(w2i, w2j, w2i, w2j);
  t.w2 = outer_wedge(y0i, y0j, xi, xj) - outer_wedge(xi, xj, y0i, y0j) +
         outer_wedge(xi, xj, y1i, y1j) - outer_wedge(y1i, y1j, xi, xj) +
         mat_wedge(w1i, w1j, w2i, w2j) + mat_wedge(w2i, w2j, w1i, w1j);
  return t;
}

MaurerCartanReport maurer_cartan_report(const CKOForm& f) {
  validate_cko(f);
  MaurerCartanReport rep;
  const char* names[] = {"alpha0", "alpha1", "y0^y1", "x/y0 real", "x/y0 imaginary",
                         "x/y1 real", "x/y1 imaginary", "w1", "w2"};
  for (const char* nm : names) rep.equations.push_back({nm, 0.0});
  if (f.dim_g < 2) {
    rep.trivially_integrable = true;
    return rep;
  }
  std::vector<AlgebraElement> axes;
  for (int j = 0; j < f.dim_g; ++j) axes.push_back(omega_axis(f, j));
  for (int i = 0; i < f.dim_g; ++i) {
    for (int j = i + 1; j < f.dim_g; ++j) {
      const MaurerCartanTerms t = maurer_cartan_terms(f, i, j);
      const double vals[] = {std::abs(t.alpha0), std::abs(t.alpha1), std::abs(t.y0y1),
                             max_abs(t.x_from_y0), max_abs(t.y0), max_abs(t.x_from_y1),
                             max_abs(t.y1), max_abs(t.w1), max_abs(t.w2)};
      for (std::size_t e = 0; e < rep.equations.size(); ++e)
        rep.equations[e].residual = std::max(rep.equations[e].residual, vals[e]);
      const CMatrix& a = axes[i].matrix();
      const CMatrix& b = axes[j].matrix();
      rep.commutator_residual =
          std::max(rep.commutator_residual, (a * b - b * a).cwiseAbs().maxCoeff());
    }
  }
  for (const MaurerCartanEquation& e : rep.equations) rep.residual = std::max(rep.residual, e.residual);
  return rep;
}

double maurer_cartan_residual(const CKOForm& f) { return maurer_cartan_report(f).residual; }

std::pair<GroupElement, GroupElement> two_path_endpoints(const CKOForm& f, const GroupElement& b0,
                                                         const Eigen::VectorXd& endpoint) {
  validate_cko(f);
  if (endpoint.size() != f.dim_g) throw InputError("two_path: endpoint has the wrong length");
  if (!endpoint.allFinite()) throw InputError("two_path: endpoint has non-finite entries");
  if (b0.dim_n() != f.dim_n()) throw InputError("two_path: base has the wrong dimension");
  GroupElement forward = b0, reverse = b0;
  for (int j = 0; j < f.dim_g; ++j) {
    forward = forward * matrix_exp(omega_axis(f, j), endpoint[j]);
    const int k = f.dim_g - 1 - j;
    reverse = reverse * matrix_exp(omega_axis(f, k), endpoint[k]);
  }
  return {forward, reverse};
}

double two_path_witness(const CKOForm& f, const GroupElement& b0, const Eigen::VectorXd& endpoint) {
  const auto [a, b] = two_path_endpoints(f, b0, endpoint);
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

void OneParamData::validate() const {
  const double c[] = {alpha0, alpha1, x, y0, y1, w};
  bool any = false;
  for (double v : c) {
    if (!std::isfinite(v)) throw InputError("1-parameter data: constants must be finite");
    any = any || v != 0.0;
  }
  if (!any) throw InputError("1-parameter data: constants are all zero");
  if (base.dim_n() != 2) throw InputError("1-parameter data: base must lie in U(1,2)");
}

CKOForm OneParamData::as_form() const {
  CKOForm f = CKOForm::zero(2, 1);
  f.alpha0[0] = alpha0;
  f.alpha1[0] = alpha1;
  f.x_form(0, 0) = x;
  f.y0(0, 0) = y0;
  f.y1(0, 0) = y1;
  f.w2[0](0, 0) = w;
  return f;
}

AlgebraElement OneParamData::omega() const {
  validate();
  return assemble_omega(as_form(), Eigen::VectorXd::Ones(1));
}

GroupElement one_param_group(const OneParamData& d, double t) {
  return d.base * matrix_exp(d.omega(), t);
}

bool one_param_degenerate(const OneParamData& d) {
  return d.y0 == 0.0 && d.y1 == 0.0 && d.alpha0 + d.alpha1 == 2.0 * d.w;
}

std::pair<double, double> rho_terms(const OneParamData& d, double lambda) {
  const double a = lambda * (2.0 * d.w - d.alpha0 - d.alpha1) + 2.0 * d.y1 +
                   3.0 * lambda * lambda * (d.y0 - d.y1);
  return {a, a + 2.0 * (d.y0 - d.y1)};
}

double predicted_rho(const OneParamData& d, double lambda) {
  if (!std::isfinite(lambda)) throw InputError("predicted_rho: lambda must be finite");
  const auto [a, b] = rho_terms(d, lambda);
  if (std::abs(b) < 1e-12)
    throw DegenerateError("predicted_rho: denominator vanishes at lambda = " + num(lambda) +
                          " (the W direction collapses)");
  return a / b;
}

bool horosphere_test(const OneParamData& d) { return d.y0 == d.y1; }

int cko_lambda_index(int dim_n) { return dim_n + 1; }

HypersurfacePatch build_psi(const GMap& g, int dim_n, int dim_g, std::string label,
                            const CKOChartBox& box) {
  if (dim_n < 2) throw InputError("build_psi: n must be at least 2");
  if (dim_g != dim_n - 1) throw InputError("build_psi: dim_g must equal n - 1");
  if (!(box.lambda_lo <= box.lambda_hi)) throw InputError("build_psi: empty lambda range");
  if (dim_n >= 3 && box.lambda_lo < 0.1)
    throw InputError("build_psi: lambda must stay >= 0.1 when n >= 3");
  const int v_dim = dim_n - 2;
  const int chart_dim = 2 * dim_n;
  ChartVector lower(chart_dim), upper(chart_dim);
  std::vector<std::string> names = {"theta"};
  lower[0] = 0.0;
  upper[0] = box.theta_span;
  for (int j = 0; j < dim_g; ++j) {
    lower[1 + j] = -box.x_span;
    upper[1 + j] = box.x_span;
    names.push_back(dim_g == 1 ? "x" : "x" + std::to_string(j + 1));
  }
  lower[1 + dim_g] = -box.h_span;
  upper[1 + dim_g] = box.h_span;
  names.push_back("h");
  lower[2 + dim_g] = box.lambda_lo;
  upper[2 + dim_g] = box.lambda_hi;
  names.push_back("lambda");
  for (int k = 0; k < v_dim; ++k) {
    lower[3 + dim_g + k] = -box.v_span;
    upper[3 + dim_g + k] = box.v_span;
    names.push_back("v" + std::to_string(k + 1));
  }

  auto parts = [dim_g, v_dim](const ChartVector& at) {
    struct Parts {
      cplx phase;
      Eigen::VectorXd x;
      double h, lambda;
      Eigen::VectorXd p;
    };
    return Parts{std::polar(1.0, at[0]), at.segment(1, dim_g), at[1 + dim_g], at[2 + dim_g],
                 sphere_point(at.tail(v_dim))};
  };
  PatchMap position = [g, parts](const ChartVector& at) {
    const auto q = parts(at);
    return q.phase * (g(q.x) * IndefVector(model_position(q.h, q.lambda, q.p)));
  };
  PatchMap normal = [g, parts](const ChartVector& at) {
    const auto q = parts(at);
    return q.phase * (g(q.x) * IndefVector(model_normal(q.h, q.lambda, q.p)));
  };
  HypersurfacePatch patch(std::move(label), Sign::zero, 0.0, dim_n, std::move(names),
                          std::move(position), std::move(normal), lower, upper);
  patch.set_expected_mu(2.0);

  std::vector<ChartVector> probes = {patch.center()};
  for (const ChartVector& c : patch.grid(2, 8)) probes.push_back(c);
  for (const ChartVector& at : probes) {
    const PatchResiduals r = patch_residuals(patch, at);
    if (r.normal_orthogonal > 1e-6) {
      throw ValidationError(patch.label() +
                                ": the normal is not orthogonal to the image (generator is not a "
                                "CKO form; residual " + num(r.normal_orthogonal) + ")",
                            r.normal_orthogonal);
    }
  }
  shape_operator(patch, patch.center());  // throws ImmersionError if rank deficient
  return patch;
}

HypersurfacePatch build_psi(const OneParamData& d, const CKOChartBox& box) {
  d.validate();
  if (one_param_degenerate(d)) {
    throw ImmersionError(
        "1-parameter data: y0 = y1 = 0 with alpha0 + alpha1 = 2w makes the W direction vanish, "
        "so the map is not an immersion",
        0.0);
  }
  const AlgebraElement om = d.omega();
  const GroupElement base = d.base;
  GMap g = [om, base](const Eigen::VectorXd& x) { return base * matrix_exp(om, x[0]); };
  std::ostringstream label;
  label << "cko(a0=" << d.alpha0 << ",a1=" << d.alpha1 << ",x=" << d.x << ",y0=" << d.y0
        << ",y1=" << d.y1 << ",w=" << d.w << ")";
  return build_psi(g, 2, 1, label.str(), box);
}

HypersurfacePatch build_psi(const CKOForm& f, const GroupElement& b0, const CKOChartBox& box) {
  const MaurerCartanReport mc = maurer_cartan_report(f);
  if (mc.residual > 1e-10)
    throw ValidationError("CKO form fails the Maurer-Cartan equations (residual " +
                              num(mc.residual) + ")",
                          mc.residual);
  if (b0.dim_n() != f.dim_n()) throw InputError("build_psi: base has the wrong dimension");
  std::vector<AlgebraElement> axes;
  for (int j = 0; j < f.dim_g; ++j) axes.push_back(omega_axis(f, j));
  GMap g = [axes, b0](const Eigen::VectorXd& x) {
    GroupElement out = b0;
    for (std::size_t j = 0; j < axes.size(); ++j) out = out * matrix_exp(axes[j], x[j]);
    return out;
  };
  return build_psi(g, f.dim_n(), f.dim_g, "cko-form(n=" + std::to_string(f.dim_n()) + ")", box);
}

HypersurfacePatch build_psi_generator(const AlgebraElement& omega, const GroupElement& b0,
                                      const CKOChartBox& box) {
  if (omega.dim_n() != 2 || b0.dim_n() != 2)
    throw InputError("build_psi_generator: generator and base must act on C^{1,2}");
  GMap g = [omega, b0](const Eigen::VectorXd& x) { return b0 * matrix_exp(omega, x[0]); };
  return build_psi(g, 2, 1, "cko-generator", box);
}

ShapeReport verify_axi2xi(const HypersurfacePatch& p, const std::vector<ChartVector>& grid,
                          double step, const VerifyTolerances& tol) {
  ShapeReport rep = verify_hopf(p, grid, step, tol);
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const PointSummary& pt = rep.points[i];
    int ones = 0;
    for (Eigen::Index k = 0; k < pt.eigenvalues.size(); ++k)
      if (std::abs(pt.eigenvalues[k] - 1.0) <= tol.mu) ++ones;
    if (ones < p.dim_n() - 1) {
      std::ostringstream msg;
      msg << "eigenvalue 1 has multiplicity " << ones << " < " << p.dim_n() - 1 << " at point "
          << i;
      rep.failures.push_back(msg.str());
    }
  }
  rep.certified = rep.failures.empty();
  return rep;
}

RhoMeasurement measured_rho(const HypersurfacePatch& p, const ChartVector& at, double step) {
  RhoMeasurement out;
  out.shape = shape_operator(p, at, step);
  const ChartDifferential d = chart_differential(p, at, step);
  const int m = static_cast<int>(out.shape.frame.size());
  const int lam = cko_lambda_index(p.dim_n());
  if (lam >= p.chart_dim()) throw InputError("measured_rho: patch is not a CKO chart");
  Eigen::VectorXd w(m), l(m);
  for (int k = 0; k < m; ++k) {
    w[k] = real_form(d.horizontal[0], out.shape.frame[k]);
    l[k] = real_form(d.horizontal[lam - 1], out.shape.frame[k]);
  }
  w[0] = 0.0;
  l[0] = 0.0;
  w -= l * (w.dot(l) / l.dot(l));
  const double wn = w.norm();
  if (!(wn > 1e-8)) throw DegenerateError("measured_rho: the W direction vanishes");
  int best = 0;
  double best_align = -1.0;
  for (int k = 0; k < m; ++k) {
    const double align = std::abs(out.shape.eigenvectors.col(k).dot(w)) / wn;
    if (align > best_align) {
      best_align = align;
      best = k;
    }
  }
  out.rho = out.shape.eigenvalues[best];
  out.alignment = best_align;
  return out;
}

OneParamData random_one_param(std::uint64_t seed, bool equal_y) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    OneParamData d;
    d.alpha0 = u(rng);
    d.alpha1 = u(rng);
    d.x = u(rng);
    d.y0 = u(rng);
    d.y1 = equal_y ? d.y0 : u(rng);
    d.w = u(rng);

    CMatrix gen = CMatrix::Zero(3, 3);
    gen(0, 0) = cplx(0.0, u(rng));
    for (int k = 1; k <= 2; ++k) {
      gen(k, 0) = cplx(u(rng), u(rng));
      gen(0, k) = std::conj(gen(k, 0));
      gen(k, k) = cplx(0.0, u(rng));
    }
    gen(1, 2) = cplx(u(rng), u(rng));
    gen(2, 1) = -std::conj(gen(1, 2));
    gen *= 0.5 / std::max(1e-12, gen.cwiseAbs().maxCoeff());
    d.base = matrix_exp(validate_algebra(gen), 1.0);

    bool ok = !one_param_degenerate(d);
    for (int k = 0; ok && k <= 200; ++k) {
      const double lambda = 0.4 + 1.7 * k / 200.0;
      const auto [a, b] = rho_terms(d, lambda);
      ok = std::abs(b) >= 0.2 && std::abs(a / b) <= 20.0;
    }
    if (ok) return d;
  }
}

}  // namespace hopf
