#include "hopf_twistor/hopf_construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hopf_twistor/parallel.hpp"

namespace hopf {

namespace {

Eigen::VectorXd to_real(const IndefVector& v) {
  const CVector& c = v.coords();
  Eigen::VectorXd out(2 * c.size());
  out << c.real(), c.imag();
  return out;
}

IndefVector from_real(const Eigen::VectorXd& x) {
  const Eigen::Index m = x.size() / 2;
  CVector c(m);
  for (Eigen::Index k = 0; k < m; ++k) c[k] = cplx(x[k], x[k + m]);
  return IndefVector(std::move(c));
}

// Real form of <.,.> on the stacked (Re, Im) coordinates.
Eigen::VectorXd metric_diagonal(int dim_n) {
  Eigen::VectorXd g = Eigen::VectorXd::Ones(2 * (dim_n + 1));
  g[0] = -1.0;
  g[dim_n + 1] = -1.0;
  return g;
}

std::string format_point(const ChartVector& at) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index k = 0; k < at.size(); ++k) os << (k ? ", " : "") << at[k];
  os << ")";
  return os.str();
}

}  // namespace

HypersurfacePatch::HypersurfacePatch(std::string label, Sign sign, double r, int dim_n,
                                     std::vector<std::string> param_names, PatchMap position,
                                     PatchMap normal, ChartVector lower, ChartVector upper)
    : label_(std::move(label)),
      sign_(sign),
      r_(r),
      dim_n_(dim_n),
      names_(std::move(param_names)),
      position_(std::move(position)),
      normal_(std::move(normal)),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  if (dim_n_ < 2) throw InputError("HypersurfacePatch: n must be at least 2");
  if (lower_.size() != 2 * dim_n_ || upper_.size() != lower_.size())
    throw InputError("HypersurfacePatch: chart must have 2n coordinates");
  if (!names_.empty() && static_cast<Eigen::Index>(names_.size()) != lower_.size())
    throw InputError("HypersurfacePatch: parameter names do not match chart dimension");
  if ((upper_.array() < lower_.array()).any())
    throw InputError("HypersurfacePatch: empty chart box");
}

void HypersurfacePatch::check_point(const ChartVector& at) const {
  if (at.size() != lower_.size()) throw InputError("chart point has the wrong dimension");
  if (!at.allFinite()) throw InputError("chart point has non-finite coordinates");
}

IndefVector HypersurfacePatch::position_raw(const ChartVector& at) const {
  check_point(at);
  return position_(at);
}

IndefVector HypersurfacePatch::normal_lift(const ChartVector& at) const {
  check_point(at);
  return normal_(at);
}

std::vector<ChartVector> HypersurfacePatch::grid(int density, std::size_t cap) const {
  if (density < 2) throw InputError("grid density must be at least 2");
  if (cap == 0) throw InputError("grid cap must be positive");
  const int dim = chart_dim();
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) {
    total *= static_cast<std::size_t>(density);
    if (total > 100000000) throw InputError("grid too large");
  }
  std::vector<std::size_t> picks;
  if (total <= cap) {
    picks.resize(total);
    std::iota(picks.begin(), picks.end(), std::size_t{0});
  } else {
    for (std::size_t k = 0; k < cap; ++k) {
      const double pos = cap == 1 ? 0.0 : static_cast<double>(k) * (total - 1) / (cap - 1);
      picks.push_back(static_cast<std::size_t>(std::llround(pos)));
    }
  }
  std::vector<ChartVector> out;
  out.reserve(picks.size());
  for (std::size_t idx : picks) {
    ChartVector at(dim);
    std::size_t rest = idx;
    for (int k = dim - 1; k >= 0; --k) {
      const int j = static_cast<int>(rest % density);
      rest /= density;
      at[k] = lower_[k] + (upper_[k] - lower_[k]) * j / (density - 1);
    }
    out.push_back(std::move(at));
  }
  return out;
}

ChartDifferential chart_differential(const HypersurfacePatch& p, const ChartVector& at,
                                     double step) {
  if (!(step > 0.0 && step <= 1e-2)) throw InputError("finite-difference step must lie in (0, 1e-2]");
  ChartDifferential d;
  d.position = p.position_raw(at);
  d.normal = p.normal_lift(at);
  const IndefVector ipos = kI * d.position;
  const IndefVector inormal = kI * d.normal;
  for (int j = 1; j < p.chart_dim(); ++j) {
    ChartVector e = ChartVector::Zero(p.chart_dim());
    e[j] = step;
    const IndefVector dpos = (p.position_raw(at + e) - p.position_raw(at - e)) / (2.0 * step);
    const IndefVector dnor = (p.normal_lift(at + e) - p.normal_lift(at - e)) / (2.0 * step);
    const double c = real_form(dpos, ipos);
    d.vertical.push_back(c);
    d.horizontal.push_back(horizontal_tangent_project(dpos, d.position));
    // Derivative along the horizontal lift d_j + c d_theta, with d_theta N' = iN'.
    d.shape.push_back(-1.0 * horizontal_tangent_project(dnor + c * inormal, d.position));
  }
  return d;
}

PatchResiduals patch_residuals(const HypersurfacePatch& p, const ChartVector& at, double step) {
  PatchResiduals r;
  const IndefVector pos = p.position_raw(at);
  const IndefVector nor = p.normal_lift(at);
  r.normal_unit = std::abs(real_form(nor, nor) - 1.0);
  r.normal_horizontal =
      std::max(std::abs(real_form(nor, kI * pos)), std::abs(real_form(nor, pos)));
  for (int j = 1; j < p.chart_dim(); ++j) {
    ChartVector e = ChartVector::Zero(p.chart_dim());
    e[j] = step;
    const IndefVector dpos = (p.position_raw(at + e) - p.position_raw(at - e)) / (2.0 * step);
    r.normal_orthogonal = std::max(r.normal_orthogonal, std::abs(real_form(dpos, nor)));
  }
  return r;
}

std::vector<EigenCluster> cluster_eigenvalues(const Eigen::VectorXd& ascending, double gap) {
  std::vector<EigenCluster> out;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < ascending.size(); ++k) {
    if (k == 0 || ascending[k] - ascending[k - 1] > gap) {
      if (!out.empty()) out.back().value = sum / out.back().multiplicity;
      out.push_back({ascending[k], 0});
      sum = 0.0;
    }
    sum += ascending[k];
    ++out.back().multiplicity;
  }
  if (!out.empty()) out.back().value = sum / out.back().multiplicity;
  return out;
}

IndefVector xi_lift(const HypersurfacePatch& p, const ChartVector& at) {
  return -kI * p.normal_lift(at);
}

PointShape shape_operator(const HypersurfacePatch& p, const ChartVector& at, double step) {
  if (p.degenerate()) throw DegenerateError(p.label() + ": " + p.degenerate_reason());
  const ChartDifferential d = chart_differential(p, at, step);
  const int m = p.chart_dim() - 1;
  const int rows = 2 * (p.dim_n() + 1);
  Eigen::MatrixXd V(rows, m), W(rows, m);
  for (int j = 0; j < m; ++j) {
    V.col(j) = to_real(d.horizontal[j]);
    W.col(j) = to_real(d.shape[j]);
  }
  const Eigen::VectorXd g = metric_diagonal(p.dim_n());
  const Eigen::MatrixXd gV = g.asDiagonal() * V;
  const Eigen::MatrixXd gram = V.transpose() * gV;

  PointShape s;
  s.at = at;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram_eig(gram, Eigen::EigenvaluesOnly);
  s.min_singular = std::sqrt(std::max(0.0, gram_eig.eigenvalues()[0]));
  if (!(s.min_singular > 1e-6)) {
    std::ostringstream msg;
    msg << p.label() << ": not an immersion at " << format_point(at)
        << " (smallest singular value " << s.min_singular << ")";
    throw ImmersionError(msg.str(), s.min_singular);
  }
  const Eigen::LDLT<Eigen::MatrixXd> gram_solve(gram);
  const Eigen::MatrixXd a_chart = gram_solve.solve(gV.transpose() * W);
  s.lsq_residual = (V * a_chart - W).norm();

  // Frame: xi' first, then chart directions by greedy Gram-Schmidt.
  const Eigen::VectorXd xi = to_real(-kI * d.normal);
  const Eigen::VectorXd c_xi = gram_solve.solve(gV.transpose() * xi);
  s.xi_tangency = (V * c_xi - xi).norm();
  Eigen::MatrixXd F(m, m);
  F.col(0) = c_xi / std::sqrt(c_xi.dot(gram * c_xi));
  std::vector<bool> used(m, false);
  for (int k = 1; k < m; ++k) {
    int best = -1;
    double best_norm = -1.0;
    Eigen::VectorXd best_vec;
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      Eigen::VectorXd e = Eigen::VectorXd::Unit(m, j);
      for (int l = 0; l < k; ++l) e -= F.col(l) * F.col(l).dot(gram * e);
      const double nrm = std::sqrt(std::max(0.0, e.dot(gram * e)));
      if (nrm > best_norm) {
        best_norm = nrm;
        best = j;
        best_vec = e;
      }
    }
    used[best] = true;
    F.col(k) = best_vec / best_norm;
  }
  s.chart_frame = F;
  s.matrix = F.transpose() * gram * a_chart * F;
  s.symmetry_residual = (s.matrix - s.matrix.transpose()).cwiseAbs().maxCoeff();
  s.mu = s.matrix(0, 0);
  s.hopf_residual = s.matrix.col(0).tail(m - 1).norm();

  const Eigen::MatrixXd frame_real = V * F;
  for (int k = 0; k < m; ++k) s.frame.push_back(from_real(frame_real.col(k)));

  const Eigen::MatrixXd sym = 0.5 * (s.matrix + s.matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  s.eigenvalues = eig.eigenvalues();
  s.eigenvectors = eig.eigenvectors();
  s.clusters = cluster_eigenvalues(s.eigenvalues);
  return s;
}

IndefVector phi_of(const HypersurfacePatch& p, const ChartVector& at, const IndefVector& x,
                   double tol) {
  const IndefVector pos = p.position_raw(at);
  const IndefVector nor = p.normal_lift(at);
  if (x.dim_n() != pos.dim_n()) throw InputError("phi_of: dimension mismatch");
  const double scale = tol * std::max(1.0, x.max_abs());
  const double off = std::max({std::abs(real_form(x, pos)), std::abs(real_form(x, kI * pos)),
                               std::abs(real_form(x, nor))});
  if (off > scale) {
    std::ostringstream msg;
    msg << "phi_of: vector is not a horizontal tangent vector of the hypersurface (residual "
        << off << ")";
    throw ValidationError(msg.str(), off);
  }
  const IndefVector ix = kI * x;
  return ix - real_form(ix, nor) * nor;
}

double hopf_pc2_residual(double lambda, double lambda_star, double mu) {
  const double denom = 2.0 * lambda - mu;
  if (std::abs(denom) <= 1e-8) {
    std::ostringstream msg;
    msg << "exceptional case 2 lambda = mu (lambda = " << lambda << ", mu = " << mu << ")";
    throw DegenerateError(msg.str());
  }
  return std::abs(lambda_star - (lambda * mu - 2.0) / denom);
}

std::vector<PcPair> phi_pairs(const HypersurfacePatch& p, const PointShape& s, double skip_gap) {
  const int m = static_cast<int>(s.matrix.rows());
  if (m < 2) return {};
  const Eigen::MatrixXd block =
      0.5 * (s.matrix.bottomRightCorner(m - 1, m - 1) +
             s.matrix.bottomRightCorner(m - 1, m - 1).transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();
  const std::vector<EigenCluster> clusters = cluster_eigenvalues(vals);
  const IndefVector nor = p.normal_lift(s.at);

  std::vector<PcPair> out;
  for (int k = 0; k < m - 1; ++k) {
    IndefVector x(p.dim_n());
    for (int l = 0; l < m - 1; ++l) x += vecs(l, k) * s.frame[l + 1];
    const IndefVector ix = kI * x;
    const IndefVector phix = ix - real_form(ix, nor) * nor;
    Eigen::VectorXd coords(m - 1);
    for (int l = 0; l < m - 1; ++l) coords[l] = real_form(phix, s.frame[l + 1]);

    double best = -1.0, lambda_star = 0.0;
    int offset = 0;
    for (const EigenCluster& c : clusters) {
      const double proj = (vecs.middleCols(offset, c.multiplicity).transpose() * coords).norm();
      if (proj > best) {
        best = proj;
        lambda_star = c.value;
      }
      offset += c.multiplicity;
    }
    const double lambda = vals[k];
    if (std::abs(2.0 * lambda - s.mu) <= skip_gap) continue;
    out.push_back({lambda, lambda_star, hopf_pc2_residual(lambda, lambda_star, s.mu)});
  }
  return out;
}

std::vector<EigenCluster> ShapeReport::adjusted_eigenvalues() const {
  return orientation() > 0 ? eigenvalues : flipped_eigenvalues();
}

std::vector<EigenCluster> ShapeReport::flipped_eigenvalues() const {
  std::vector<EigenCluster> out(eigenvalues.rbegin(), eigenvalues.rend());
  for (EigenCluster& c : out) c.value = -c.value;
  return out;
}

double closed_form_mu(Sign s, double r) {
  switch (s) {
    case Sign::plus:
      if (r == 0.0) throw DegenerateError("Hopf curvature is unbounded at radius 0 for sign plus");
      return -2.0 / std::tanh(2.0 * r);
    case Sign::minus: return -2.0 * std::tanh(2.0 * r);
    case Sign::zero: return -2.0;
  }
  return 0.0;
}

ShapeReport verify_hopf(const HypersurfacePatch& p, const std::vector<ChartVector>& grid,
                        double step, const VerifyTolerances& tol) {
  if (p.degenerate()) throw DegenerateError(p.label() + ": " + p.degenerate_reason());
  if (grid.empty()) throw InputError("verify_hopf: empty grid");

  struct Slot {
    std::optional<PointShape> shape;
    std::vector<PcPair> pairs;
    std::string error;
  };
  std::vector<Slot> slots(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      slots[i].shape = shape_operator(p, grid[i], step);
      slots[i].pairs = phi_pairs(p, *slots[i].shape);
    } catch (const HopfError& e) {
      slots[i].error = e.what();
    }
  });

  ShapeReport rep;
  rep.label = p.label();
  rep.sign = p.sign();
  rep.r = p.r();
  rep.dim_n = p.dim_n();
  rep.expected_mu = p.expected_mu();
  rep.grid_size = grid.size();
  rep.min_singular = std::numeric_limits<double>::infinity();

  double mu_min = std::numeric_limits<double>::infinity();
  double mu_max = -mu_min;
  double mu_sum = 0.0;
  double mu_dev = 0.0;
  std::size_t ok = 0;
  std::vector<double> cluster_sums;
  std::vector<int> pattern;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot& sl = slots[i];
    if (!sl.shape) {
      rep.failures.push_back("point " + std::to_string(i) + " " + format_point(grid[i]) + ": " +
                             sl.error);
      continue;
    }
    const PointShape& s = *sl.shape;
    ++ok;
    mu_sum += s.mu;
    mu_min = std::min(mu_min, s.mu);
    mu_max = std::max(mu_max, s.mu);
    if (rep.expected_mu) mu_dev = std::max(mu_dev, std::abs(s.mu - *rep.expected_mu));
    rep.hopf_residual = std::max(rep.hopf_residual, s.hopf_residual);
    rep.symmetry_residual = std::max(rep.symmetry_residual, s.symmetry_residual);
    rep.lsq_residual = std::max(rep.lsq_residual, s.lsq_residual);
    rep.min_singular = std::min(rep.min_singular, s.min_singular);
    for (const PcPair& pr : sl.pairs) rep.pc2_residuals.push_back(pr.residual);

    std::vector<int> mult;
    for (const EigenCluster& c : s.clusters) mult.push_back(c.multiplicity);
    if (pattern.empty()) {
      pattern = mult;
      cluster_sums.assign(mult.size(), 0.0);
      rep.eigenvalues = s.clusters;
    } else if (mult != pattern) {
      rep.spectrum_uniform = false;
    }
    if (rep.spectrum_uniform) {
      for (std::size_t c = 0; c < s.clusters.size(); ++c) cluster_sums[c] += s.clusters[c].value;
    }
    rep.points.push_back({s.at, s.mu, s.hopf_residual, s.symmetry_residual, s.lsq_residual,
                          s.min_singular, s.clusters, s.eigenvalues});
  }
  if (ok == 0) {
    rep.certified = false;
    rep.min_singular = 0.0;
    return rep;
  }
  rep.mu = mu_sum / ok;
  rep.mu_spread = mu_max - mu_min;
  if (rep.spectrum_uniform) {
    for (std::size_t c = 0; c < rep.eigenvalues.size(); ++c)
      rep.eigenvalues[c].value = cluster_sums[c] / ok;
  }

  auto require = [&](bool cond, const std::string& what) {
    if (!cond) rep.failures.push_back(what);
  };
  std::ostringstream num;
  auto fmt = [&](double v) {
    num.str("");
    num << v;
    return num.str();
  };
  require(rep.hopf_residual <= tol.hopf, "Hopf residual " + fmt(rep.hopf_residual));
  require(rep.symmetry_residual <= tol.symmetry, "symmetry residual " + fmt(rep.symmetry_residual));
  require(rep.lsq_residual <= tol.lsq, "least-squares residual " + fmt(rep.lsq_residual));
  require(rep.mu_spread <= tol.mu_const, "mu varies over the grid by " + fmt(rep.mu_spread));
  if (rep.expected_mu) require(mu_dev <= tol.mu, "mu deviates from closed form by " + fmt(mu_dev));
  const double abs_mu = std::abs(rep.mu);
  switch (p.sign()) {
    case Sign::plus: require(abs_mu > 2.0, "|mu| > 2 fails: |mu| = " + fmt(abs_mu)); break;
    case Sign::minus: require(abs_mu < 2.0, "|mu| < 2 fails: |mu| = " + fmt(abs_mu)); break;
    case Sign::zero:
      require(std::abs(abs_mu - 2.0) <= tol.mu, "|mu| = 2 fails: |mu| = " + fmt(abs_mu));
      break;
  }
  double pc2_max = 0.0;
  for (double v : rep.pc2_residuals) pc2_max = std::max(pc2_max, v);
  require(pc2_max <= tol.pc2, "pc2 residual " + fmt(pc2_max));
  rep.certified = rep.failures.empty();
  return rep;
}

// --- construction ---

IndefVector phi_position(Sign s, double r, const StiefelPoint& u, double theta, double t) {
  return std::polar(1.0, theta) * gamma_point(s, r, u, t);
}

IndefVector phi_normal(Sign s, double r, const StiefelPoint& u, double theta, double t) {
  const cplx phase = std::polar(1.0, theta);
  if (s == Sign::plus) {
    return phase * (std::polar(std::sinh(r), t) * u.u_minus() +
                    std::polar(std::cosh(r), -t) * u.u_plus());
  }
  return (kI * phase) * unit_horizontal_T(s, r, u, t);
}

namespace {

HypersurfacePatch make_phi_patch(Sign s, double r, int dim_n, const LiftChart& chart,
                                 std::string label, double theta_span, double t_span) {
  const Eigen::Index q_dim = 2 * dim_n - 2;
  if (chart.lower.size() != q_dim || chart.upper.size() != q_dim)
    throw InputError("build_phi: lift chart must have 2n-2 coordinates");
  ChartVector lower(2 * dim_n), upper(2 * dim_n);
  lower << 0.0, -t_span, chart.lower;
  upper << theta_span, t_span, chart.upper;
  std::vector<std::string> names = {"theta", "t"};
  if (chart.names.size() == static_cast<std::size_t>(q_dim)) {
    names.insert(names.end(), chart.names.begin(), chart.names.end());
  } else {
    for (Eigen::Index k = 0; k < q_dim; ++k) names.push_back("q" + std::to_string(k + 1));
  }
  ChartLift lift = chart.lift;
  PatchMap position = [s, r, lift, q_dim](const ChartVector& at) {
    return phi_position(s, r, lift(at.tail(q_dim)), at[0], at[1]);
  };
  PatchMap normal = [s, r, lift, q_dim](const ChartVector& at) {
    return phi_normal(s, r, lift(at.tail(q_dim)), at[0], at[1]);
  };
  HypersurfacePatch patch(std::move(label), s, r, dim_n, std::move(names), std::move(position),
                          std::move(normal), lower, upper);
  if (!(s == Sign::plus && r == 0.0)) patch.set_expected_mu(closed_form_mu(s, r));
  return patch;
}

void require_horizontal_lift(Sign s, const LiftChart& chart) {
  const ChartVector q0 = 0.5 * (chart.lower + chart.upper);
  for (Eigen::Index j = 0; j < q0.size(); ++j) {
    Lift1D along = [&chart, &q0, j](double x) {
      ChartVector q = q0;
      q[j] += x;
      return chart.lift(q);
    };
    const LiftCoefficients c = lift_coefficients(along, 0.0);
    if (!is_horizontal(s, c, 1e-7)) {
      throw InputError("build_phi: lift is not horizontal for sign " + to_string(s) +
                       " along chart coordinate " + std::to_string(j + 1));
    }
  }
}

}  // namespace

HypersurfacePatch build_phi(Sign s, double r, int dim_n, const LiftChart& chart,
                            std::string label, double theta_span, double t_span) {
  if (dim_n < 2) throw InputError("build_phi: n must be at least 2");
  if (!std::isfinite(r)) throw InputError("build_phi: radius must be finite");
  if (s == Sign::plus && r == 0.0)
    throw DegenerateError("build_phi: radius 0 collapses the tube for sign plus");
  require_horizontal_lift(s, chart);
  HypersurfacePatch patch = make_phi_patch(s, r, dim_n, chart, std::move(label), theta_span, t_span);
  shape_operator(patch, patch.center());  // throws ImmersionError if rank deficient
  return patch;
}

LiftChart tube_chk_lift(int n, int k) {
  if (n < 2) throw InputError("tube over CH^k: n must be at least 2");
  if (k < 0 || k > n - 1) throw InputError("tube over CH^k: k must lie in [0, n-1]");
  const int m = n - k - 1;
  LiftChart chart;
  chart.lower = ChartVector::Constant(2 * n - 2, -0.3);
  chart.upper = ChartVector::Constant(2 * n - 2, 0.3);
  for (int j = 0; j < k; ++j) chart.names.push_back("re_z" + std::to_string(j + 1));
  for (int j = 0; j < k; ++j) chart.names.push_back("im_z" + std::to_string(j + 1));
  for (int j = 0; j < m; ++j) chart.names.push_back("re_zeta" + std::to_string(j + 1));
  for (int j = 0; j < m; ++j) chart.names.push_back("im_zeta" + std::to_string(j + 1));
  chart.lift = [n, k, m](const ChartVector& q) {
    CVector um = CVector::Zero(n + 1), up = CVector::Zero(n + 1);
    double zz = 0.0, ww = 0.0;
    um[0] = 1.0;
    for (int j = 0; j < k; ++j) {
      um[1 + j] = cplx(q[j], q[k + j]);
      zz += std::norm(um[1 + j]);
    }
    up[k + 1] = 1.0;
    for (int j = 0; j < m; ++j) {
      up[k + 2 + j] = cplx(q[2 * k + j], q[2 * k + m + j]);
      ww += std::norm(up[k + 2 + j]);
    }
    if (zz >= 1.0) throw InputError("tube over CH^k: chart point outside the unit ball");
    return StiefelPoint(IndefVector(CVector(um / std::sqrt(1.0 - zz))),
                        IndefVector(CVector(up / std::sqrt(1.0 + ww))));
  };
  return chart;
}

LiftChart tube_rhn_lift(int n) {
  if (n < 2) throw InputError("tube over RH^n: n must be at least 2");
  LiftChart chart;
  chart.lower = ChartVector::Constant(2 * n - 2, -0.3);
  chart.upper = ChartVector::Constant(2 * n - 2, 0.3);
  for (int j = 0; j < n - 1; ++j) chart.names.push_back("a" + std::to_string(j + 1));
  for (int j = 0; j < n - 1; ++j) chart.names.push_back("b" + std::to_string(j + 1));
  chart.lift = [n](const ChartVector& q) {
    const Eigen::VectorXd a = q.head(n - 1);
    const Eigen::VectorXd b = q.tail(n - 1);
    const double gamma = std::sqrt(1.0 + a.squaredNorm());
    // Lorentz boost of e0 along coordinates 2..n; coordinate 1 is fixed.
    Eigen::MatrixXd boost = Eigen::MatrixXd::Identity(n + 1, n + 1);
    std::vector<int> idx = {0};
    for (int j = 2; j <= n; ++j) idx.push_back(j);
    Eigen::MatrixXd block(n, n);
    block(0, 0) = gamma;
    block.block(0, 1, 1, n - 1) = a.transpose();
    block.block(1, 0, n - 1, 1) = a;
    block.block(1, 1, n - 1, n - 1) =
        Eigen::MatrixXd::Identity(n - 1, n - 1) + a * a.transpose() / (1.0 + gamma);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) boost(idx[i], idx[j]) = block(i, j);
    Eigen::VectorXd sdir = Eigen::VectorXd::Zero(n + 1);
    sdir[1] = 1.0;
    sdir.tail(n - 1) = b;
    sdir /= std::sqrt(1.0 + b.squaredNorm());
    const Eigen::VectorXd um = boost.col(0);
    const Eigen::VectorXd up = boost * sdir;
    return StiefelPoint(IndefVector(CVector(um.cast<cplx>())), IndefVector(CVector(up.cast<cplx>())));
  };
  return chart;
}

LiftChart horosphere_lift(int n) {
  if (n < 2) throw InputError("horosphere: n must be at least 2");
  LiftChart chart;
  chart.lower = ChartVector::Constant(2 * n - 2, -0.5);
  chart.upper = ChartVector::Constant(2 * n - 2, 0.5);
  for (int j = 0; j < n - 1; ++j) chart.names.push_back("re_p" + std::to_string(j + 1));
  for (int j = 0; j < n - 1; ++j) chart.names.push_back("im_p" + std::to_string(j + 1));
  chart.lift = [n](const ChartVector& q) {
    CVector pv(n - 1);
    for (int j = 0; j < n - 1; ++j) pv[j] = cplx(q[j], q[n - 1 + j]);
    const double half = 0.5 * pv.squaredNorm();
    CVector um(n + 1), up(n + 1);
    um[0] = 1.0 + half;
    um[1] = half;
    um.tail(n - 1) = pv;
    up[0] = cplx(0.0, -half);
    up[1] = cplx(0.0, 1.0 - half);
    up.tail(n - 1) = -kI * pv;
    return StiefelPoint(IndefVector(std::move(um)), IndefVector(std::move(up)));
  };
  return chart;
}

HypersurfacePatch example_tube_chk(int n, int k, double r) {
  if (r == 0.0) throw DegenerateError("tube over CH^k: radius 0 collapses onto the focal set");
  std::ostringstream label;
  label << "tube-chk(n=" << n << ",k=" << k << ",r=" << r << ")";
  return build_phi(Sign::plus, r, n, tube_chk_lift(n, k), label.str());
}

HypersurfacePatch example_tube_rhn(int n, double r) {
  std::ostringstream label;
  label << "tube-rhn(n=" << n << ",r=" << r << ")";
  if (r == 0.0) {
    HypersurfacePatch patch =
        make_phi_patch(Sign::minus, r, n, tube_rhn_lift(n), label.str(), 1.0, 0.6);
    patch.mark_degenerate("radius 0 gives the totally geodesic RH^n, not a hypersurface");
    return patch;
  }
  return build_phi(Sign::minus, r, n, tube_rhn_lift(n), label.str());
}

HypersurfacePatch example_horosphere(int n, double r) {
  std::ostringstream label;
  label << "horosphere(n=" << n << ",r=" << r << ")";
  return build_phi(Sign::zero, r, n, horosphere_lift(n), label.str());
}

double horosphere_defect(const HypersurfacePatch& p, const ChartVector& at) {
  const IndefVector z = p.position_raw(at);
  return std::abs(std::norm(z[0] - z[1]) - std::exp(2.0 * p.r()));
}

double parallel_family_residual(const HypersurfacePatch& base, const HypersurfacePatch& shifted,
                                double r_prime, const std::vector<ChartVector>& grid) {
  double worst = 0.0;
  for (const ChartVector& at : grid) {
    const IndefVector moved = std::cosh(r_prime) * base.position_raw(at) +
                              std::sinh(r_prime) * base.normal_lift(at);
    worst = std::max(worst, (moved - shifted.position_raw(at)).max_abs());
  }
  return worst;
}

}  // namespace hopf
