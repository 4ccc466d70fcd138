#pragma once

// Parametrized Hopf hypersurface patches, their finite-difference shape
// operators, and the classical tubes and horospheres.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hopf_twistor/twistor.hpp"

namespace hopf {

using ChartVector = Eigen::VectorXd;
using PatchMap = std::function<IndefVector(const ChartVector&)>;

/// A map (theta, t, q) -> H_1^{2n+1} with its horizontal unit normal lift.
/// Coordinate 0 is always the fibre angle; the remaining 2n - 1 coordinates
/// span the horizontal tangent space of the hypersurface.
class HypersurfacePatch {
 public:
  HypersurfacePatch(std::string label, Sign sign, double r, int dim_n,
                    std::vector<std::string> param_names, PatchMap position, PatchMap normal,
                    ChartVector lower, ChartVector upper);

  const std::string& label() const { return label_; }
  Sign sign() const { return sign_; }
  double r() const { return r_; }
  int dim_n() const { return dim_n_; }
  int chart_dim() const { return static_cast<int>(lower_.size()); }
  const std::vector<std::string>& param_names() const { return names_; }
  const ChartVector& lower() const { return lower_; }
  const ChartVector& upper() const { return upper_; }
  ChartVector center() const { return 0.5 * (lower_ + upper_); }

  IndefVector position_raw(const ChartVector& at) const;
  AdSPoint eval(const ChartVector& at) const { return AdSPoint(position_raw(at), 1e-9); }
  IndefVector normal_lift(const ChartVector& at) const;

  /// Hopf curvature under normal_lift, when known in closed form.
  std::optional<double> expected_mu() const { return expected_mu_; }
  void set_expected_mu(double mu) { expected_mu_ = mu; }

  bool degenerate() const { return !degenerate_reason_.empty(); }
  const std::string& degenerate_reason() const { return degenerate_reason_; }
  void mark_degenerate(std::string reason) { degenerate_reason_ = std::move(reason); }

  /// Lattice with `density` samples per coordinate over the chart box; if
  /// the lattice exceeds `cap` points, an evenly strided subset of it.
  std::vector<ChartVector> grid(int density = 3, std::size_t cap = 81) const;

 private:
  void check_point(const ChartVector& at) const;

  std::string label_;
  Sign sign_;
  double r_;
  int dim_n_;
  std::vector<std::string> names_;
  PatchMap position_;
  PatchMap normal_;
  ChartVector lower_;
  ChartVector upper_;
  std::optional<double> expected_mu_;
  std::string degenerate_reason_;
};

/// Horizontal, tangent and chart-direction differentials at a point.
struct ChartDifferential {
  IndefVector position = IndefVector(1);
  IndefVector normal = IndefVector(1);
  std::vector<IndefVector> horizontal;  // H dPsi(d_j), j = 1 .. 2n-1
  std::vector<IndefVector> shape;       // A applied to the same directions
  std::vector<double> vertical;         // <dPsi(d_j), i Psi>
};

ChartDifferential chart_differential(const HypersurfacePatch& p, const ChartVector& at,
                                     double step);

struct PatchResiduals {
  double normal_unit = 0.0;        // |<N',N'> - 1|
  double normal_horizontal = 0.0;  // |<N', i Psi>| and |<N', Psi>|
  double normal_orthogonal = 0.0;  // max_j |<dPsi(d_j), N'>|
};

PatchResiduals patch_residuals(const HypersurfacePatch& p, const ChartVector& at,
                               double step = 1e-5);

struct EigenCluster {
  double value = 0.0;
  int multiplicity = 0;
};

/// Groups ascending eigenvalues; a value starts a new cluster when it lies
/// more than `gap` above its predecessor.
std::vector<EigenCluster> cluster_eigenvalues(const Eigen::VectorXd& ascending, double gap = 5e-4);

struct PointShape {
  ChartVector at;
  Eigen::MatrixXd matrix;           // A in the orthonormal frame, xi' first
  std::vector<IndefVector> frame;   // frame[0] = xi'
  Eigen::MatrixXd chart_frame;      // frame[k] = sum_j chart_frame(j,k) H dPsi(d_j)
  double lsq_residual = 0.0;
  double min_singular = 0.0;
  double symmetry_residual = 0.0;
  double mu = 0.0;
  double hopf_residual = 0.0;       // |A xi - mu xi|
  double xi_tangency = 0.0;         // distance of xi' from the chart span
  Eigen::VectorXd eigenvalues;      // of the symmetrized matrix, ascending
  Eigen::MatrixXd eigenvectors;
  std::vector<EigenCluster> clusters;
};

/// xi' = -i N'.
IndefVector xi_lift(const HypersurfacePatch& p, const ChartVector& at);

/// Finite-difference shape operator at one chart point. Throws
/// ImmersionError when the horizontal chart differential has smallest
/// singular value <= 1e-6, DegenerateError on a degenerate patch.
PointShape shape_operator(const HypersurfacePatch& p, const ChartVector& at, double step = 1e-4);

/// phi X = iX - <iX, N'> N' for X tangent and horizontal at `at`.
IndefVector phi_of(const HypersurfacePatch& p, const ChartVector& at, const IndefVector& x,
                   double tol = 1e-8);

/// |lambda* - (lambda mu - 2) / (2 lambda - mu)| for ambient curvature -4.
/// Throws DegenerateError when |2 lambda - mu| <= 1e-8.
double hopf_pc2_residual(double lambda, double lambda_star, double mu);

struct PcPair {
  double lambda = 0.0;
  double lambda_star = 0.0;
  double residual = 0.0;
};

/// Pairs each eigenvector orthogonal to xi with the eigen-cluster that
/// best contains its image under phi. Pairs with |2 lambda - mu| <= skip_gap
/// are omitted.
std::vector<PcPair> phi_pairs(const HypersurfacePatch& p, const PointShape& s,
                              double skip_gap = 1e-3);

struct VerifyTolerances {
  double hopf = 1e-4;
  double symmetry = 1e-5;
  double lsq = 1e-4;
  double mu = 1e-4;
  double mu_const = 1e-4;
  double pc2 = 1e-4;
};

struct PointSummary {
  ChartVector at;
  double mu = 0.0;
  double hopf_residual = 0.0;
  double symmetry_residual = 0.0;
  double lsq_residual = 0.0;
  double min_singular = 0.0;
  std::vector<EigenCluster> clusters;
  Eigen::VectorXd eigenvalues;
};

struct ShapeReport {
  std::string label;
  Sign sign = Sign::zero;
  double r = 0.0;
  int dim_n = 0;
  double mu = 0.0;                   // grid mean, paper normal
  double mu_spread = 0.0;            // max - min over the grid
  std::optional<double> expected_mu;
  std::vector<EigenCluster> eigenvalues;          // under normal_lift
  bool spectrum_uniform = true;      // same multiplicity pattern at every point
  double hopf_residual = 0.0;
  double symmetry_residual = 0.0;
  double lsq_residual = 0.0;
  double min_singular = 0.0;
  std::vector<double> pc2_residuals;
  std::size_t grid_size = 0;
  std::vector<PointSummary> points;
  bool certified = false;
  std::vector<std::string> failures;

  /// +1 if mu >= 0 under normal_lift, else -1.
  int orientation() const { return mu >= 0.0 ? 1 : -1; }
  /// Spectrum under the normal that makes mu nonnegative.
  std::vector<EigenCluster> adjusted_eigenvalues() const;
  /// Spectrum under -normal_lift.
  std::vector<EigenCluster> flipped_eigenvalues() const;
};

/// Runs shape_operator over the grid (concurrently) and certifies A xi =
/// mu xi with grid-constant mu, symmetry, the closed-form mu when known, and
/// the pc2 relation on phi-pairs.
ShapeReport verify_hopf(const HypersurfacePatch& p, const std::vector<ChartVector>& grid,
                        double step = 1e-4, const VerifyTolerances& tol = {});

/// -2 coth 2r, -2 tanh 2r, -2 for the three signs.
double closed_form_mu(Sign s, double r);

// --- construction from horizontal lifts ---

using ChartLift = std::function<StiefelPoint(const ChartVector&)>;

/// A lift defined on a box of R^{2n-2}.
struct LiftChart {
  ChartLift lift;
  ChartVector lower;
  ChartVector upper;
  std::vector<std::string> names;
};

/// Psi(theta, t, q) = e^{i theta} p_r(act_s(t)(u-(q), u+(q))) with the
/// matching normal lift. Requires a horizontal lift; throws InputError if it
/// is not, DegenerateError for s = plus and r = 0, ImmersionError if the
/// differential is rank deficient at the chart center.
HypersurfacePatch build_phi(Sign s, double r, int dim_n, const LiftChart& chart,
                            std::string label, double theta_span = 1.0, double t_span = 0.6);

IndefVector phi_position(Sign s, double r, const StiefelPoint& u, double theta, double t);
IndefVector phi_normal(Sign s, double r, const StiefelPoint& u, double theta, double t);

/// Tube of radius r over a totally geodesic CH^k. Throws DegenerateError
/// for r = 0.
HypersurfacePatch example_tube_chk(int n, int k, double r);
/// Tube of radius r over a totally real RH^n; r = 0 is flagged degenerate.
HypersurfacePatch example_tube_rhn(int n, double r);
HypersurfacePatch example_horosphere(int n, double r);

/// Lifts used by the examples, exposed for lift-level tests.
LiftChart tube_chk_lift(int n, int k);
LiftChart tube_rhn_lift(int n);
LiftChart horosphere_lift(int n);

/// | |z0 - z1|^2 - e^{2r} | at a point of a horosphere patch.
double horosphere_defect(const HypersurfacePatch& p, const ChartVector& at);

/// max over the grid of |cosh r' Psi_r + sinh r' N'_r - Psi_{r+r'}|.
double parallel_family_residual(const HypersurfacePatch& base, const HypersurfacePatch& shifted,
                                double r_prime, const std::vector<ChartVector>& grid);

}  // namespace hopf
