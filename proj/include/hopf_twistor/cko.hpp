#pragma once

// Constant-coefficient CKO forms, their Maurer-Cartan system, and the mu = 2
// Hopf hypersurfaces generated by them.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hopf_twistor/hopf_construct.hpp"

namespace hopf {

/// u(1,n)-valued 1-form on R^{dim_g} with constant coefficients; n = rows of
/// x_form + 1. Column j of each matrix block (and slice j of w1, w2) is the
/// value on e_j.
struct CKOForm {
  int dim_g = 1;
  Eigen::VectorXd alpha0;
  Eigen::VectorXd alpha1;
  Eigen::MatrixXd x_form;
  Eigen::MatrixXd y0;
  Eigen::MatrixXd y1;
  std::vector<Eigen::MatrixXd> w1;
  std::vector<Eigen::MatrixXd> w2;

  int dim_n() const { return static_cast<int>(x_form.rows()) + 1; }

  /// All blocks zero, shaped for (n, dim_g).
  static CKOForm zero(int n, int dim_g);
};

/// Throws InputError on shape mismatch or non-finite entries and
/// ValidationError when a w1 slice is not alternating, a w2 slice not
/// symmetric, w1 != 0 for n = 2, or the y0/y1 wedge exceeds 1e-12.
void validate_cko(const CKOForm& f);

/// max_{i<j} |<y0(e_i), y1(e_j)> - <y0(e_j), y1(e_i)>|.
double y_wedge_residual(const CKOForm& f);

AlgebraElement assemble_omega(const CKOForm& f, const Eigen::VectorXd& y);

/// Omega(e_j).
AlgebraElement omega_axis(const CKOForm& f, int j);

/// Left-hand sides of the Maurer-Cartan system evaluated on (e_i, e_j).
struct MaurerCartanTerms {
  double alpha0 = 0.0;            // 2 x^t ^ y0
  double alpha1 = 0.0;            // -2 x^t ^ y1
  double y0y1 = 0.0;              // y0^t ^ y1
  Eigen::VectorXd x_from_y0;      // real part of the (k, 0) column
  Eigen::VectorXd y0;             // imaginary part of the (k, 0) column
  Eigen::VectorXd x_from_y1;      // real part of the (k, 1) column
  Eigen::VectorXd y1;             // imaginary part of the (k, 1) column
  Eigen::MatrixXd w1;
  Eigen::MatrixXd w2;
};

MaurerCartanTerms maurer_cartan_terms(const CKOForm& f, int i, int j);

struct MaurerCartanEquation {
  std::string name;
  double residual = 0.0;
};

struct MaurerCartanReport {
  double residual = 0.0;  // max over the listed equations
  std::vector<MaurerCartanEquation> equations;
  double commutator_residual = 0.0;  // max_{i<j} |[Omega(e_i), Omega(e_j)]|
  bool trivially_integrable = false;  // dim_g < 2
};

MaurerCartanReport maurer_cartan_report(const CKOForm& f);
double maurer_cartan_residual(const CKOForm& f);

/// g along the axis path e_1, ..., e_d and along e_d, ..., e_1, from B0 at
/// the origin to `endpoint`.
std::pair<GroupElement, GroupElement> two_path_endpoints(const CKOForm& f, const GroupElement& b0,
                                                         const Eigen::VectorXd& endpoint);
/// max |g_forward - g_reverse| entrywise.
double two_path_witness(const CKOForm& f, const GroupElement& b0, const Eigen::VectorXd& endpoint);

/// Scalar constants of a 1-parameter subgroup generator (n = 2).
struct OneParamData {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double x = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
  double w = 0.0;
  GroupElement base = GroupElement::identity(2);

  /// Throws InputError if all constants vanish, any is non-finite, or the
  /// base is not in U(1,2).
  void validate() const;
  CKOForm as_form() const;
  AlgebraElement omega() const;
};

/// B0 exp(t Omega).
GroupElement one_param_group(const OneParamData& d, double t);

/// True iff b(lambda) = 0 for every lambda: y0 = y1 = 0 and
/// alpha0 + alpha1 = 2w.
bool one_param_degenerate(const OneParamData& d);

/// Coefficients a, b of rho = a / b at lambda.
std::pair<double, double> rho_terms(const OneParamData& d, double lambda);

/// rho = a / b. Throws DegenerateError when |b| < 1e-12.
double predicted_rho(const OneParamData& d, double lambda);

/// y0 == y1 on the stored constants.
bool horosphere_test(const OneParamData& d);

using GMap = std::function<GroupElement(const Eigen::VectorXd&)>;

/// Box of the CKO chart (theta, x_1..x_d, h, lambda, v_1..v_{n-2}).
struct CKOChartBox {
  double theta_span = 1.0;
  double x_span = 0.5;
  double h_span = 0.5;
  double lambda_lo = 0.5;
  double lambda_hi = 2.0;
  double v_span = 0.4;
};

/// e^{i theta} g(x) (1 + lambda^2/2 - i h, -lambda^2/2 + i h, lambda p)
/// with p = (1, v) / |(1, v)|, and the matching horizontal unit normal.
/// Rejects Omega that fails normal orthogonality (ValidationError) and
/// rank-deficient differentials (ImmersionError). lambda_lo must be >= 0.1
/// when n >= 3.
HypersurfacePatch build_psi(const GMap& g, int dim_n, int dim_g, std::string label,
                            const CKOChartBox& box = {});
HypersurfacePatch build_psi(const OneParamData& d, const CKOChartBox& box = {});
/// g(x) = B0 prod_j exp(x_j Omega(e_j)); requires Maurer-Cartan residual
/// <= 1e-10.
HypersurfacePatch build_psi(const CKOForm& f, const GroupElement& b0, const CKOChartBox& box = {});
/// g(x) = B0 exp(x Omega) for an arbitrary generator in u(1,2).
HypersurfacePatch build_psi_generator(const AlgebraElement& omega, const GroupElement& b0,
                                      const CKOChartBox& box = {});

/// verify_hopf with expected mu = 2, plus eigenvalue 1 (within tol.mu) of
/// multiplicity >= n - 1 at every point.
ShapeReport verify_axi2xi(const HypersurfacePatch& p, const std::vector<ChartVector>& grid,
                          double step = 1e-4, const VerifyTolerances& tol = {});

struct RhoMeasurement {
  double rho = 0.0;
  double alignment = 0.0;  // |<W, eigenvector>| / |W|
  PointShape shape;
};

/// Eigenvalue whose eigenvector is aligned with W, the part of H dPsi(d_x1)
/// orthogonal to xi and d_lambda.
RhoMeasurement measured_rho(const HypersurfacePatch& p, const ChartVector& at, double step = 1e-4);

/// Index of lambda in the CKO chart of a patch with dim_g = n - 1.
int cko_lambda_index(int dim_n);

/// Seeded constants in [-1, 1] with |b(lambda)| >= 0.2 on [0.4, 2.1]; base
/// exp of a random u(1,2) element of norm <= 0.5. With equal_y, y1 = y0.
OneParamData random_one_param(std::uint64_t seed, bool equal_y = false);

}  // namespace hopf
