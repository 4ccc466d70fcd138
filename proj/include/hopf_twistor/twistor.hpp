#pragma once

// Orthonormal timelike/spacelike pairs (u-, u+), the para-quaternionic frame
// on pairs of tangent vectors, the three twistor sign classes and the curve
// families that realize them in CH^1.

#include <functional>
#include <string>

#include "hopf_twistor/fibration.hpp"

namespace hopf {

enum class Sign { plus, minus, zero };

std::string to_string(Sign s);
/// Accepts "plus"/"+", "minus"/"-", "zero"/"0". Throws InputError otherwise.
Sign parse_sign(const std::string& text);

/// max of |((u-,u-)) + 1|, |((u+,u+)) - 1|, |((u-,u+))|.
double stiefel_residual(const IndefVector& u_minus, const IndefVector& u_plus);

class StiefelPoint {
 public:
  StiefelPoint(IndefVector u_minus, IndefVector u_plus, double tol = kStructuralTol);

  const IndefVector& u_minus() const { return u_minus_; }
  const IndefVector& u_plus() const { return u_plus_; }
  int dim_n() const { return u_minus_.dim_n(); }
  double residual() const { return stiefel_residual(u_minus_, u_plus_); }

 private:
  IndefVector u_minus_;
  IndefVector u_plus_;
};

/// (g u-, g u+) for g in U(1,n).
StiefelPoint operator*(const GroupElement& g, const StiefelPoint& p);

/// A vector of {u-,u+}^perp x {u-,u+}^perp at `base`.
class TangentPair {
 public:
  TangentPair(IndefVector x_minus, IndefVector x_plus, StiefelPoint base, double tol = 1e-8);

  const IndefVector& x_minus() const { return x_minus_; }
  const IndefVector& x_plus() const { return x_plus_; }
  const StiefelPoint& base() const { return base_; }
  VectorPair as_pair() const { return {x_minus_, x_plus_}; }

  TangentPair operator+(const TangentPair& o) const;
  TangentPair operator-(const TangentPair& o) const;
  double max_abs() const { return std::max(x_minus_.max_abs(), x_plus_.max_abs()); }

 private:
  IndefVector x_minus_;
  IndefVector x_plus_;
  StiefelPoint base_;
};

/// I1 (X-,X+) = (iX-, -iX+), I2 = (X+, X-), I3 = (iX+, -iX-).
/// The frame acts on row vectors, so a product I_a I_b means I_a first.
TangentPair apply_I(int k, const TangentPair& v);

double pair_form(const TangentPair& x, const TangentPair& y);

/// (e^{i theta} u-, e^{i theta} u+).
StiefelPoint act_phase(const StiefelPoint& p, double theta);
/// The one-parameter action matching the sign: the circle (e^{it}u-, e^{-it}u+),
/// the boost (ch t u- + sh t u+, sh t u- + ch t u+), or the parabolic
/// ((1+it)u- + t u+, t u- + (1-it)u+).
StiefelPoint act_sign(Sign s, const StiefelPoint& p, double t);

/// A point of the twistor space of sign s, stored by a representative.
class TwistorClass {
 public:
  TwistorClass(Sign sign, StiefelPoint rep) : sign_(sign), rep_(std::move(rep)) {}
  Sign sign() const { return sign_; }
  const StiefelPoint& rep() const { return rep_; }

  /// True iff the signs agree and the representatives differ by the phase
  /// action composed with the sign action.
  bool equivalent(const TwistorClass& other, double tol = 1e-9) const;

 private:
  Sign sign_;
  StiefelPoint rep_;
};

IndefVector gamma_point(Sign s, double r, const StiefelPoint& p, double t);
/// t -> gamma_r^s(t). The circle family is periodic; all three use a wide
/// real domain.
ParamCurve gamma_curve(Sign s, double r, const StiefelPoint& p);

/// Closed-form unit horizontal tangent along gamma_r^s. For s = plus this is
/// H gamma' / sinh 2r and r = 0 throws DegenerateError.
IndefVector unit_horizontal_T(Sign s, double r, const StiefelPoint& p, double t);

/// |cosh r' gamma_r(t) + sinh r' i T_r(t) - gamma_{r+r'}(t)|_max.
double parallel_shift_residual(Sign s, double r, double r_prime, const StiefelPoint& p,
                               double t);

using Lift1D = std::function<StiefelPoint(double)>;

struct LiftCoefficients {
  double alpha_minus = 0.0;
  double alpha_plus = 0.0;
  cplx beta{0.0, 0.0};
  IndefVector w_minus = IndefVector(1);
  IndefVector w_plus = IndefVector(1);
  // Part of (du-, du+) not explained by the decomposition; nonzero only
  // when the lift leaves the Stiefel manifold.
  double reconstruction_residual = 0.0;
};

/// Coefficients of du- = i a- u- + b u+ + w-, du+ = conj(b) u- + i a+ u+ + w+
/// from central differences. Throws ValidationError when the
/// reconstruction residual exceeds `max_residual`.
LiftCoefficients lift_coefficients(const Lift1D& lift, double x, double step = 1e-5,
                                   double max_residual = 1e-8);

bool is_horizontal(Sign s, const LiftCoefficients& c, double tol = 1e-8);

/// Rates (dtheta/dx, dt/dx) of the gauge that removes the u-/u+ components
/// of the differential.
std::pair<double, double> gauge_rates(Sign s, const LiftCoefficients& c);

/// Gauge-normalized version of a horizontal lift, anchored at x0 (where it
/// agrees with the input). The gauge angles are integrated with classical
/// RK4 in steps of at most `max_step`. Throws InputError if the lift is not
/// horizontal at x0.
Lift1D normalize_lift_1d(Lift1D lift, Sign s, double x0, double max_step = 1e-2);

}  // namespace hopf
