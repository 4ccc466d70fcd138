#pragma once

// The Hopf fibration from the anti-de Sitter quadric ((w,w)) = -1 onto
// complex hyperbolic space: horizontal projection, tangent projection and
// finite-difference geometry of curves.

#include <functional>

#include "hopf_twistor/core_linalg.hpp"

namespace hopf {

/// A point of the anti-de Sitter quadric H_1^{2n+1}.
class AdSPoint {
 public:
  /// Throws ValidationError when |((v,v)) + 1| > tol.
  explicit AdSPoint(IndefVector v, double tol = kStructuralTol);

  const IndefVector& vec() const { return vec_; }
  int dim_n() const { return vec_.dim_n(); }

 private:
  IndefVector vec_;
};

/// A point of CH^n stored by a representative of its circle fibre.
class CHPoint {
 public:
  explicit CHPoint(AdSPoint rep) : rep_(std::move(rep)) {}
  const AdSPoint& rep() const { return rep_; }

  // Representative whose first nonvanishing coordinate is real positive.
  CHPoint gauged() const;

 private:
  AdSPoint rep_;
};

/// Same fibre iff ||((a,b))| - 1| <= tol.
bool ch_equal(const CHPoint& a, const CHPoint& b, double tol = kStructuralTol);

/// A curve t -> H_1^{2n+1} on the closed interval [t_min, t_max].
struct ParamCurve {
  std::function<IndefVector(double)> map;
  double t_min = -1e6;
  double t_max = 1e6;

  /// Raw coordinates at t; throws InputError outside the domain.
  IndefVector raw(double t) const;
  /// Validated point at t.
  AdSPoint operator()(double t) const { return AdSPoint(raw(t)); }
};

/// HX = X + <X, iw> iw. X must be tangent to the quadric at w; the
/// tangency check is relative to max(1, |X|) and uses `tol`.
IndefVector horizontal_part(const IndefVector& x, const AdSPoint& w, double tol = 1e-8);

/// X + <X, w> w, the orthogonal projection onto T_w H_1^{2n+1}.
IndefVector tangent_project_ads(const IndefVector& x, const AdSPoint& w);

/// v + ((v,w)) w: tangent and horizontal projection in one step. No
/// validation; w is assumed to lie on the quadric.
IndefVector horizontal_tangent_project(const IndefVector& v, const IndefVector& w);

/// sqrt(max(0, <v,v>)). Positive definite on horizontal vectors.
double horizontal_norm(const IndefVector& v);

/// Central difference (c(t+h) - c(t-h)) / 2h. With `richardson` the
/// estimate is combined with the step-2h one, (4 D_h - D_2h) / 3.
IndefVector numeric_derivative(const ParamCurve& c, double t, double step,
                               bool richardson = false);

struct CurvatureResult {
  double kappa = 0.0;     // |nabla_T T| >= 0
  double residual = 0.0;  // |nabla_T T - sigma kappa iT|
  int sigma = 1;          // orientation of iT that fits best
  double speed = 0.0;     // |H dc/dt|
  IndefVector tangent = IndefVector(1);
};

/// Curvature of the projected curve pi(c) at t. Differences T along the
/// curve with step `step`, corrects for the vertical drift of c, and
/// projects onto the horizontal tangent space. Throws DegenerateError when
/// the horizontal speed vanishes.
CurvatureResult curve_curvature(const ParamCurve& c, double t, double step = 1e-4);

}  // namespace hopf
