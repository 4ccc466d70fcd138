#include "hopf_twistor/fibration.hpp"

#include <cmath>
#include <sstream>

namespace hopf {

AdSPoint::AdSPoint(IndefVector v, double tol) : vec_(std::move(v)) {
  if (!vec_.all_finite()) throw InputError("AdSPoint: non-finite coordinates");
  const double res = std::abs(herm_form(vec_, vec_) + 1.0);
  if (res > tol) {
    std::ostringstream msg;
    msg << "point is off the anti-de Sitter quadric: |((w,w)) + 1| = " << res;
    throw ValidationError(msg.str(), res);
  }
}

CHPoint CHPoint::gauged() const {
  const CVector& c = rep_.vec().coords();
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double m = std::abs(c[k]);
    if (m > 1e-14) {
      const cplx phase = std::conj(c[k]) / m;
      return CHPoint(AdSPoint(phase * rep_.vec()));
    }
  }
  return *this;  // unreachable for points on the quadric
}

bool ch_equal(const CHPoint& a, const CHPoint& b, double tol) {
  if (a.rep().dim_n() != b.rep().dim_n()) return false;
  return std::abs(std::abs(herm_form(a.rep().vec(), b.rep().vec())) - 1.0) <= tol;
}

IndefVector ParamCurve::raw(double t) const {
  if (!(t >= t_min && t <= t_max)) {
    std::ostringstream msg;
    msg << "curve parameter " << t << " outside [" << t_min << ", " << t_max << "]";
    throw InputError(msg.str());
  }
  return map(t);
}

IndefVector horizontal_part(const IndefVector& x, const AdSPoint& w, double tol) {
  const double tangency = std::abs(real_form(x, w.vec()));
  if (tangency > tol * std::max(1.0, x.max_abs())) {
    std::ostringstream msg;
    msg << "horizontal_part: vector is not tangent to the quadric, <X,w> = " << tangency;
    throw InputError(msg.str());
  }
  const IndefVector iw = kI * w.vec();
  return x + real_form(x, iw) * iw;
}

IndefVector tangent_project_ads(const IndefVector& x, const AdSPoint& w) {
  return x + real_form(x, w.vec()) * w.vec();
}

IndefVector horizontal_tangent_project(const IndefVector& v, const IndefVector& w) {
  return v + herm_form(v, w) * w;
}

double horizontal_norm(const IndefVector& v) {
  return std::sqrt(std::max(0.0, real_form(v, v)));
}

IndefVector numeric_derivative(const ParamCurve& c, double t, double step, bool richardson) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("numeric_derivative: step must be positive");
  auto central = [&](double h) { return (c.raw(t + h) - c.raw(t - h)) / (2.0 * h); };
  if (!richardson) return central(step);
  const IndefVector d1 = central(step);
  const IndefVector d2 = central(2.0 * step);
  return (4.0 * d1 - d2) / 3.0;
}

namespace {

struct HorizontalFrame {
  IndefVector point;
  IndefVector tangent;   // unit, horizontal
  double speed;          // |H c'|
  double vertical_rate;  // phi' = -<c', ic>
};

HorizontalFrame frame_at(const ParamCurve& c, double t, double step) {
  const IndefVector p = c.raw(t);
  const IndefVector dc = (c.raw(t + step) - c.raw(t - step)) / (2.0 * step);
  const IndefVector ip = kI * p;
  const double vert = -real_form(dc, ip);
  // dc is tangent up to O(h^2); P also removes that component.
  const IndefVector h = horizontal_tangent_project(dc, p);
  const double speed = horizontal_norm(h);
  if (speed < 1e-8) throw DegenerateError("curve_curvature: horizontal speed vanishes");
  return {p, h / speed, speed, vert};
}

}  // namespace

CurvatureResult curve_curvature(const ParamCurve& c, double t, double step) {
  if (!(step > 0.0)) throw InputError("curve_curvature: step must be positive");
  const HorizontalFrame f0 = frame_at(c, t, step);
  const HorizontalFrame fp = frame_at(c, t + step, step);
  const HorizontalFrame fm = frame_at(c, t - step, step);

  // The horizontal lift differs from c by the phase exp(-i phi); in that
  // gauge dT/dt picks up -i phi' T.
  const IndefVector dT = (fp.tangent - fm.tangent) / (2.0 * step);
  const IndefVector lifted = dT - f0.vertical_rate * (kI * f0.tangent);
  const IndefVector nabla = horizontal_tangent_project(lifted, f0.point) / f0.speed;

  CurvatureResult out;
  out.kappa = horizontal_norm(nabla);
  out.speed = f0.speed;
  out.tangent = f0.tangent;
  const IndefVector iT = kI * f0.tangent;
  const double res_plus = horizontal_norm(nabla - out.kappa * iT);
  const double res_minus = horizontal_norm(nabla + out.kappa * iT);
  out.sigma = res_plus <= res_minus ? 1 : -1;
  out.residual = std::min(res_plus, res_minus);
  return out;
}

}  // namespace hopf
