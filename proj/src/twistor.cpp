#include "hopf_twistor/twistor.hpp"

#include <cmath>
#include <sstream>

namespace hopf {

std::string to_string(Sign s) {
  switch (s) {
    case Sign::plus: return "plus";
    case Sign::minus: return "minus";
    case Sign::zero: return "zero";
  }
  return "?";
}

Sign parse_sign(const std::string& text) {
  if (text == "plus" || text == "+") return Sign::plus;
  if (text == "minus" || text == "-") return Sign::minus;
  if (text == "zero" || text == "0") return Sign::zero;
  throw InputError("unknown sign '" + text + "' (expected plus, minus or zero)");
}

double stiefel_residual(const IndefVector& u_minus, const IndefVector& u_plus) {
  return std::max({std::abs(herm_form(u_minus, u_minus) + 1.0),
                   std::abs(herm_form(u_plus, u_plus) - 1.0),
                   std::abs(herm_form(u_minus, u_plus))});
}

StiefelPoint::StiefelPoint(IndefVector u_minus, IndefVector u_plus, double tol)
    : u_minus_(std::move(u_minus)), u_plus_(std::move(u_plus)) {
  if (u_minus_.dim_n() != u_plus_.dim_n()) throw InputError("StiefelPoint: dimension mismatch");
  if (!u_minus_.all_finite() || !u_plus_.all_finite())
    throw InputError("StiefelPoint: non-finite coordinates");
  const double res = stiefel_residual(u_minus_, u_plus_);
  if (res > tol) {
    std::ostringstream msg;
    msg << "pair is not orthonormal of signature (1,1): residual " << res;
    throw ValidationError(msg.str(), res);
  }
}

StiefelPoint operator*(const GroupElement& g, const StiefelPoint& p) {
  return StiefelPoint(g * p.u_minus(), g * p.u_plus(), std::max(kStructuralTol, 10.0 * g.tol()));
}

namespace {

double perp_residual(const IndefVector& x, const StiefelPoint& b) {
  return std::max(std::abs(herm_form(x, b.u_minus())), std::abs(herm_form(x, b.u_plus())));
}

}  // namespace

TangentPair::TangentPair(IndefVector x_minus, IndefVector x_plus, StiefelPoint base, double tol)
    : x_minus_(std::move(x_minus)), x_plus_(std::move(x_plus)), base_(std::move(base)) {
  if (x_minus_.dim_n() != base_.dim_n() || x_plus_.dim_n() != base_.dim_n())
    throw InputError("TangentPair: dimension mismatch");
  const double res = std::max(perp_residual(x_minus_, base_), perp_residual(x_plus_, base_));
  if (res > tol * std::max(1.0, max_abs())) {
    std::ostringstream msg;
    msg << "tangent pair is not orthogonal to span{u-,u+}: residual " << res;
    throw ValidationError(msg.str(), res);
  }
}

TangentPair TangentPair::operator+(const TangentPair& o) const {
  return TangentPair(x_minus_ + o.x_minus_, x_plus_ + o.x_plus_, base_);
}

TangentPair TangentPair::operator-(const TangentPair& o) const {
  return TangentPair(x_minus_ - o.x_minus_, x_plus_ - o.x_plus_, base_);
}

TangentPair apply_I(int k, const TangentPair& v) {
  switch (k) {
    case 1: return TangentPair(kI * v.x_minus(), -kI * v.x_plus(), v.base());
    case 2: return TangentPair(v.x_plus(), v.x_minus(), v.base());
    case 3: return TangentPair(kI * v.x_plus(), -kI * v.x_minus(), v.base());
    default: throw InputError("apply_I: index must be 1, 2 or 3");
  }
}

double pair_form(const TangentPair& x, const TangentPair& y) {
  return pair_form(x.as_pair(), y.as_pair());
}

StiefelPoint act_phase(const StiefelPoint& p, double theta) {
  const cplx e = std::polar(1.0, theta);
  return StiefelPoint(e * p.u_minus(), e * p.u_plus());
}

StiefelPoint act_sign(Sign s, const StiefelPoint& p, double t) {
  const IndefVector& um = p.u_minus();
  const IndefVector& up = p.u_plus();
  switch (s) {
    case Sign::plus:
      return StiefelPoint(std::polar(1.0, t) * um, std::polar(1.0, -t) * up);
    case Sign::minus: {
      const double c = std::cosh(t), sh = std::sinh(t);
      // Entries grow like e^|t|; scale the check accordingly.
      return StiefelPoint(c * um + sh * up, sh * um + c * up, kStructuralTol * c * c);
    }
    case Sign::zero:
      return StiefelPoint(cplx(1.0, t) * um + t * up, t * um + cplx(1.0, -t) * up,
                          kStructuralTol * (1.0 + t * t));
  }
  throw InputError("act_sign: bad sign");
}

bool TwistorClass::equivalent(const TwistorClass& other, double tol) const {
  if (sign_ != other.sign_ || rep_.dim_n() != other.rep_.dim_n()) return false;
  const IndefVector& um = rep_.u_minus();
  const IndefVector& up = rep_.u_plus();
  const IndefVector& vm = other.rep_.u_minus();
  const IndefVector& vp = other.rep_.u_plus();
  // v- = m11 u- + m21 u+, v+ = m12 u- + m22 u+.
  const cplx m11 = -herm_form(vm, um), m21 = herm_form(vm, up);
  const cplx m12 = -herm_form(vp, um), m22 = herm_form(vp, up);
  const double span_res = std::max((vm - (m11 * um + m21 * up)).max_abs(),
                                   (vp - (m12 * um + m22 * up)).max_abs());
  if (span_res > tol) return false;
  switch (sign_) {
    case Sign::plus:
      return std::abs(m21) <= tol && std::abs(m12) <= tol && std::abs(std::abs(m11) - 1.0) <= tol &&
             std::abs(std::abs(m22) - 1.0) <= tol;
    case Sign::minus:
      return std::abs(m11 - m22) <= tol && std::abs(m12 - m21) <= tol &&
             std::abs((m12 * std::conj(m11)).imag()) <= tol;
    case Sign::zero: {
      if (std::abs(m12 - m21) > tol) return false;
      const cplx phase = m11 - kI * m12;
      if (std::abs(phase - (m22 + kI * m12)) > tol) return false;
      if (std::abs(std::abs(phase) - 1.0) > tol) return false;
      return std::abs((m12 / phase).imag()) <= tol;
    }
  }
  return false;
}

IndefVector gamma_point(Sign s, double r, const StiefelPoint& p, double t) {
  const double ch = std::cosh(r), sh = std::sinh(r);
  const IndefVector& um = p.u_minus();
  const IndefVector& up = p.u_plus();
  switch (s) {
    case Sign::plus:
      return std::polar(ch, t) * um + std::polar(sh, -t) * up;
    case Sign::minus:
      return cplx(ch * std::cosh(t), sh * std::sinh(t)) * um +
             cplx(ch * std::sinh(t), sh * std::cosh(t)) * up;
    case Sign::zero: {
      const double te = t * std::exp(r);
      return cplx(ch, te) * um + cplx(te, sh) * up;
    }
  }
  throw InputError("gamma_point: bad sign");
}

ParamCurve gamma_curve(Sign s, double r, const StiefelPoint& p) {
  ParamCurve c;
  c.map = [s, r, p](double t) { return gamma_point(s, r, p, t); };
  c.t_min = -50.0;
  c.t_max = 50.0;
  return c;
}

IndefVector unit_horizontal_T(Sign s, double r, const StiefelPoint& p, double t) {
  const double ch = std::cosh(r), sh = std::sinh(r);
  const IndefVector& um = p.u_minus();
  const IndefVector& up = p.u_plus();
  switch (s) {
    case Sign::plus:
      if (r == 0.0) throw DegenerateError("unit_horizontal_T: radius 0 is degenerate for sign plus");
      return -kI * (std::polar(sh, t) * um + std::polar(ch, -t) * up);
    case Sign::minus:
      return cplx(ch * std::sinh(t), -sh * std::cosh(t)) * um +
             cplx(ch * std::cosh(t), -sh * std::sinh(t)) * up;
    case Sign::zero: {
      const double te = t * std::exp(r);
      return cplx(te, -sh) * um + cplx(ch, -te) * up;
    }
  }
  throw InputError("unit_horizontal_T: bad sign");
}

double parallel_shift_residual(Sign s, double r, double r_prime, const StiefelPoint& p,
                               double t) {
  const IndefVector shifted = std::cosh(r_prime) * gamma_point(s, r, p, t) +
                              std::sinh(r_prime) * (kI * unit_horizontal_T(s, r, p, t));
  return (shifted - gamma_point(s, r + r_prime, p, t)).max_abs();
}

LiftCoefficients lift_coefficients(const Lift1D& lift, double x, double step,
                                   double max_residual) {
  if (!(step > 0.0)) throw InputError("lift_coefficients: step must be positive");
  const StiefelPoint p = lift(x);
  const StiefelPoint pp = lift(x + step);
  const StiefelPoint pm = lift(x - step);
  const IndefVector& um = p.u_minus();
  const IndefVector& up = p.u_plus();
  const IndefVector dm = (pp.u_minus() - pm.u_minus()) / (2.0 * step);
  const IndefVector dp = (pp.u_plus() - pm.u_plus()) / (2.0 * step);

  LiftCoefficients c;
  const cplx hm = herm_form(dm, um);  // = -i alpha-
  c.alpha_minus = -hm.imag();
  c.beta = herm_form(dm, up);
  c.w_minus = dm + hm * um - c.beta * up;

  const cplx a_plus = -herm_form(dp, um);  // should equal conj(beta)
  const cplx b_plus = herm_form(dp, up);   // = i alpha+
  c.alpha_plus = b_plus.imag();
  c.w_plus = dp - a_plus * um - b_plus * up;

  const IndefVector rec_m = dm - (cplx(0.0, c.alpha_minus) * um + c.beta * up + c.w_minus);
  const IndefVector rec_p =
      dp - (std::conj(c.beta) * um + cplx(0.0, c.alpha_plus) * up + c.w_plus);
  c.reconstruction_residual = std::max(rec_m.max_abs(), rec_p.max_abs());
  if (c.reconstruction_residual > max_residual) {
    std::ostringstream msg;
    msg << "lift_coefficients: differential is inconsistent with the Stiefel constraints "
        << "(residual " << c.reconstruction_residual << ")";
    throw ValidationError(msg.str(), c.reconstruction_residual);
  }
  return c;
}

bool is_horizontal(Sign s, const LiftCoefficients& c, double tol) {
  switch (s) {
    case Sign::plus:
      return std::abs(c.beta) <= tol;
    case Sign::minus:
      return std::abs(c.alpha_minus - c.alpha_plus) <= tol && std::abs(c.beta.imag()) <= tol;
    case Sign::zero:
      return std::abs(c.alpha_minus - c.alpha_plus - 2.0 * c.beta.real()) <= tol &&
             std::abs(c.beta.imag()) <= tol;
  }
  return false;
}

std::pair<double, double> gauge_rates(Sign s, const LiftCoefficients& c) {
  const double mean = 0.5 * (c.alpha_minus + c.alpha_plus);
  if (s == Sign::plus) return {-mean, 0.5 * (c.alpha_plus - c.alpha_minus)};
  return {-mean, -c.beta.real()};
}

Lift1D normalize_lift_1d(Lift1D lift, Sign s, double x0, double max_step) {
  if (!(max_step > 0.0)) throw InputError("normalize_lift_1d: step must be positive");
  const LiftCoefficients c0 = lift_coefficients(lift, x0);
  if (!is_horizontal(s, c0, 1e-8)) {
    throw InputError("normalize_lift_1d: lift is not horizontal for sign " + to_string(s));
  }
  return [lift = std::move(lift), s, x0, max_step](double x) {
    auto rates = [&](double at) {
      const LiftCoefficients c = lift_coefficients(lift, at);
      if (!is_horizontal(s, c, 1e-6))
        throw InputError("normalize_lift_1d: lift is not horizontal along the path");
      return gauge_rates(s, c);
    };
    const double span = x - x0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / max_step)));
    const double h = span / steps;
    double theta = 0.0, t = 0.0;
    if (span != 0.0) {
      // The rates depend on x alone, so RK4 reduces to Simpson's rule.
      auto f_prev = rates(x0);
      for (int k = 0; k < steps; ++k) {
        const double a = x0 + k * h;
        const auto f_mid = rates(a + 0.5 * h);
        const auto f_end = rates(a + h);
        theta += h / 6.0 * (f_prev.first + 4.0 * f_mid.first + f_end.first);
        t += h / 6.0 * (f_prev.second + 4.0 * f_mid.second + f_end.second);
        f_prev = f_end;
      }
    }
    return act_phase(act_sign(s, lift(x), t), theta);
  };
}

}  // namespace hopf
