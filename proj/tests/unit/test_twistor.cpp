#include <doctest.h>

#include <cmath>
#include <random>

#include "hopf_twistor/hopf_construct.hpp"

using namespace hopf;

namespace {

GroupElement random_group(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
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
  return matrix_exp(validate_algebra(x), 1.0);
}

StiefelPoint standard_frame(int n) {
  return StiefelPoint(IndefVector::basis(n, 0), IndefVector::basis(n, 1));
}

IndefVector random_perp(const StiefelPoint& b, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector c(b.dim_n() + 1);
  for (auto& z : c) z = cplx(g(rng), g(rng));
  const IndefVector x(c);
  return x + herm_form(x, b.u_minus()) * b.u_minus() - herm_form(x, b.u_plus()) * b.u_plus();
}

TangentPair random_pair(const StiefelPoint& b, std::mt19937_64& rng) {
  return TangentPair(random_perp(b, rng), random_perp(b, rng), b);
}

double diff(const TangentPair& a, const TangentPair& b) { return (a - b).max_abs(); }

LiftCoefficients coefficients(double am, double ap, cplx beta) {
  LiftCoefficients c;
  c.alpha_minus = am;
  c.alpha_plus = ap;
  c.beta = beta;
  return c;
}

}  // namespace

TEST_CASE("parse_sign and to_string") {
  CHECK(parse_sign("plus") == Sign::plus);
  CHECK(parse_sign("+") == Sign::plus);
  CHECK(parse_sign("-") == Sign::minus);
  CHECK(parse_sign("0") == Sign::zero);
  CHECK(parse_sign(to_string(Sign::minus)) == Sign::minus);
  CHECK_THROWS_AS(parse_sign("up"), InputError);
}

TEST_CASE("StiefelPoint invariants") {
  CHECK(standard_frame(2).residual() == 0.0);
  CHECK_THROWS_AS(StiefelPoint(IndefVector::basis(2, 0), IndefVector::basis(2, 0)), ValidationError);
  CHECK_THROWS_AS(StiefelPoint(IndefVector::basis(2, 1), IndefVector::basis(2, 2)), ValidationError);
  const StiefelPoint moved = random_group(3, 1) * standard_frame(3);
  CHECK(moved.residual() < 1e-10);
}

TEST_CASE("TangentPair membership") {
  const StiefelPoint b = standard_frame(2);
  CHECK_THROWS_AS(TangentPair(IndefVector::basis(2, 0), IndefVector(2), b), ValidationError);
  CHECK_NOTHROW(TangentPair(IndefVector::basis(2, 2), IndefVector(2), b));
}

TEST_CASE("para-quaternionic identities") {
  std::mt19937_64 rng(5);
  const StiefelPoint b = random_group(3, 2) * standard_frame(3);
  // products act on the right: v I_a I_b = I_b(I_a(v)).
  for (int trial = 0; trial < 10; ++trial) {
    const TangentPair v = random_pair(b, rng);
    const TangentPair w = random_pair(b, rng);
    const TangentPair neg = TangentPair(-v.x_minus(), -v.x_plus(), b);
    auto I = [](int k, const TangentPair& x) { return apply_I(k, x); };
    CHECK(diff(I(1, I(1, v)), neg) < 1e-14);
    CHECK(diff(I(2, I(2, v)), v) < 1e-14);
    CHECK(diff(I(3, I(3, v)), v) < 1e-14);
    CHECK(diff(I(2, I(1, v)), I(3, neg)) < 1e-14);
    CHECK(diff(I(1, I(2, v)), I(3, v)) < 1e-14);
    CHECK(diff(I(3, I(2, v)), I(1, v)) < 1e-14);
    CHECK(diff(I(2, I(3, v)), I(1, neg)) < 1e-14);
    CHECK(diff(I(1, I(3, v)), I(2, neg)) < 1e-14);
    CHECK(diff(I(3, I(1, v)), I(2, v)) < 1e-14);
    for (int k = 1; k <= 3; ++k)
      CHECK(std::abs(pair_form(I(k, v), w) + pair_form(v, I(k, w))) < 1e-12);
  }
  CHECK_THROWS_AS(apply_I(4, random_pair(b, rng)), InputError);
}

TEST_CASE("twistor class equivalence") {
  const StiefelPoint p = random_group(2, 3) * standard_frame(2);
  for (Sign s : {Sign::plus, Sign::minus, Sign::zero}) {
    const TwistorClass a(s, p);
    const TwistorClass b(s, act_phase(act_sign(s, p, 0.7), -1.1));
    CHECK(a.equivalent(b));
    CHECK(b.equivalent(a));
  }
  // A boost is not a circle action, and vice versa.
  CHECK_FALSE(TwistorClass(Sign::plus, p).equivalent(TwistorClass(Sign::plus, act_sign(Sign::minus, p, 0.5))));
  CHECK_FALSE(TwistorClass(Sign::minus, p).equivalent(TwistorClass(Sign::minus, act_sign(Sign::plus, p, 0.5))));
  CHECK_FALSE(TwistorClass(Sign::zero, p).equivalent(TwistorClass(Sign::minus, p)));
  const StiefelPoint other(IndefVector::basis(2, 0), IndefVector::basis(2, 2));
  CHECK_FALSE(TwistorClass(Sign::plus, standard_frame(2)).equivalent(TwistorClass(Sign::plus, other)));
}

TEST_CASE("gamma_point examples") {
  const StiefelPoint p = random_group(2, 4) * standard_frame(2);
  const IndefVector& um = p.u_minus();
  const IndefVector& up = p.u_plus();
  const double r = 0.37;
  CHECK((gamma_point(Sign::plus, r, p, 0.0) - (std::cosh(r) * um + std::sinh(r) * up)).max_abs() < 1e-14);
  for (double t : {-0.8, 0.0, 1.4})
    CHECK((gamma_point(Sign::minus, 0.0, p, t) - (std::cosh(t) * um + std::sinh(t) * up)).max_abs() < 1e-14);
  CHECK((gamma_point(Sign::zero, 0.0, p, 1.0) - (cplx(1.0, 1.0) * um + up)).max_abs() < 1e-14);
}

TEST_CASE("gamma curves stay in the span of the frame and on the quadric") {
  const StiefelPoint p = random_group(3, 6) * standard_frame(3);
  for (Sign s : {Sign::plus, Sign::minus, Sign::zero})
    for (double r : {-1.0, 0.3})
      for (double t : {-1.0, 0.5}) {
        const IndefVector g = gamma_point(s, r, p, t);
        const IndefVector perp = g + herm_form(g, p.u_minus()) * p.u_minus() - herm_form(g, p.u_plus()) * p.u_plus();
        CHECK(perp.max_abs() < 1e-12);
        CHECK(std::abs(herm_form(g, g) + 1.0) < 1e-12);
      }
}

TEST_CASE("unit_horizontal_T examples") {
  const StiefelPoint p = random_group(2, 7) * standard_frame(2);
  const IndefVector& um = p.u_minus();
  const IndefVector& up = p.u_plus();
  const IndefVector want_plus = -kI * (std::sinh(0.5) * um + std::cosh(0.5) * up);
  CHECK((unit_horizontal_T(Sign::plus, 0.5, p, 0.0) - want_plus).max_abs() < 1e-14);
  for (double r : {-0.4, 0.0, 0.9}) {
    const IndefVector want_zero = cplx(0.0, -std::sinh(r)) * um + std::cosh(r) * up;
    CHECK((unit_horizontal_T(Sign::zero, r, p, 0.0) - want_zero).max_abs() < 1e-14);
  }
  CHECK_THROWS_AS(unit_horizontal_T(Sign::plus, 0.0, p, 0.0), DegenerateError);
  for (Sign s : {Sign::plus, Sign::minus, Sign::zero})
    for (double r : {-0.6, 0.2, 1.0})
      for (double t : {-1.0, 0.3}) {
        const IndefVector T = unit_horizontal_T(s, r, p, t);
        const IndefVector g = gamma_point(s, r, p, t);
        CHECK(std::abs(real_form(T, T) - 1.0) < 1e-12);
        CHECK(std::abs(herm_form(T, g)) < 1e-12);
      }
}

TEST_CASE("parallel_shift_residual examples") {
  const StiefelPoint p = random_group(2, 8) * standard_frame(2);
  for (Sign s : {Sign::plus, Sign::minus, Sign::zero}) CHECK(parallel_shift_residual(s, 0.4, 0.0, p, 0.2) == 0.0);
  CHECK(parallel_shift_residual(Sign::plus, 0.3, 0.4, p, 1.0) <= 1e-12);
  CHECK(parallel_shift_residual(Sign::minus, -0.2, 0.7, p, -1.0) <= 1e-12);
  CHECK(parallel_shift_residual(Sign::zero, 0.5, -0.3, p, 0.6) <= 1e-12);
}

TEST_CASE("lift_coefficients examples") {
  const StiefelPoint p = random_group(2, 10) * standard_frame(2);
  const Lift1D constant = [p](double) { return p; };
  const LiftCoefficients c0 = lift_coefficients(constant, 0.2);
  CHECK(c0.alpha_minus == 0.0);
  CHECK(c0.alpha_plus == 0.0);
  CHECK(std::abs(c0.beta) == 0.0);

  const Lift1D rot = [p](double x) { return StiefelPoint(std::polar(1.0, x) * p.u_minus(), p.u_plus()); };
  const LiftCoefficients c1 = lift_coefficients(rot, 0.3);
  CHECK(std::abs(c1.alpha_minus - 1.0) < 1e-9);
  CHECK(std::abs(c1.alpha_plus) < 1e-9);
  CHECK(std::abs(c1.beta) < 1e-9);

  const LiftChart chart = tube_chk_lift(3, 1);
  for (int j = 0; j < chart.lower.size(); ++j) {
    const Lift1D along = [&chart, j](double x) {
      ChartVector at = 0.5 * (chart.lower + chart.upper);
      at[j] += x;
      return chart.lift(at);
    };
    const LiftCoefficients c = lift_coefficients(along, 0.05);
    CHECK(std::abs(c.beta) < 1e-9);
    const StiefelPoint u = along(0.05);
    CHECK(std::abs(herm_form(c.w_minus, u.u_minus())) < 1e-8);
    CHECK(std::abs(herm_form(c.w_plus, u.u_plus())) < 1e-8);
  }

  const Lift1D scaled = [p](double x) {
    return StiefelPoint((1.0 + x) * p.u_minus(), p.u_plus(), 10.0);
  };
  CHECK_THROWS_AS(lift_coefficients(scaled, 0.5), ValidationError);
}

TEST_CASE("is_horizontal examples") {
  CHECK(is_horizontal(Sign::plus, coefficients(0.3, -2.0, 0.0)));
  CHECK_FALSE(is_horizontal(Sign::plus, coefficients(0.3, -2.0, 0.1)));
  CHECK(is_horizontal(Sign::minus, coefficients(1.0, 1.0, 0.5)));
  CHECK_FALSE(is_horizontal(Sign::minus, coefficients(1.0, 0.0, 0.5)));
  CHECK_FALSE(is_horizontal(Sign::minus, coefficients(1.0, 1.0, cplx(0.5, 0.2))));
  CHECK(is_horizontal(Sign::zero, coefficients(2.0, 0.0, 1.0)));
  CHECK_FALSE(is_horizontal(Sign::zero, coefficients(2.0, 0.0, 0.5)));
}

TEST_CASE("normalize_lift_1d examples") {
  const StiefelPoint p = random_group(2, 11) * standard_frame(2);

  const Lift1D constant = [p](double) { return p; };
  const Lift1D same = normalize_lift_1d(constant, Sign::minus, 0.0);
  for (double x : {-0.5, 0.3}) {
    CHECK((same(x).u_minus() - p.u_minus()).max_abs() < 1e-9);
    CHECK((same(x).u_plus() - p.u_plus()).max_abs() < 1e-9);
  }

  const Lift1D common = [p](double x) { return act_phase(p, x); };
  const Lift1D fixed = normalize_lift_1d(common, Sign::minus, 0.0);
  for (double x : {-0.7, 0.4, 1.0}) {
    // theta(x) = -x undoes the phase exactly.
    CHECK((fixed(x).u_minus() - p.u_minus()).max_abs() < 1e-9);
    CHECK((fixed(x).u_plus() - p.u_plus()).max_abs() < 1e-9);
  }

  const LiftChart chart = tube_chk_lift(3, 1);
  const Lift1D twisted = [&chart](double x) {
    ChartVector at = 0.5 * (chart.lower + chart.upper);
    at[0] += x;
    const StiefelPoint u = chart.lift(at);
    return StiefelPoint(std::polar(1.0, 1.5 * x) * u.u_minus(), std::polar(1.0, -0.5 * x) * u.u_plus());
  };
  const LiftCoefficients before = lift_coefficients(twisted, 0.1);
  CHECK(std::abs(before.alpha_minus) > 0.1);
  CHECK(std::abs(before.alpha_plus) > 0.1);
  const Lift1D normal = normalize_lift_1d(twisted, Sign::plus, 0.0);
  for (double x : {-0.2, 0.1, 0.3}) {
    const LiftCoefficients c = lift_coefficients(normal, x);
    CHECK(std::abs(c.alpha_minus) <= 1e-6);
    CHECK(std::abs(c.alpha_plus) <= 1e-6);
    CHECK(std::abs(c.beta) <= 1e-6);
  }

  const Lift1D tilted = [p](double x) {
    return StiefelPoint(cplx(std::cosh(x), 0.0) * p.u_minus() + cplx(0.0, std::sinh(x)) * p.u_plus(),
                        cplx(0.0, -std::sinh(x)) * p.u_minus() + std::cosh(x) * p.u_plus());
  };
  CHECK_THROWS_AS(normalize_lift_1d(tilted, Sign::plus, 0.0), InputError);
}
