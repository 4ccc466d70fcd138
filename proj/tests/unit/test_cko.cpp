#include <doctest.h>

#include <cmath>
#include <random>

#include "hopf_twistor/cko.hpp"

using namespace hopf;

namespace {

CKOForm random_form(int n, std::uint64_t seed, double y1_scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CKOForm f = CKOForm::zero(n, n - 1);
  for (int j = 0; j < f.dim_g; ++j) {
    f.alpha0[j] = u(rng);
    f.alpha1[j] = u(rng);
    for (int k = 0; k < n - 1; ++k) {
      f.x_form(k, j) = u(rng);
      f.y0(k, j) = u(rng);
    }
    for (int a = 0; a < n - 1; ++a)
      for (int b = a; b < n - 1; ++b) {
        const double s = u(rng), t = u(rng);
        f.w2[j](a, b) = f.w2[j](b, a) = s;
        if (a != b) {
          f.w1[j](a, b) = t;
          f.w1[j](b, a) = -t;
        }
      }
  }
  // y1 proportional to y0 keeps y0^t ^ y1 = 0.
  f.y1 = y1_scale * f.y0;
  return f;
}

OneParamData reference_data() {
  OneParamData d;
  d.x = 1.0;
  d.y0 = 1.0;
  return d;
}

}  // namespace

TEST_CASE("assemble_omega examples") {
  const CKOForm zero = CKOForm::zero(2, 1);
  CHECK(assemble_omega(zero, Eigen::VectorXd::Ones(1)).matrix().norm() == 0.0);

  CKOForm f = CKOForm::zero(2, 1);
  f.alpha0[0] = 1.0;
  const CMatrix m = assemble_omega(f, Eigen::VectorXd::Ones(1)).matrix();
  CMatrix want = CMatrix::Zero(3, 3);
  want(0, 0) = kI;
  want(0, 1) = 0.5 * kI;
  want(1, 0) = -0.5 * kI;
  CHECK((m - want).cwiseAbs().maxCoeff() == 0.0);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CKOForm g = random_form(3, seed, 0.4);
    Eigen::VectorXd y(2);
    y << 0.7, -1.3;
    CHECK(algebra_residual(assemble_omega(g, y).matrix()) <= 1e-12);
  }
  CHECK_THROWS_AS(assemble_omega(f, Eigen::VectorXd::Ones(2)), InputError);
}

TEST_CASE("validate_cko rejects malformed forms") {
  CKOForm f = random_form(3, 4, 0.0);
  CHECK_NOTHROW(validate_cko(f));

  CKOForm sym = f;
  sym.w1[0](0, 1) = sym.w1[0](1, 0) = 0.5;
  CHECK_THROWS_AS(validate_cko(sym), ValidationError);

  CKOForm skew = f;
  skew.w2[1](0, 1) = 0.3;
  skew.w2[1](1, 0) = -0.3;
  CHECK_THROWS_AS(validate_cko(skew), ValidationError);

  CKOForm wedge = f;
  wedge.y1 = Eigen::MatrixXd::Zero(2, 2);
  wedge.y1(1, 1) = 1.0;
  wedge.y0 = Eigen::MatrixXd::Zero(2, 2);
  wedge.y0(1, 0) = 1.0;
  CHECK(y_wedge_residual(wedge) == doctest::Approx(1.0));
  CHECK_THROWS_AS(validate_cko(wedge), ValidationError);

  CKOForm shape = f;
  shape.alpha0.resize(3);
  shape.alpha0.setZero();
  CHECK_THROWS_AS(validate_cko(shape), InputError);

  CKOForm nan = f;
  nan.x_form(0, 0) = std::nan("");
  CHECK_THROWS_AS(validate_cko(nan), InputError);

  CHECK_THROWS_AS(validate_cko(CKOForm::zero(3, 1)), InputError);
}

TEST_CASE("Maurer-Cartan examples") {
  CHECK(maurer_cartan_residual(CKOForm::zero(3, 2)) == 0.0);

  CKOForm one = CKOForm::zero(2, 1);
  one.alpha0[0] = 0.4;
  one.x_form(0, 0) = 1.0;
  one.y0(0, 0) = -2.0;
  const MaurerCartanReport r1 = maurer_cartan_report(one);
  CHECK(r1.trivially_integrable);
  CHECK(r1.residual == 0.0);

  // Only x(e_1) is nonzero: every wedge term has a vanishing factor.
  CKOForm axis = CKOForm::zero(3, 2);
  axis.x_form(0, 0) = 1.0;
  const MaurerCartanReport r2 = maurer_cartan_report(axis);
  CHECK_FALSE(r2.trivially_integrable);
  CHECK(r2.residual == 0.0);
  CHECK(r2.commutator_residual == 0.0);
  CHECK(r2.equations.size() == 9);

  const MaurerCartanReport r3 = maurer_cartan_report(random_form(3, 5, 0.3));
  CHECK(r3.residual > 1e-3);
  CHECK(r3.commutator_residual > 1e-3);
}

TEST_CASE("Maurer-Cartan terms equal the commutator entries") {
  for (int n : {3, 4}) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
      const CKOForm f = random_form(n, seed, -0.6);
      for (int i = 0; i < f.dim_g; ++i)
        for (int j = i + 1; j < f.dim_g; ++j) {
          const CMatrix a = omega_axis(f, i).matrix(), b = omega_axis(f, j).matrix();
          const CMatrix c = a * b - b * a;
          const MaurerCartanTerms t = maurer_cartan_terms(f, i, j);
          CHECK(std::abs(t.alpha0 - c(0, 0).imag()) < 1e-12);
          CHECK(std::abs(t.alpha1 - c(1, 1).imag()) < 1e-12);
          CHECK(std::abs(t.y0y1) < 1e-12);
          for (int k = 0; k < n - 1; ++k) {
            CHECK(std::abs(t.x_from_y0[k] - c(2 + k, 0).real()) < 1e-12);
            CHECK(std::abs(t.y0[k] - c(2 + k, 0).imag()) < 1e-12);
            CHECK(std::abs(t.x_from_y1[k] - c(2 + k, 1).real()) < 1e-12);
            CHECK(std::abs(t.y1[k] - c(2 + k, 1).imag()) < 1e-12);
            for (int l = 0; l < n - 1; ++l) {
              CHECK(std::abs(t.w1(k, l) - c(2 + k, 2 + l).real()) < 1e-12);
              CHECK(std::abs(t.w2(k, l) - c(2 + k, 2 + l).imag()) < 1e-12);
            }
          }
        }
    }
  }
}

TEST_CASE("two-path witness") {
  CKOForm axis = CKOForm::zero(3, 2);
  axis.x_form(0, 0) = 1.0;
  Eigen::VectorXd end(2);
  end << 0.8, -0.6;
  const GroupElement b0 = GroupElement::identity(3);
  CHECK(two_path_witness(axis, b0, end) <= 1e-6);
  CHECK(two_path_witness(random_form(3, 6, 0.0), b0, end) > 1e-3);
  CHECK_THROWS_AS(two_path_witness(axis, b0, Eigen::VectorXd::Ones(3)), InputError);
}

TEST_CASE("one_param_group") {
  OneParamData d = reference_data();
  d.base = matrix_exp(assemble_omega(random_form(2, 7, 1.0), Eigen::VectorXd::Constant(1, 0.3)), 1.0);
  CHECK((one_param_group(d, 0.0).matrix() - d.base.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const CMatrix lhs = one_param_group(d, 0.9).matrix();
  const CMatrix rhs = (one_param_group(d, 0.4) * matrix_exp(d.omega(), 0.5)).matrix();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(one_param_group(d, 1.7).residual() <= 1e-10);
}

TEST_CASE("OneParamData validation") {
  CHECK_THROWS_AS(OneParamData{}.validate(), InputError);
  OneParamData nan = reference_data();
  nan.w = std::nan("");
  CHECK_THROWS_AS(nan.validate(), InputError);
  CHECK_NOTHROW(reference_data().validate());
}

TEST_CASE("predicted_rho examples") {
  const OneParamData d = reference_data();
  CHECK(predicted_rho(d, 1.0) == doctest::Approx(3.0 / 5.0).epsilon(1e-14));
  CHECK(predicted_rho(d, 2.0) == doctest::Approx(12.0 / 14.0).epsilon(1e-14));
  CHECK(std::abs(predicted_rho(d, 1e6) - 1.0) < 1e-5);

  OneParamData horo;
  horo.alpha0 = 0.3;
  horo.alpha1 = -0.2;
  horo.x = 1.0;
  horo.y0 = horo.y1 = 0.7;
  horo.w = 0.4;
  for (double lambda : {0.5, 1.0, 1.7}) CHECK(predicted_rho(horo, lambda) == doctest::Approx(1.0));

  OneParamData flat;
  flat.alpha0 = flat.alpha1 = flat.w = 1.0;
  flat.x = 0.5;
  CHECK(one_param_degenerate(flat));
  CHECK_FALSE(one_param_degenerate(d));
  CHECK_THROWS_AS(predicted_rho(flat, 1.0), DegenerateError);
}

TEST_CASE("horosphere_test") {
  OneParamData d = reference_data();
  CHECK_FALSE(horosphere_test(d));
  CHECK(std::abs(predicted_rho(d, 1.0) - predicted_rho(d, 2.0)) > 0.1);
  d.y0 = d.y1 = 0.7;
  CHECK(horosphere_test(d));
}

TEST_CASE("reference patch has mu = 2 and eigenvalue 1") {
  const HypersurfacePatch p = build_psi(reference_data());
  CHECK(p.chart_dim() == 4);
  CHECK(p.param_names()[cko_lambda_index(2)] == "lambda");
  const ShapeReport rep = verify_axi2xi(p, p.grid(2));
  CHECK(rep.certified);
  CHECK(std::abs(rep.mu - 2.0) < 1e-4);

  ChartVector at = p.center();
  at[cko_lambda_index(2)] = 1.0;
  const RhoMeasurement m = measured_rho(p, at);
  CHECK(std::abs(m.rho - 0.6) < 1e-4);
  CHECK(m.alignment > 0.99);
  at[cko_lambda_index(2)] = 2.0;
  CHECK(std::abs(measured_rho(p, at).rho - 12.0 / 14.0) < 1e-4);
}

TEST_CASE("xi' is the horizontal h direction and A d_lambda = d_lambda") {
  const HypersurfacePatch p = build_psi(random_one_param(99));
  const int h = cko_lambda_index(2) - 1, lambda = cko_lambda_index(2);
  for (double frac : {0.25, 0.6}) {
    const ChartVector at = p.lower() + frac * (p.upper() - p.lower());
    const ChartDifferential d = chart_differential(p, at, 1e-5);
    CHECK((xi_lift(p, at) - d.horizontal[h - 1]).max_abs() < 1e-8);
    const IndefVector& dl = d.horizontal[lambda - 1];
    CHECK((d.shape[lambda - 1] - dl).max_abs() < 1e-5 * std::max(1.0, dl.max_abs()));
  }
}

TEST_CASE("random constants are admissible") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const OneParamData d = random_one_param(seed);
    CHECK_FALSE(one_param_degenerate(d));
    for (double lambda : {0.4, 1.0, 2.1}) CHECK(std::abs(rho_terms(d, lambda).second) >= 0.2);
    CHECK(d.base.residual() < 1e-10);
    const OneParamData e = random_one_param(seed, true);
    CHECK(horosphere_test(e));
  }
  CHECK(random_one_param(3).x == random_one_param(3).x);
}

TEST_CASE("construction rejects non-CKO and degenerate data") {
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 1) = 0.5;
  x(1, 0) = 0.5;
  x(2, 0) = 1.0;
  x(0, 2) = 1.0;
  CHECK_THROWS_AS(build_psi_generator(validate_algebra(x), GroupElement::identity(2)), ValidationError);

  OneParamData flat;
  flat.alpha0 = flat.alpha1 = flat.w = 1.0;
  flat.x = 0.5;
  CHECK_THROWS_AS(build_psi(flat), ImmersionError);

  CHECK_THROWS_AS(build_psi(random_form(3, 8, 0.0), GroupElement::identity(3)), ValidationError);
}

TEST_CASE("generator path agrees with the one-parameter path") {
  const OneParamData d = random_one_param(17);
  const HypersurfacePatch a = build_psi(d);
  const HypersurfacePatch b = build_psi_generator(d.omega(), d.base);
  for (const ChartVector& at : a.grid(2))
    CHECK((a.position_raw(at) - b.position_raw(at)).max_abs() < 1e-12);
}
