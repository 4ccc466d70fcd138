#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hopf_twistor/core_linalg.hpp"

using namespace hopf;

namespace {

CMatrix random_algebra(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
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
  return x * scale;
}

IndefVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = cplx(g(rng), g(rng));
  return IndefVector(c);
}

// Plain Taylor sum without scaling, long double accumulation.
CMatrix series_oracle(const CMatrix& a) {
  using LC = std::complex<long double>;
  const Eigen::Index d = a.rows();
  Eigen::Matrix<LC, Eigen::Dynamic, Eigen::Dynamic> al = a.cast<LC>();
  Eigen::Matrix<LC, Eigen::Dynamic, Eigen::Dynamic> term =
      Eigen::Matrix<LC, Eigen::Dynamic, Eigen::Dynamic>::Identity(d, d);
  Eigen::Matrix<LC, Eigen::Dynamic, Eigen::Dynamic> sum = term;
  for (int k = 1; k <= 80; ++k) {
    term = (term * al) / static_cast<long double>(k);
    sum += term;
  }
  CMatrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = cplx(static_cast<double>(sum(i, j).real()), static_cast<double>(sum(i, j).imag()));
  return out;
}

}  // namespace

TEST_CASE("herm_form on basis vectors") {
  const auto e0 = IndefVector::basis(2, 0), e1 = IndefVector::basis(2, 1);
  CHECK(herm_form(e0, e0) == cplx(-1.0, 0.0));
  CHECK(herm_form(e1, e1) == cplx(1.0, 0.0));
  CHECK(herm_form(e0, e1) == cplx(0.0, 0.0));
}

TEST_CASE("herm_form is sesquilinear and Hermitian") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto z = random_vector(3, rng), w = random_vector(3, rng);
    const cplx a(0.3, -1.2);
    CHECK(std::abs(herm_form(z, w) - std::conj(herm_form(w, z))) < 1e-13);
    CHECK(std::abs(herm_form(a * z, w) - a * herm_form(z, w)) < 1e-12);
    CHECK(std::abs(herm_form(z, a * w) - std::conj(a) * herm_form(z, w)) < 1e-12);
  }
}

TEST_CASE("herm_form rejects dimension mismatch") {
  CHECK_THROWS_AS(herm_form(IndefVector::basis(2, 0), IndefVector::basis(3, 0)), InputError);
  CHECK_THROWS_AS(real_form(IndefVector::basis(2, 0), IndefVector::basis(3, 0)), InputError);
}

TEST_CASE("real_form examples") {
  const auto e0 = IndefVector::basis(2, 0), e1 = IndefVector::basis(2, 1);
  CHECK(real_form(e0, e0) == -1.0);
  CHECK(real_form(kI * e1, e1) == 0.0);
  CHECK(real_form(kI * e0, kI * e0) == doctest::Approx(-1.0));
}

TEST_CASE("pair_form examples") {
  const auto e0 = IndefVector::basis(2, 0), e1 = IndefVector::basis(2, 1), z = IndefVector(2);
  CHECK(pair_form(VectorPair{e0, z}, VectorPair{e0, z}) == 1.0);
  CHECK(pair_form(VectorPair{z, e0}, VectorPair{z, e0}) == -1.0);
  CHECK(pair_form(VectorPair{e1, e1}, VectorPair{e1, e1}) == 0.0);
  CHECK_THROWS_AS(pair_form(VectorPair{e0, z}, VectorPair{IndefVector::basis(3, 0), IndefVector(3)}),
                  InputError);
}

TEST_CASE("is_anti_de_sitter") {
  CHECK(is_anti_de_sitter(IndefVector::basis(2, 0)));
  CHECK_FALSE(is_anti_de_sitter(IndefVector::basis(2, 1)));
  CHECK_FALSE(is_anti_de_sitter(std::sqrt(2.0) * IndefVector::basis(2, 0), 1e-12));
}

TEST_CASE("IndefVector shape checks") {
  CHECK_THROWS_AS(IndefVector(0), InputError);
  CHECK_THROWS_AS(IndefVector::basis(2, 3), InputError);
  CHECK_THROWS_AS(IndefVector({cplx(1.0, 0.0)}), InputError);
  CHECK(IndefVector(3).dim_n() == 3);
}

TEST_CASE("SignatureMatrix") {
  const CMatrix s = SignatureMatrix(3).matrix();
  CHECK((s * s - CMatrix::Identity(4, 4)).norm() == 0.0);
  CHECK(s(0, 0) == cplx(-1.0, 0.0));
  for (int k = 1; k <= 3; ++k) CHECK(s(k, k) == cplx(1.0, 0.0));
  CHECK_THROWS_AS(SignatureMatrix(0), InputError);
}

TEST_CASE("validate_group and validate_algebra examples") {
  CHECK_NOTHROW(validate_group(CMatrix::Identity(3, 3)));
  CHECK_NOTHROW(validate_algebra(kI * CMatrix::Identity(3, 3)));
  CMatrix bad = CMatrix::Zero(3, 3);
  bad(0, 0) = 1.0;
  try {
    validate_algebra(bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.residual() == doctest::Approx(2.0));
  }
  CMatrix not_group = CMatrix::Identity(3, 3) * 2.0;
  CHECK_THROWS_AS(validate_group(not_group), ValidationError);
  CMatrix nan = CMatrix::Identity(3, 3);
  nan(1, 1) = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(validate_group(nan), InputError);
  CHECK_THROWS_AS(validate_algebra(nan), InputError);
  CHECK_THROWS_AS(validate_group(CMatrix::Identity(2, 3)), InputError);
}

TEST_CASE("matrix_exp examples") {
  std::mt19937_64 rng(7);
  const AlgebraElement x = validate_algebra(random_algebra(2, rng, 1.0));
  CHECK((matrix_exp(x, 0.0).matrix() - CMatrix::Identity(3, 3)).norm() == 0.0);

  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = kI;
  const CMatrix e = matrix_exp(validate_algebra(d), std::numbers::pi).matrix();
  CMatrix want = CMatrix::Identity(3, 3);
  want(0, 0) = -1.0;
  CHECK((e - want).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(matrix_exp(x, std::nan("")), InputError);
}

TEST_CASE("matrix_exp against a high-order series oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_algebra(2, rng, 1.0);
    const GroupElement g = matrix_exp(validate_algebra(a), 1.0);
    CHECK((g.matrix() - series_oracle(a)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(g.residual() <= 1e-10);
  }
}

TEST_CASE("matrix_exp group law and derivative at 0") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const AlgebraElement x = validate_algebra(random_algebra(3, rng, 0.7));
    const double s = 0.4 + 0.1 * trial, t = -0.9 + 0.05 * trial;
    const CMatrix lhs = matrix_exp(x, s + t).matrix();
    const CMatrix rhs = (matrix_exp(x, s) * matrix_exp(x, t)).matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    const double h = 1e-5;
    const CMatrix deriv = (matrix_exp(x, h).matrix() - matrix_exp(x, -h).matrix()) / (2.0 * h);
    CHECK((deriv - x.matrix()).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("group elements are isometries of the Hermitian form") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupElement g = matrix_exp(validate_algebra(random_algebra(3, rng, 1.0)), 1.0);
    const auto z = random_vector(3, rng), w = random_vector(3, rng);
    CHECK(std::abs(herm_form(g * z, g * w) - herm_form(z, w)) < 1e-9);
  }
}

TEST_CASE("group and algebra residual helpers") {
  CHECK(group_residual(CMatrix::Identity(4, 4)) == 0.0);
  CHECK(algebra_residual(CMatrix::Zero(4, 4)) == 0.0);
  CHECK(GroupElement::identity(3).residual() == 0.0);
  CHECK_THROWS_AS(GroupElement::identity(2) * IndefVector::basis(3, 0), InputError);
  CHECK_THROWS_AS(GroupElement::identity(2) * GroupElement::identity(3), InputError);
}
