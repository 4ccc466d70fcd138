#include "hopf_twistor/core_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hopf {

namespace {

void require_same_dim(const IndefVector& z, const IndefVector& w, const char* op) {
  if (z.dim_n() != w.dim_n()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (n=" << z.dim_n() << " vs n=" << w.dim_n() << ")";
    throw InputError(msg.str());
  }
}

void require_square(const CMatrix& a, const char* op) {
  if (a.rows() != a.cols() || a.rows() < 2) {
    std::ostringstream msg;
    msg << op << ": expected a square matrix of size n+1 >= 2, got " << a.rows() << "x" << a.cols();
    throw InputError(msg.str());
  }
}

// Applies S from the left without forming it.
CMatrix signature_left(const CMatrix& a) {
  CMatrix out = a;
  out.row(0) *= -1.0;
  return out;
}

}  // namespace

IndefVector::IndefVector(int dim_n) {
  if (dim_n < 1) throw InputError("IndefVector: dim_n must be positive");
  coords_ = CVector::Zero(dim_n + 1);
}

IndefVector::IndefVector(CVector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw InputError("IndefVector: need at least 2 coordinates");
}

IndefVector::IndefVector(std::initializer_list<cplx> coords) {
  if (coords.size() < 2) throw InputError("IndefVector: need at least 2 coordinates");
  coords_.resize(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index k = 0;
  for (const cplx& c : coords) coords_[k++] = c;
}

IndefVector IndefVector::basis(int dim_n, int k) {
  IndefVector v(dim_n);
  if (k < 0 || k > dim_n) throw InputError("IndefVector::basis: index out of range");
  v.coords_[k] = 1.0;
  return v;
}

double IndefVector::max_abs() const {
  return coords_.size() == 0 ? 0.0 : coords_.cwiseAbs().maxCoeff();
}

bool IndefVector::all_finite() const {
  return coords_.allFinite();
}

IndefVector& IndefVector::operator+=(const IndefVector& other) {
  require_same_dim(*this, other, "IndefVector::operator+");
  coords_ += other.coords_;
  return *this;
}

IndefVector& IndefVector::operator-=(const IndefVector& other) {
  require_same_dim(*this, other, "IndefVector::operator-");
  coords_ -= other.coords_;
  return *this;
}

IndefVector& IndefVector::operator*=(cplx s) {
  coords_ *= s;
  return *this;
}

cplx herm_form(const IndefVector& z, const IndefVector& w) {
  require_same_dim(z, w, "herm_form");
  const CVector& a = z.coords();
  const CVector& b = w.coords();
  cplx sum = -a[0] * std::conj(b[0]);
  for (Eigen::Index k = 1; k < a.size(); ++k) sum += a[k] * std::conj(b[k]);
  return sum;
}

double real_form(const IndefVector& z, const IndefVector& w) {
  return herm_form(z, w).real();
}

double pair_form(const VectorPair& x, const VectorPair& y) {
  return -real_form(x.minus, y.minus) + real_form(x.plus, y.plus);
}

bool is_anti_de_sitter(const IndefVector& w, double tol) {
  return std::abs(herm_form(w, w) + 1.0) <= tol;
}

SignatureMatrix::SignatureMatrix(int dim_n) : dim_n_(dim_n) {
  if (dim_n < 1) throw InputError("SignatureMatrix: dim_n must be positive");
}

CMatrix SignatureMatrix::matrix() const {
  CMatrix s = CMatrix::Identity(dim_n_ + 1, dim_n_ + 1);
  s(0, 0) = -1.0;
  return s;
}

double group_residual(const CMatrix& a) {
  require_square(a, "group_residual");
  const CMatrix s = SignatureMatrix(static_cast<int>(a.rows()) - 1).matrix();
  return (a.adjoint() * signature_left(a) - s).cwiseAbs().maxCoeff();
}

double algebra_residual(const CMatrix& x) {
  require_square(x, "algebra_residual");
  const CMatrix sx = signature_left(x);
  return (sx.adjoint() + sx).cwiseAbs().maxCoeff();
}

GroupElement GroupElement::identity(int dim_n) {
  return GroupElement(CMatrix::Identity(dim_n + 1, dim_n + 1), kStructuralTol);
}

IndefVector GroupElement::operator*(const IndefVector& v) const {
  if (v.dim_n() != dim_n()) throw InputError("GroupElement * IndefVector: dimension mismatch");
  return IndefVector(CVector(matrix_ * v.coords()));
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (other.dim_n() != dim_n()) throw InputError("GroupElement product: dimension mismatch");
  CMatrix prod = matrix_ * other.matrix_;
  const double tol = std::max({tol_, other.tol_, group_residual(prod)});
  return GroupElement(std::move(prod), tol);
}

GroupElement validate_group(const CMatrix& a, double tol) {
  require_square(a, "validate_group");
  if (!a.allFinite()) throw InputError("validate_group: non-finite entries");
  const double res = group_residual(a);
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not in U(1,n): max|A*SA - S| = " << res << " > " << tol;
    throw ValidationError(msg.str(), res);
  }
  return GroupElement(a, tol);
}

AlgebraElement validate_algebra(const CMatrix& x, double tol) {
  require_square(x, "validate_algebra");
  if (!x.allFinite()) throw InputError("validate_algebra: non-finite entries");
  const double res = algebra_residual(x);
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not in u(1,n): max|X*S + SX| = " << res << " > " << tol;
    throw ValidationError(msg.str(), res);
  }
  return AlgebraElement(x, tol);
}

CMatrix expm_scaling_squaring(const CMatrix& a) {
  require_square(a, "expm_scaling_squaring");
  if (!a.allFinite()) throw InputError("matrix_exp: non-finite entries");
  constexpr int kOrder = 18;
  constexpr double kScaleTarget = 0.5;

  // 1-norm: largest absolute column sum.
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kScaleTarget) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kScaleTarget)));
    while (std::ldexp(norm1, -squarings) > kScaleTarget) ++squarings;
  }
  const CMatrix scaled = a * std::ldexp(1.0, -squarings);

  const Eigen::Index dim = a.rows();
  CMatrix result = CMatrix::Identity(dim, dim);
  CMatrix term = CMatrix::Identity(dim, dim);
  for (int k = 1; k <= kOrder; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = (result * result).eval();
  return result;
}

GroupElement matrix_exp(const AlgebraElement& x, double t) {
  if (!std::isfinite(t)) throw InputError("matrix_exp: non-finite parameter t");
  CMatrix e = expm_scaling_squaring(x.matrix() * t);
  const double tol = std::max(kStructuralTol, group_residual(e));
  return GroupElement(std::move(e), tol);
}

}  // namespace hopf
