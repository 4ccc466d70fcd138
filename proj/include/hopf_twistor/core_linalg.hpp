#pragma once

// Linear algebra over C^{n+1} equipped with the signature (1,n) Hermitian
// form ((z,w)) = -z_0 conj(w_0) + sum_k z_k conj(w_k), the group U(1,n) of
// its isometries and the Lie algebra u(1,n).

#include <complex>
#include <initializer_list>

#include <Eigen/Dense>

#include "hopf_twistor/errors.hpp"

namespace hopf {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Default tolerance for structural membership (group, algebra, Stiefel).
inline constexpr double kStructuralTol = 1e-10;
/// Default tolerance for finite-difference geometric residuals.
inline constexpr double kGeometricTol = 1e-5;

/// A coordinate vector of C_1^{n+1}. Carries n explicitly so that vectors
/// of different ambient dimension never mix silently.
class IndefVector {
 public:
  /// Zero vector of C_1^{n+1}.
  explicit IndefVector(int dim_n);
  /// Takes ownership of n+1 coordinates; n = coords.size() - 1 >= 1.
  explicit IndefVector(CVector coords);
  IndefVector(std::initializer_list<cplx> coords);

  /// The standard basis vector e_k, 0 <= k <= n.
  static IndefVector basis(int dim_n, int k);

  int dim_n() const { return static_cast<int>(coords_.size()) - 1; }
  const CVector& coords() const { return coords_; }
  cplx operator[](int k) const { return coords_[k]; }

  /// Largest coordinate modulus; used for residuals.
  double max_abs() const;
  bool all_finite() const;

  IndefVector& operator+=(const IndefVector& other);
  IndefVector& operator-=(const IndefVector& other);
  IndefVector& operator*=(cplx s);

  friend IndefVector operator+(IndefVector a, const IndefVector& b) { return a += b; }
  friend IndefVector operator-(IndefVector a, const IndefVector& b) { return a -= b; }
  friend IndefVector operator-(IndefVector a) { return a *= -1.0; }
  friend IndefVector operator*(cplx s, IndefVector a) { return a *= s; }
  friend IndefVector operator*(IndefVector a, cplx s) { return a *= s; }
  friend IndefVector operator*(double s, IndefVector a) { return a *= cplx(s); }
  friend IndefVector operator/(IndefVector a, double s) { return a *= cplx(1.0 / s); }

 private:
  CVector coords_;
};

/// ((z,w)): linear in z, conjugate-linear in w.
cplx herm_form(const IndefVector& z, const IndefVector& w);

/// <z,w> = Re((z,w)).
double real_form(const IndefVector& z, const IndefVector& w);

/// An element of C_1^{n+1} x C_1^{n+1}.
struct VectorPair {
  IndefVector minus;
  IndefVector plus;
};

/// -<X-,Y-> + <X+,Y+>, the neutral-signature product on pairs.
double pair_form(const VectorPair& x, const VectorPair& y);

/// True iff |((w,w)) + 1| <= tol.
bool is_anti_de_sitter(const IndefVector& w, double tol = kStructuralTol);

/// S = diag(-1, 1, ..., 1).
class SignatureMatrix {
 public:
  explicit SignatureMatrix(int dim_n);
  int dim_n() const { return dim_n_; }
  CMatrix matrix() const;

 private:
  int dim_n_;
};

/// max |A* S A - S|.
double group_residual(const CMatrix& a);
/// max |X* S + S X|.
double algebra_residual(const CMatrix& x);

class AlgebraElement;

/// A validated element of U(1,n). Construct through validate_group or
/// matrix_exp.
class GroupElement {
 public:
  int dim_n() const { return static_cast<int>(matrix_.rows()) - 1; }
  const CMatrix& matrix() const { return matrix_; }
  double tol() const { return tol_; }
  double residual() const { return group_residual(matrix_); }

  static GroupElement identity(int dim_n);

  IndefVector operator*(const IndefVector& v) const;
  GroupElement operator*(const GroupElement& other) const;

 private:
  friend GroupElement validate_group(const CMatrix& a, double tol);
  friend GroupElement matrix_exp(const AlgebraElement& x, double t);
  GroupElement(CMatrix m, double tol) : matrix_(std::move(m)), tol_(tol) {}

  CMatrix matrix_;
  double tol_;
};

/// A validated element of u(1,n).
class AlgebraElement {
 public:
  int dim_n() const { return static_cast<int>(matrix_.rows()) - 1; }
  const CMatrix& matrix() const { return matrix_; }
  double tol() const { return tol_; }

 private:
  friend AlgebraElement validate_algebra(const CMatrix& x, double tol);
  AlgebraElement(CMatrix m, double tol) : matrix_(std::move(m)), tol_(tol) {}

  CMatrix matrix_;
  double tol_;
};

/// Throws ValidationError (carrying the residual) if A is not in U(1,n).
GroupElement validate_group(const CMatrix& a, double tol = kStructuralTol);
/// Throws ValidationError if X is not in u(1,n).
AlgebraElement validate_algebra(const CMatrix& x, double tol = kStructuralTol);

/// exp(tX) by scaling and squaring: the argument is halved until its
/// 1-norm is at most 0.5, a degree-18 Taylor polynomial is summed, and the
/// result squared back. The returned element carries tol =
/// max(kStructuralTol, measured residual), so it never fails validation on
/// roundoff alone; callers compare residual() against their own bound.
GroupElement matrix_exp(const AlgebraElement& x, double t);

/// Unvalidated core of matrix_exp, exposed for oracle comparisons.
CMatrix expm_scaling_squaring(const CMatrix& a);

}  // namespace hopf
