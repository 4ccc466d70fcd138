#pragma once

#include <stdexcept>
#include <string>

namespace hopf {

/// Base of every error raised by the library.
class HopfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, non-finite data, out-of-domain
/// parameters, vectors that are not tangent where tangency is required.
class InputError : public HopfError {
 public:
  using HopfError::HopfError;
};

/// A structural membership test failed (group, algebra, Stiefel, CKO
/// constraints). Carries the offending residual.
class ValidationError : public HopfError {
 public:
  ValidationError(const std::string& what, double residual)
      : HopfError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Degenerate configurations: zero radius for s=+, vanishing horizontal
/// speed, the exceptional case 2*lambda == mu, vanishing denominators.
class DegenerateError : public HopfError {
 public:
  using HopfError::HopfError;
};

/// The differential of a parametrization lost rank at a sampled point.
class ImmersionError : public HopfError {
 public:
  ImmersionError(const std::string& what, double min_singular_value)
      : HopfError(what), min_singular_value_(min_singular_value) {}
  double min_singular_value() const { return min_singular_value_; }

 private:
  double min_singular_value_;
};

}  // namespace hopf
