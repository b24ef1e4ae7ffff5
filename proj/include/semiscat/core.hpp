#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace semiscat {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Vector2c = Eigen::Matrix<Complex<Scalar>, 2, 1>;

using cdouble = Complex<double>;
using Matrix2cd = Matrix2c<double>;
using Vector2cd = Vector2c<double>;

/// Guard for singular denominators. Not a physics threshold.
inline constexpr double kDefaultEpsilon = 1e-12;

enum class ErrorCode {
  invalid_argument,
  zero_transmission,
  singular_matrix,
  turning_point,
  exceptional_point,
  step_size,
  non_finite,
  infinite_range,
  branch_discontinuity,
  divergent_integral,
  quadrature_failure,
  spectral_singularity,
  degenerate_boundary,
  modulus_mismatch,
  constraint_violation,
  no_convergence,
  non_unimodular,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::zero_transmission: return "zero_transmission";
    case ErrorCode::singular_matrix: return "singular_matrix";
    case ErrorCode::turning_point: return "turning_point";
    case ErrorCode::exceptional_point: return "exceptional_point";
    case ErrorCode::step_size: return "step_size";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::infinite_range: return "infinite_range";
    case ErrorCode::branch_discontinuity: return "branch_discontinuity";
    case ErrorCode::divergent_integral: return "divergent_integral";
    case ErrorCode::quadrature_failure: return "quadrature_failure";
    case ErrorCode::spectral_singularity: return "spectral_singularity";
    case ErrorCode::degenerate_boundary: return "degenerate_boundary";
    case ErrorCode::modulus_mismatch: return "modulus_mismatch";
    case ErrorCode::constraint_violation: return "constraint_violation";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::non_unimodular: return "non_unimodular";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Principal square root with the optical convention: Re >= 0, and Im >= 0
/// when Re == 0.
template <typename Scalar>
Complex<Scalar> principal_sqrt(const Complex<Scalar>& z) {
  Complex<Scalar> r = std::sqrt(z);
  if (r.real() == Scalar(0) && r.imag() < Scalar(0)) r = -r;
  return r;
}

/// Refractive index n = sqrt(1 - v/k^2) on the principal branch.
template <typename Scalar>
Complex<Scalar> index_from_potential(const Complex<Scalar>& v, Scalar k) {
  return principal_sqrt(Complex<Scalar>(1) - v / (k * k));
}

template <typename Scalar>
bool is_finite(const Complex<Scalar>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace semiscat
