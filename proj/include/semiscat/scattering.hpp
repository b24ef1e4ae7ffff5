#pragma once

#include <cmath>
#include <functional>
#include <vector>
#include <limits>
#include <string>

#include "semiscat/core.hpp"

namespace semiscat {

enum class ProfileKind { barrier, quadratic_index, f_family, tabulated, custom };

std::string_view to_string(ProfileKind kind);

/// A complex, possibly wavenumber-dependent potential v(x; k).
///
/// Finite-range profiles vanish identically outside [support_lo, support_hi];
/// the endpoints themselves belong to the support. For infinite-range
/// profiles the support bounds only describe the region where v is
/// appreciable and are used to scale tail integrals.
class PotentialProfile {
 public:
  using Function = std::function<cdouble(double x, double k)>;

  PotentialProfile(ProfileKind kind, double support_lo, double support_hi,
                   Function fn, bool infinite_range = false);

  cdouble evaluate(double x, double k) const {
    if (!infinite_ && (x < lo_ || x > hi_)) return {0.0, 0.0};
    return fn_(x, k);
  }
  cdouble operator()(double x, double k) const { return evaluate(x, k); }

  ProfileKind kind() const { return kind_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  bool infinite_range() const { return infinite_; }

  /// Copy of this profile with its declared support widened by `pad` on both
  /// sides. The potential itself is unchanged; the old support edges become
  /// breakpoints.
  PotentialProfile padded(double pad) const;

  /// Interior points where v may jump.
  const std::vector<double>& breakpoints() const { return breaks_; }

 private:
  ProfileKind kind_;
  double lo_;
  double hi_;
  Function fn_;
  bool infinite_;
  std::vector<double> breaks_;
};

template <typename Scalar>
struct ScatteringAmplitudes {
  Complex<Scalar> T;
  Complex<Scalar> R_left;
  Complex<Scalar> R_right;
};

/// 2x2 transfer matrix. Entries are stored as computed; det M = 1 is a
/// property to check, never something this type enforces.
template <typename Scalar>
class TransferMatrix {
 public:
  using Matrix = Matrix2c<Scalar>;

  TransferMatrix() : m_(Matrix::Identity()) {}
  explicit TransferMatrix(const Matrix& m) : m_(m) {}
  TransferMatrix(Complex<Scalar> m11, Complex<Scalar> m12, Complex<Scalar> m21,
                 Complex<Scalar> m22) {
    m_ << m11, m12, m21, m22;
  }

  static TransferMatrix identity() { return TransferMatrix(); }

  const Matrix& matrix() const { return m_; }
  Complex<Scalar> operator()(int i, int j) const { return m_(i, j); }
  Complex<Scalar> m11() const { return m_(0, 0); }
  Complex<Scalar> m12() const { return m_(0, 1); }
  Complex<Scalar> m21() const { return m_(1, 0); }
  Complex<Scalar> m22() const { return m_(1, 1); }

  Complex<Scalar> det() const { return m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0); }

  bool is_unimodular(Scalar tol) const { return std::abs(det() - Scalar(1)) < tol; }

  TransferMatrix operator*(const TransferMatrix& rhs) const {
    return TransferMatrix(Matrix(m_ * rhs.m_));
  }

 private:
  Matrix m_;
};

using TransferMatrixd = TransferMatrix<double>;
using ScatteringAmplitudesd = ScatteringAmplitudes<double>;

/// Largest absolute entry-wise difference.
template <typename Scalar>
Scalar max_abs_diff(const TransferMatrix<Scalar>& a, const TransferMatrix<Scalar>& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
TransferMatrix<Scalar> transfer_from_amplitudes(const ScatteringAmplitudes<Scalar>& amps,
                                                Scalar epsilon = Scalar(kDefaultEpsilon)) {
  if (std::abs(amps.T) < epsilon)
    throw Error(ErrorCode::zero_transmission, "transmission amplitude vanishes");
  const auto& T = amps.T;
  return TransferMatrix<Scalar>(T - amps.R_left * amps.R_right / T, amps.R_right / T,
                                -amps.R_left / T, Complex<Scalar>(1) / T);
}

template <typename Scalar>
ScatteringAmplitudes<Scalar> amplitudes_from_transfer(const TransferMatrix<Scalar>& m,
                                                      Scalar epsilon = Scalar(kDefaultEpsilon)) {
  if (std::abs(m.m22()) < epsilon)
    throw Error(ErrorCode::singular_matrix, "transfer matrix has vanishing m22");
  return {Complex<Scalar>(1) / m.m22(), -m.m21() / m.m22(), m.m12() / m.m22()};
}

/// Free propagator U0(tau) = exp(i tau sigma_3).
template <typename Scalar>
Matrix2c<Scalar> free_propagator(Scalar tau) {
  Matrix2c<Scalar> u = Matrix2c<Scalar>::Zero();
  u(0, 0) = std::polar(Scalar(1), tau);
  u(1, 1) = std::polar(Scalar(1), -tau);
  return u;
}

/// Closed-form transfer matrix of a rectangular barrier of height `z` on
/// (0, L).
template <typename Scalar>
TransferMatrix<Scalar> barrier_transfer_matrix(Complex<Scalar> z, Scalar L, Scalar k,
                                               Scalar epsilon = Scalar(kDefaultEpsilon)) {
  if (!(k > 0) || !(L > 0))
    throw Error(ErrorCode::invalid_argument, "barrier requires k > 0 and L > 0");
  const Complex<Scalar> n = index_from_potential(z, k);
  if (std::abs(n) < epsilon)
    throw Error(ErrorCode::turning_point, "barrier height equals k^2");
  const Complex<Scalar> I(0, 1);
  const Complex<Scalar> c = std::cos(n * k * L);
  const Complex<Scalar> s = std::sin(n * k * L);
  const Complex<Scalar> em = std::polar(Scalar(1), -k * L);
  const Complex<Scalar> ep = std::polar(Scalar(1), k * L);
  const Complex<Scalar> diag = I * (n * n + Scalar(1)) * s / (Scalar(2) * n);
  const Complex<Scalar> off = I * (n * n - Scalar(1)) * s / (Scalar(2) * n);
  return TransferMatrix<Scalar>((c + diag) * em, off * em, -off * ep, (c - diag) * ep);
}

}  // namespace semiscat
