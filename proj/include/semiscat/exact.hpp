#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "semiscat/scattering.hpp"

namespace semiscat {

/// H(tau) = -sigma_3 + w(tau) N with N = [[1, 1], [-1, -1]] and
/// w(tau) = v(tau / k; k) / (2 k^2). Traceless for every tau.
class TwoLevelHamiltonian {
 public:
  using Coupling = std::function<cdouble(double tau)>;

  TwoLevelHamiltonian(const PotentialProfile& v, double k);

  /// Direct construction from a coupling w(tau) that vanishes outside
  /// [tau_lo, tau_hi], with optional interior jump points.
  TwoLevelHamiltonian(Coupling w, double tau_lo, double tau_hi, std::vector<double> breakpoints = {});

  cdouble coupling(double tau) const {
    if (tau < tau_lo_ || tau > tau_hi_) return {0.0, 0.0};
    return w_(tau);
  }
  Matrix2cd operator()(double tau) const { return assemble(coupling(tau)); }

  double tau_lo() const { return tau_lo_; }
  double tau_hi() const { return tau_hi_; }
  const std::vector<double>& breakpoints() const { return breaks_; }

  static Matrix2cd assemble(cdouble w) {
    Matrix2cd h;
    h << w - 1.0, w, -w, 1.0 - w;
    return h;
  }

 private:
  Coupling w_;
  double tau_lo_;
  double tau_hi_;
  std::vector<double> breaks_;
};

/// Evolution operator U(tau1, tau0) of i dPsi/dtau = H Psi, by classical
/// fixed-step RK4. The interval is cut at the Hamiltonian's breakpoints and
/// each piece is split into ceil(length / step) equal steps, so endpoints and
/// jumps are hit exactly. Couplings at a breakpoint are one-sided limits.
Matrix2cd evolve(const TwoLevelHamiltonian& h, double tau0, double tau1, double step);

/// (tau+ - tau-) / 1e6, capped at 1e-3.
double default_step(double tau_lo, double tau_hi);

/// M = U0(tau+)^-1 U(tau+, tau-) U0(tau-) for a finite-range profile.
TransferMatrixd exact_transfer_matrix(const PotentialProfile& v, double k,
                                      std::optional<double> step = std::nullopt);

/// exact_transfer_matrix over a wavenumber grid. Work is split across
/// threads; each entry is computed exactly as in the serial call.
std::vector<TransferMatrixd> exact_transfer_matrices(const PotentialProfile& v,
                                                     std::span<const double> ks,
                                                     std::optional<double> step = std::nullopt,
                                                     unsigned threads = 0);

}  // namespace semiscat
