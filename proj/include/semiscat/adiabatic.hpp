#pragma once

#include <functional>

#include "semiscat/scattering.hpp"

namespace semiscat {

/// Instantaneous eigen-system of H = -sigma_3 + w N with the symmetric
/// normalisation: E = +-n, Psi = (1 -+ n, 1 +- n) / 2 and left eigenvectors
/// Phi = (n* -+ 1, n* +- 1) / (2 n*), biorthonormal to Psi.
template <typename Scalar>
struct EigenSystem {
  Complex<Scalar> index;
  Complex<Scalar> E_plus;
  Complex<Scalar> E_minus;
  Vector2c<Scalar> psi_plus;
  Vector2c<Scalar> psi_minus;
  Vector2c<Scalar> phi_plus;
  Vector2c<Scalar> phi_minus;
};

template <typename Scalar>
EigenSystem<Scalar> eigensystem(Complex<Scalar> w, Scalar epsilon = Scalar(kDefaultEpsilon)) {
  const Complex<Scalar> n = principal_sqrt(Complex<Scalar>(1) - Scalar(2) * w);
  if (std::abs(n) < epsilon)
    throw Error(ErrorCode::exceptional_point, "exceptional point: n vanishes (classical turning point)");
  const Complex<Scalar> one(1);
  const Complex<Scalar> nc = std::conj(n);
  EigenSystem<Scalar> es;
  es.index = n;
  es.E_plus = n;
  es.E_minus = -n;
  es.psi_plus << Scalar(0.5) * (one - n), Scalar(0.5) * (one + n);
  es.psi_minus << Scalar(0.5) * (one + n), Scalar(0.5) * (one - n);
  es.phi_plus << (nc - one) / (Scalar(2) * nc), (nc + one) / (Scalar(2) * nc);
  es.phi_minus << (nc + one) / (Scalar(2) * nc), (nc - one) / (Scalar(2) * nc);
  return es;
}

/// Dynamical and geometric phases accumulated between tau0 and tau.
struct PhaseRecord {
  cdouble delta_plus;
  cdouble delta_minus;
  cdouble gamma_plus;
  cdouble gamma_minus;
  double tau0;
  double tau;
};

struct SemiclassicalIngredients {
  cdouble n_minus;
  cdouble n_plus;
  cdouble a_plus;
  cdouble a_minus;
  cdouble b_plus;
  cdouble b_minus;
  cdouble delta;
  double tau_minus;
  double tau_plus;
};

/// Boundary-value coefficients a+-, b+- for given n-, n+ and action delta.
SemiclassicalIngredients make_ingredients(cdouble n_minus, cdouble n_plus, cdouble delta,
                                          double tau_minus, double tau_plus);

struct GridSpec {
  int samples = 1001;
};

/// n(tau) = sqrt(1 - v(tau / k; k) / k^2), principal branch.
cdouble index_at(const PotentialProfile& v, double k, double tau);

/// Integral of n(tau) over [tau0, tau1], split at the support edges.
cdouble integrate_index(const PotentialProfile& v, double k, double tau0, double tau1);

/// Samples n densely on [tau0, tau1]; throws turning_point if n vanishes and
/// branch_discontinuity if its phase jumps by more than pi/2 between samples.
void check_index_path(const PotentialProfile& v, double k, double tau0, double tau1,
                      int samples = 4096);

/// max |dn/dtau| / (4 |n|^2) over interior grid points of the support.
double adiabaticity_margin(const PotentialProfile& v, double k, GridSpec grid = {});

/// The same quantity in x-space: max |v'(x)| / (8 |k^2 - v(x)|^{3/2}).
double adiabaticity_margin_x(const PotentialProfile& v, double k, GridSpec grid = {});

PhaseRecord phases(const PotentialProfile& v, double k, double tau0, double tau1);

/// sum_a exp(i(delta_a + gamma_a)) |Psi_a(tau1)><Phi_a(tau0)|
Matrix2cd adiabatic_evolution_operator(const PotentialProfile& v, double k, double tau0,
                                       double tau1);

enum class WkbSign { minus, plus };

/// psi(x) = N0 [k^2 - v(x)]^{-1/4} exp(-+ i int_{x0}^{x} sqrt(k^2 - v)),
/// normalised so that psi(x0) = 1. `WkbSign::minus` selects exp(-i ...).
std::function<cdouble(double)> wkb_wavefunction(const PotentialProfile& v, double k, double x0,
                                                WkbSign sign);

SemiclassicalIngredients semiclassical_ingredients(const PotentialProfile& v, double k);

TransferMatrixd semiclassical_transfer(const SemiclassicalIngredients& ing);
TransferMatrixd semiclassical_transfer(const PotentialProfile& v, double k);

/// Semiclassical R^l, R^r and T. Written with cos(delta) cleared from the
/// denominators, so they stay finite where tan(delta) diverges. Throws
/// spectral_singularity when the shared denominator vanishes.
ScatteringAmplitudesd semiclassical_amplitudes(const SemiclassicalIngredients& ing,
                                               double epsilon = kDefaultEpsilon);
ScatteringAmplitudesd semiclassical_amplitudes(const PotentialProfile& v, double k,
                                               double epsilon = kDefaultEpsilon);

/// vartheta = int (sqrt(k^2 - v) - k) dx over the real line.
cdouble infinite_range_phase(const PotentialProfile& v, double k);

}  // namespace semiscat
