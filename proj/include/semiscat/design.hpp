#pragma once

#include <functional>
#include <string>
#include <vector>

#include "semiscat/adiabatic.hpp"
#include "semiscat/scattering.hpp"

namespace semiscat {

/// Side from which the configuration is reflectionless (or invisible).
enum class Side { left, right };

std::string_view to_string(Side side);

/// Boundary values n-+ and their polar parametrisation.
struct BoundaryIndexData {
  cdouble n_minus;
  cdouble n_plus;
  double eta_minus;
  double eta_plus;
  double kappa_minus;
  double kappa_plus;
  double r;  ///< |n- - 1/n-|
  double phi_minus;
  double phi_plus;
  int eps_minus;  ///< sgn(|n-| - 1)
  int eps_plus;

  /// True when either boundary index equals 1, which rules out one-sided
  /// reflectionlessness.
  bool degenerate(double tol = 1e-12) const;
};

BoundaryIndexData boundary_data(cdouble n_minus, cdouble n_plus);

/// |n| = sqrt(s + eps sqrt(s^2 - 1)) with s = cos(2 phi) + r^2 / 2.
double modulus_from_polar(double r, double phi, int eps);

/// Rebuilds n-+ from (r, phi-+, eps-+). Requires cos(2 phi) + r^2/2 >= 1 on
/// both sides; throws constraint_violation otherwise.
BoundaryIndexData boundary_from_polar(double r, double phi_minus, double phi_plus, int eps_minus,
                                      int eps_plus);

/// e^{2 i delta} - [(n- - 1)(n+ + 1)] / [(n- + 1)(n+ - 1)] for Side::left; the
/// right-side variant uses the reciprocal ratio. Zero certifies semiclassical
/// reflectionlessness from that side.
cdouble reflectionless_residual(cdouble n_minus, cdouble n_plus, cdouble delta, Side side = Side::left);
cdouble reflectionless_residual(const SemiclassicalIngredients& ing, Side side = Side::left);

/// Action delta (mode `mode_n`) that makes the given boundary values
/// reflectionless from `side`.
cdouble reflectionless_action(cdouble n_minus, cdouble n_plus, int mode_n, Side side = Side::left);

struct ReflectionlessPrediction {
  cdouble R;  ///< reflection from the other side: R^r for Side::left
  cdouble T;  ///< principal square root; the overall sign is not fixed by boundary data
  bool bidirectional;  ///< R vanishes as well
};

/// Reflection and transmission implied by one-sided reflectionlessness. They
/// depend on the boundary values and support edges only.
ReflectionlessPrediction reflectionless_predictions(cdouble n_minus, cdouble n_plus, double tau_minus,
                                                    double tau_plus, Side side = Side::left);

/// kL = pi m + arg[(n- - 1/n-) / (n+ - 1/n+)] / 2 (reciprocal ratio for the
/// right side). Throws modulus_mismatch unless |n- - 1/n-| = |n+ - 1/n+| to
/// relative `rel_tol`.
double invisibility_wavenumbers(cdouble n_minus, cdouble n_plus, int mode_m, Side side = Side::left,
                                double rel_tol = 1e-8);

/// Index n(tau) = [n- (kL - tau) f(tau) + n+ tau f(kL - tau)] / kL on [0, kL].
struct FProfile {
  std::function<cdouble(double tau)> f;
  cdouble n_minus;
  cdouble n_plus;
  double kL;

  cdouble index(double tau) const;
};

/// (1/kL) int_0^kL F with F(tau) = int_0^tau f.
cdouble f_family_moment(const FProfile& profile);

/// delta = (n- + n+) * f_family_moment(profile).
cdouble f_family_delta(const FProfile& profile);

/// The optical medium with index profile.index(x kL / L) on [0, L].
PotentialProfile f_family_potential(const FProfile& profile, double L);

/// Optical boundary data with |kappa| much smaller than eta.
struct OpticalParams {
  double eta;
  double kappa_minus;
  double kappa_plus;
  double xi;
  double chi_minus;
  double chi_plus;
  double kappa_bar;
  double kappa;
  double L;

  static OpticalParams make(double eta, double kappa_minus, double kappa_plus, double L,
                            double kappa_ratio_limit = 1e-2);

  cdouble n_minus() const { return {eta, kappa_minus}; }
  cdouble n_plus() const { return {eta, kappa_plus}; }
};

struct DesignSolution {
  double kL = 0;
  double L = 0;
  double lambda = 0;  ///< 2 pi L / kL, same unit as L
  cdouble shape_param;
  int mode_m = 0;
  int mode_n = 0;
  cdouble n_minus;
  cdouble n_plus;
  cdouble predicted_Rr;     ///< reflection from the reflecting side, from boundary data
  double predicted_Rr_abs = 0;  ///< small-kappa estimate of |R^r| (optical designer only)
  cdouble predicted_T;      ///< transmission implied by boundary data
  cdouble semiclassical_T;  ///< full semiclassical transmission at the design point
  cdouble residual;         ///< reflectionless residual at the design point
  Side side = Side::left;
  std::vector<std::string> warnings;
};

/// n(x^) = n- (1 - x^) + n+ x^ + a (n- + n+) x^ (1 - x^) on x^ in [0, 1].
struct QuadraticIndex {
  cdouble n_minus;
  cdouble n_plus;
  cdouble shape;

  cdouble operator()(double x_hat) const {
    return n_minus * (1.0 - x_hat) + n_plus * x_hat + shape * (n_minus + n_plus) * x_hat * (1.0 - x_hat);
  }
};

/// Closed-form optical-regime design for the quadratic index: kL from the
/// linearised invisibility condition, shape parameter by eliminating kL.
DesignSolution quadratic_designer(const OpticalParams& optical, int mode_m, int mode_n);

/// PT-symmetric quadratic design (n- = n+*, real shape parameter).
DesignSolution pt_designer(double eta_plus, double kappa_plus, int m1, int m2, double L);

/// Quadratic design from the unlinearised conditions. Requires
/// |n- - 1/n-| = |n+ - 1/n+|.
DesignSolution exact_quadratic_designer(cdouble n_minus, cdouble n_plus, int mode_m, int mode_n, double L,
                                        Side side = Side::left);

QuadraticIndex quadratic_index(const DesignSolution& solution, const OpticalParams& optical);

/// v(x; k) = k^2 [1 - n(x / L)^2] on [0, L].
PotentialProfile emit_quadratic_profile(const DesignSolution& solution, const OpticalParams& optical);
PotentialProfile quadratic_profile(const QuadraticIndex& index, double L);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 100;
};

/// Solves (n- + n+) F(kL; p) = delta_target for the complex parameter p of a
/// one-parameter f-family by damped Newton iteration. `family(p, tau)` must
/// satisfy family(p, 0) = 1 and be holomorphic in p.
cdouble solve_f_family_parameter(const std::function<cdouble(cdouble p, double tau)>& family,
                                 cdouble n_minus, cdouble n_plus, double kL, cdouble delta_target,
                                 cdouble initial, NewtonOptions options = {});

/// Wavenumbers in [k_min, k_max] where `v` is semiclassically reflectionless
/// from `side`, located by tracking the phase of e^{2 i delta} against the
/// boundary ratio. Only roots with |residual| < accept_tol are returned.
std::vector<double> reflectionless_wavenumbers(const PotentialProfile& v, double k_min, double k_max,
                                               int samples, Side side = Side::left,
                                               double accept_tol = 1e-8);

}  // namespace semiscat
