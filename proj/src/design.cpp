#include "semiscat/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "semiscat/profiles.hpp"
#include "semiscat/quadrature.hpp"

namespace semiscat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cdouble kI{0.0, 1.0};

int sign_of(double x, double tol) {
  if (x > tol) return 1;
  if (x < -tol) return -1;
  return 0;
}

cdouble left_ratio(cdouble nm, cdouble np) {
  return ((nm - 1.0) * (np + 1.0)) / ((nm + 1.0) * (np - 1.0));
}

cdouble boundary_ratio(cdouble nm, cdouble np, Side side) {
  if (std::abs(nm - 1.0) < kDefaultEpsilon || std::abs(np - 1.0) < kDefaultEpsilon)
    throw Error(ErrorCode::degenerate_boundary, "boundary index equals 1");
  if (std::abs(nm + 1.0) < kDefaultEpsilon || std::abs(np + 1.0) < kDefaultEpsilon)
    throw Error(ErrorCode::degenerate_boundary, "boundary index equals -1");
  const cdouble r = left_ratio(nm, np);
  return side == Side::left ? r : 1.0 / r;
}

cdouble n_minus_inverse(cdouble n) { return n - 1.0 / n; }

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

// Fills the boundary-data predictions and semiclassical checks of a design.
void evaluate_design(DesignSolution& sol) {
  const auto pred = reflectionless_predictions(sol.n_minus, sol.n_plus, 0.0, sol.kL, sol.side);
  sol.predicted_Rr = pred.R;
  sol.predicted_T = pred.T;
  const cdouble delta = (sol.n_minus + sol.n_plus) * (3.0 + sol.shape_param) * sol.kL / 6.0;
  const auto ing = make_ingredients(sol.n_minus, sol.n_plus, delta, 0.0, sol.kL);
  sol.residual = reflectionless_residual(ing, sol.side);
  try {
    sol.semiclassical_T = semiclassical_amplitudes(ing).T;
  } catch (const Error&) {
    sol.semiclassical_T = {std::nan(""), std::nan("")};
    sol.warnings.emplace_back("semiclassical spectral singularity at the design point");
  }
  if (is_finite(sol.semiclassical_T) && sol.semiclassical_T.real() < 0.0)
    sol.warnings.emplace_back("transmission phase is pi (T = -1); change the parity of the mode pair for T = +1");
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::left ? "left" : "right"; }

bool BoundaryIndexData::degenerate(double tol) const {
  return std::abs(n_minus - 1.0) < tol || std::abs(n_plus - 1.0) < tol;
}

BoundaryIndexData boundary_data(cdouble n_minus, cdouble n_plus) {
  BoundaryIndexData d;
  d.n_minus = n_minus;
  d.n_plus = n_plus;
  d.eta_minus = n_minus.real();
  d.eta_plus = n_plus.real();
  d.kappa_minus = n_minus.imag();
  d.kappa_plus = n_plus.imag();
  d.r = std::abs(n_minus_inverse(n_minus));
  d.phi_minus = std::arg(n_minus);
  d.phi_plus = std::arg(n_plus);
  d.eps_minus = sign_of(std::abs(n_minus) - 1.0, 1e-14);
  d.eps_plus = sign_of(std::abs(n_plus) - 1.0, 1e-14);
  return d;
}

double modulus_from_polar(double r, double phi, int eps) {
  if (eps < -1 || eps > 1) throw Error(ErrorCode::invalid_argument, "sign flag must be -1, 0 or +1");
  const double s = std::cos(2.0 * phi) + 0.5 * r * r;
  if (s < 1.0 - 1e-14)
    throw Error(ErrorCode::constraint_violation, "cos(2 phi) + r^2/2 >= 1 is violated");
  const double disc = std::sqrt(std::max(0.0, s * s - 1.0));
  return std::sqrt(s + double(eps) * disc);
}

BoundaryIndexData boundary_from_polar(double r, double phi_minus, double phi_plus, int eps_minus,
                                      int eps_plus) {
  if (r < 0) throw Error(ErrorCode::invalid_argument, "r must be non-negative");
  const double am = modulus_from_polar(r, phi_minus, eps_minus);
  const double ap = modulus_from_polar(r, phi_plus, eps_plus);
  BoundaryIndexData d = boundary_data(std::polar(am, phi_minus), std::polar(ap, phi_plus));
  d.r = r;
  d.phi_minus = phi_minus;
  d.phi_plus = phi_plus;
  d.eps_minus = eps_minus;
  d.eps_plus = eps_plus;
  return d;
}

cdouble reflectionless_residual(cdouble n_minus, cdouble n_plus, cdouble delta, Side side) {
  return std::exp(2.0 * kI * delta) - boundary_ratio(n_minus, n_plus, side);
}

cdouble reflectionless_residual(const SemiclassicalIngredients& ing, Side side) {
  return reflectionless_residual(ing.n_minus, ing.n_plus, ing.delta, side);
}

cdouble reflectionless_action(cdouble n_minus, cdouble n_plus, int mode_n, Side side) {
  return kPi * double(mode_n) - 0.5 * kI * std::log(boundary_ratio(n_minus, n_plus, side));
}

ReflectionlessPrediction reflectionless_predictions(cdouble n_minus, cdouble n_plus, double tau_minus,
                                                    double tau_plus, Side side) {
  const cdouble nm = n_minus, np = n_plus;
  const cdouble zm = n_minus_inverse(nm), zp = n_minus_inverse(np);
  ReflectionlessPrediction p;
  p.bidirectional = std::abs(nm - np) < kDefaultEpsilon || std::abs(nm * np - 1.0) < kDefaultEpsilon;
  const cdouble common = (nm - np) * (nm * np - 1.0);
  if (side == Side::left) {
    if (std::abs(np * np - 1.0) < kDefaultEpsilon)
      throw Error(ErrorCode::degenerate_boundary, "n+ = +-1");
    p.R = common * std::polar(1.0, -2.0 * tau_plus) / (nm * (np * np - 1.0));
    p.T = std::polar(1.0, -(tau_plus - tau_minus)) * principal_sqrt(zm / zp);
  } else {
    if (std::abs(nm * nm - 1.0) < kDefaultEpsilon)
      throw Error(ErrorCode::degenerate_boundary, "n- = +-1");
    p.R = -common * std::polar(1.0, 2.0 * tau_minus) / (np * (nm * nm - 1.0));
    p.T = std::polar(1.0, -(tau_plus - tau_minus)) * principal_sqrt(zp / zm);
  }
  return p;
}

double invisibility_wavenumbers(cdouble n_minus, cdouble n_plus, int mode_m, Side side, double rel_tol) {
  const cdouble zm = n_minus_inverse(n_minus), zp = n_minus_inverse(n_plus);
  const double am = std::abs(zm), ap = std::abs(zp);
  if (am < kDefaultEpsilon || ap < kDefaultEpsilon)
    throw Error(ErrorCode::modulus_mismatch, "|n - 1/n| vanishes at a boundary");
  if (std::abs(am - ap) > rel_tol * std::max(am, ap))
    throw Error(ErrorCode::modulus_mismatch,
                "|n- - 1/n-| != |n+ - 1/n+|: boundary values cannot support invisibility");
  const cdouble ratio = side == Side::left ? zm / zp : zp / zm;
  const double kL = kPi * double(mode_m) + 0.5 * std::arg(ratio);
  if (!(kL > 0)) throw Error(ErrorCode::invalid_argument, "mode number gives non-positive kL");
  return kL;
}

cdouble FProfile::index(double tau) const {
  if (tau < 0.0 || tau > kL) return {1.0, 0.0};
  return (n_minus * (kL - tau) * f(tau) + n_plus * tau * f(kL - tau)) / kL;
}

cdouble f_family_moment(const FProfile& profile) {
  if (!(profile.kL > 0)) throw Error(ErrorCode::invalid_argument, "kL must be positive");
  // int_0^kL F = int_0^kL (kL - t) f(t) dt
  const double kL = profile.kL;
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  const cdouble inner = integrate([&](double t) { return (kL - t) * profile.f(t); }, 0.0, kL, opts);
  return inner / kL;
}

cdouble f_family_delta(const FProfile& profile) {
  return (profile.n_minus + profile.n_plus) * f_family_moment(profile);
}

PotentialProfile f_family_potential(const FProfile& profile, double L) {
  if (!(L > 0)) throw Error(ErrorCode::invalid_argument, "L must be positive");
  const double scale = profile.kL / L;
  return index_profile(ProfileKind::f_family, 0.0, L,
                       [profile, scale, L](double x) { return profile.index(x == L ? profile.kL : x * scale); });
}

OpticalParams OpticalParams::make(double eta, double kappa_minus, double kappa_plus, double L,
                                  double kappa_ratio_limit) {
  if (!(eta > 1.0)) throw Error(ErrorCode::constraint_violation, "optical regime needs eta > 1");
  if (!(L > 0)) throw Error(ErrorCode::invalid_argument, "L must be positive");
  if (std::abs(kappa_minus) >= kappa_ratio_limit * eta || std::abs(kappa_plus) >= kappa_ratio_limit * eta)
    throw Error(ErrorCode::constraint_violation, "optical regime needs |kappa| << eta");
  OpticalParams p;
  p.eta = eta;
  p.kappa_minus = kappa_minus;
  p.kappa_plus = kappa_plus;
  const double g = eta * eta - 1.0;
  p.xi = 2.0 * (kappa_minus - kappa_plus) / g;
  p.chi_minus = kappa_minus / g;
  p.chi_plus = kappa_plus / g;
  p.kappa_bar = 0.5 * (kappa_plus + kappa_minus);
  p.kappa = kappa_plus - kappa_minus;
  p.L = L;
  return p;
}

DesignSolution quadratic_designer(const OpticalParams& o, int mode_m, int mode_n) {
  const double eta = o.eta, xi = o.xi;
  DesignSolution sol;
  sol.mode_m = mode_m;
  sol.mode_n = mode_n;
  sol.side = Side::left;
  sol.L = o.L;
  sol.n_minus = o.n_minus();
  sol.n_plus = o.n_plus();
  sol.kL = kPi * double(mode_m) + (eta * eta + 1.0) * xi / (4.0 * eta);
  if (!(sol.kL > 0)) throw Error(ErrorCode::invalid_argument, "mode number gives non-positive kL");
  const cdouble numerator = 4.0 * kPi * double(mode_n) + 2.0 * std::atan(xi) - kI * std::log(1.0 + xi * xi);
  const double denominator = 4.0 * kPi * double(mode_m) * eta + (eta * eta + 1.0) * xi;
  sol.shape_param = 3.0 * (numerator / denominator - 1.0);
  sol.lambda = 2.0 * kPi * o.L / sol.kL;

  const double chi_sum = o.chi_plus + o.chi_minus;
  const double chi_skew = 2.0 * o.chi_plus + o.chi_minus;
  const double inv_eta2 = 1.0 / (eta * eta);
  sol.predicted_Rr_abs = 0.5 * (eta * eta - 1.0) * std::abs(xi) *
                         std::sqrt((inv_eta2 + chi_sum * chi_sum) / (inv_eta2 + chi_skew * chi_skew));

  const double ratio = double(mode_n) / (double(mode_m) * eta);
  if (ratio < 2.0 / 3.0 || ratio > 4.0 / 3.0)
    sol.warnings.emplace_back("mode pair outside 2m eta/3 <= n <= 4m eta/3; |a| may exceed 1");
  const double chi_max = std::max(std::abs(o.chi_minus), std::abs(o.chi_plus));
  if (chi_max > 0.1)
    sol.warnings.emplace_back("small-kappa linearisation is inaccurate: max |chi| = " + format_double(chi_max));
  evaluate_design(sol);
  return sol;
}

DesignSolution pt_designer(double eta_plus, double kappa_plus, int m1, int m2, double L) {
  if (!(eta_plus > 0)) throw Error(ErrorCode::invalid_argument, "eta+ must be positive");
  if (!(L > 0)) throw Error(ErrorCode::invalid_argument, "L must be positive");
  const double g = eta_plus * eta_plus - 1.0;
  if (std::abs(g) < kDefaultEpsilon) throw Error(ErrorCode::degenerate_boundary, "eta+ = 1");
  DesignSolution sol;
  sol.mode_m = m2;
  sol.mode_n = m1;
  sol.side = Side::left;
  sol.L = L;
  sol.n_minus = {eta_plus, -kappa_plus};
  sol.n_plus = {eta_plus, kappa_plus};
  sol.kL = kPi * double(m2) - std::atan((eta_plus * eta_plus + 1.0) * kappa_plus / (g * eta_plus));
  if (!(sol.kL > 0)) throw Error(ErrorCode::invalid_argument, "mode number gives non-positive kL");
  const double a = 3.0 / (eta_plus * sol.kL) *
                       (kPi * double(m1) - std::atan(2.0 * kappa_plus / (g + kappa_plus * kappa_plus))) -
                   3.0;
  sol.shape_param = {a, 0.0};
  sol.lambda = 2.0 * kPi * L / sol.kL;
  evaluate_design(sol);
  sol.predicted_Rr_abs = std::abs(sol.predicted_Rr);
  return sol;
}

DesignSolution exact_quadratic_designer(cdouble n_minus, cdouble n_plus, int mode_m, int mode_n, double L,
                                        Side side) {
  if (!(L > 0)) throw Error(ErrorCode::invalid_argument, "L must be positive");
  DesignSolution sol;
  sol.mode_m = mode_m;
  sol.mode_n = mode_n;
  sol.side = side;
  sol.L = L;
  sol.n_minus = n_minus;
  sol.n_plus = n_plus;
  sol.kL = invisibility_wavenumbers(n_minus, n_plus, mode_m, side);
  const cdouble delta = reflectionless_action(n_minus, n_plus, mode_n, side);
  sol.shape_param = 6.0 * delta / ((n_minus + n_plus) * sol.kL) - 3.0;
  sol.lambda = 2.0 * kPi * L / sol.kL;
  evaluate_design(sol);
  sol.predicted_Rr_abs = std::abs(sol.predicted_Rr);
  return sol;
}

QuadraticIndex quadratic_index(const DesignSolution& solution, const OpticalParams& optical) {
  return {optical.n_minus(), optical.n_plus(), solution.shape_param};
}

PotentialProfile quadratic_profile(const QuadraticIndex& index, double L) {
  if (!(L > 0)) throw Error(ErrorCode::invalid_argument, "L must be positive");
  return index_profile(ProfileKind::quadratic_index, 0.0, L,
                       [index, L](double x) { return index(x == L ? 1.0 : x / L); });
}

PotentialProfile emit_quadratic_profile(const DesignSolution& solution, const OpticalParams& optical) {
  return quadratic_profile(quadratic_index(solution, optical), optical.L);
}

cdouble solve_f_family_parameter(const std::function<cdouble(cdouble, double)>& family, cdouble n_minus,
                                 cdouble n_plus, double kL, cdouble delta_target, cdouble initial,
                                 NewtonOptions options) {
  const cdouble weight = n_minus + n_plus;
  auto residual = [&](cdouble p) {
    FProfile prof{[&family, p](double tau) { return family(p, tau); }, n_minus, n_plus, kL};
    return weight * f_family_moment(prof) - delta_target;
  };
  const double scale = std::max(1.0, std::abs(delta_target));
  cdouble p = initial;
  cdouble g = residual(p);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (std::abs(g) <= options.tol * scale) return p;
    const double h = 1e-6 * std::max(1.0, std::abs(p));
    const cdouble dg = (residual(p + h) - residual(p - h)) / (2.0 * h);
    if (std::abs(dg) < kDefaultEpsilon) throw Error(ErrorCode::no_convergence, "Newton derivative vanishes");
    const cdouble step = -g / dg;
    double damping = 1.0;
    cdouble trial = p + step;
    cdouble g_trial = residual(trial);
    while (std::abs(g_trial) >= std::abs(g) && damping > 1e-6) {
      damping *= 0.5;
      trial = p + damping * step;
      g_trial = residual(trial);
    }
    p = trial;
    g = g_trial;
  }
  if (std::abs(g) <= options.tol * scale) return p;
  throw Error(ErrorCode::no_convergence, "damped Newton did not converge");
}

std::vector<double> reflectionless_wavenumbers(const PotentialProfile& v, double k_min, double k_max,
                                               int samples, Side side, double accept_tol) {
  if (!(k_min > 0) || !(k_max > k_min))
    throw Error(ErrorCode::invalid_argument, "need 0 < k_min < k_max");
  if (samples < 2) throw Error(ErrorCode::invalid_argument, "need at least two samples");

  auto phase = [&](double k) {
    const auto ing = semiclassical_ingredients(v, k);
    return std::arg(std::exp(2.0 * kI * ing.delta) / boundary_ratio(ing.n_minus, ing.n_plus, side));
  };
  // e^{2 i delta} winds once per pi / (L Re n).
  const auto ing_hi = semiclassical_ingredients(v, k_max);
  const auto ing_lo = semiclassical_ingredients(v, k_min);
  const double turns = std::abs(ing_hi.delta.real() - ing_lo.delta.real()) / kPi;
  const int n = std::max(samples, int(std::ceil(16.0 * turns)) + 2);

  std::vector<double> roots;
  double k_prev = k_min;
  double th_prev = phase(k_prev);
  for (int i = 1; i < n; ++i) {
    const double k = k_min + (k_max - k_min) * double(i) / double(n - 1);
    const double th = phase(k);
    if (th_prev * th <= 0.0 && std::abs(th_prev) < 0.5 * kPi && std::abs(th) < 0.5 * kPi) {
      double a = k_prev, b = k, fa = th_prev;
      for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = phase(mid);
        if ((fa <= 0.0) == (fm <= 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      const double root = 0.5 * (a + b);
      const auto ing = semiclassical_ingredients(v, root);
      if (std::abs(reflectionless_residual(ing, side)) < accept_tol &&
          (roots.empty() || root - roots.back() > 1e-9 * root))
        roots.push_back(root);
    }
    k_prev = k;
    th_prev = th;
  }
  return roots;
}

}  // namespace semiscat
