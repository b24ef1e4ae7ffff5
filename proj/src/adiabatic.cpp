#include "semiscat/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "semiscat/quadrature.hpp"

namespace semiscat {

namespace {

constexpr cdouble kI{0.0, 1.0};

double x_of_tau(const PotentialProfile& v, double k, double tau) {
  if (!v.infinite_range()) {
    if (tau == k * v.support_lo()) return v.support_lo();
    if (tau == k * v.support_hi()) return v.support_hi();
  }
  return tau / k;
}

void require_wavenumber(double k) {
  if (!(k > 0) || !std::isfinite(k))
    throw Error(ErrorCode::invalid_argument, "wavenumber must be positive and finite");
}

void require_finite_range(const PotentialProfile& v) {
  if (v.infinite_range())
    throw Error(ErrorCode::infinite_range, "operation needs a finite-range profile");
}

// Five-point central difference of n(tau).
cdouble index_derivative(const PotentialProfile& v, double k, double tau, double h) {
  return (index_at(v, k, tau - 2 * h) - 8.0 * index_at(v, k, tau - h) +
          8.0 * index_at(v, k, tau + h) - index_at(v, k, tau + 2 * h)) /
         (12.0 * h);
}

struct InteriorGrid {
  double start;
  double spacing;
  int count;
};

InteriorGrid interior_grid(double a, double b, GridSpec grid) {
  if (grid.samples < 1) throw Error(ErrorCode::invalid_argument, "grid needs at least one sample");
  const double spacing = (b - a) / double(grid.samples + 1);
  return {a + spacing, spacing, grid.samples};
}

}  // namespace

SemiclassicalIngredients make_ingredients(cdouble n_minus, cdouble n_plus, cdouble delta,
                                          double tau_minus, double tau_plus) {
  const cdouble sm = principal_sqrt(n_minus);
  const cdouble sp = principal_sqrt(n_plus);
  if (std::abs(sm) < kDefaultEpsilon || std::abs(sp) < kDefaultEpsilon)
    throw Error(ErrorCode::turning_point, "boundary index vanishes");
  const cdouble p = sm / sp;
  const cdouble q = sm * sp;
  SemiclassicalIngredients ing;
  ing.n_minus = n_minus;
  ing.n_plus = n_plus;
  ing.a_plus = 0.5 * (p + 1.0 / p);
  ing.a_minus = 0.5 * (p - 1.0 / p);
  ing.b_plus = 0.5 * (q + 1.0 / q);
  ing.b_minus = 0.5 * (q - 1.0 / q);
  ing.delta = delta;
  ing.tau_minus = tau_minus;
  ing.tau_plus = tau_plus;
  return ing;
}

cdouble index_at(const PotentialProfile& v, double k, double tau) {
  const cdouble pot = v.evaluate(x_of_tau(v, k, tau), k);
  if (!is_finite(pot)) throw Error(ErrorCode::non_finite, "potential is not finite");
  return index_from_potential(pot, k);
}

cdouble integrate_index(const PotentialProfile& v, double k, double tau0, double tau1) {
  std::vector<double> cuts{tau0};
  if (!v.infinite_range()) {
    for (double edge : {k * v.support_lo(), k * v.support_hi()})
      if (edge > std::min(tau0, tau1) && edge < std::max(tau0, tau1)) cuts.push_back(edge);
  }
  cuts.push_back(tau1);
  if (tau1 < tau0) std::sort(cuts.begin() + 1, cuts.end() - 1, std::greater<>());
  else std::sort(cuts.begin() + 1, cuts.end() - 1);

  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  auto n = [&](double tau) { return index_at(v, k, tau); };
  cdouble total{};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    total += (a < b) ? integrate(n, a, b, opts) : -integrate(n, b, a, opts);
  }
  return total;
}

void check_index_path(const PotentialProfile& v, double k, double tau0, double tau1, int samples) {
  if (samples < 2) samples = 2;
  cdouble prev = index_at(v, k, tau0);
  if (std::abs(prev) < kDefaultEpsilon)
    throw Error(ErrorCode::turning_point, "turning point at tau = " + std::to_string(tau0));
  for (int i = 1; i <= samples; ++i) {
    const double tau = (i == samples) ? tau1 : tau0 + (tau1 - tau0) * double(i) / double(samples);
    const cdouble n = index_at(v, k, tau);
    if (std::abs(n) < kDefaultEpsilon)
      throw Error(ErrorCode::turning_point, "turning point at tau = " + std::to_string(tau));
    if (std::abs(std::arg(n / prev)) > 0.5 * std::numbers::pi)
      throw Error(ErrorCode::branch_discontinuity,
                  "index crosses the square-root branch cut near tau = " + std::to_string(tau));
    prev = n;
  }
}

double adiabaticity_margin(const PotentialProfile& v, double k, GridSpec grid) {
  require_wavenumber(k);
  require_finite_range(v);
  const double a = k * v.support_lo(), b = k * v.support_hi();
  check_index_path(v, k, a, b);
  const auto g = interior_grid(a, b, grid);
  const double h = 0.25 * g.spacing;
  double worst = 0.0;
  for (int i = 0; i < g.count; ++i) {
    const double tau = g.start + g.spacing * double(i);
    const cdouble n = index_at(v, k, tau);
    const cdouble dn = index_derivative(v, k, tau, h);
    worst = std::max(worst, std::abs(dn) / (4.0 * std::norm(n)));
  }
  return worst;
}

double adiabaticity_margin_x(const PotentialProfile& v, double k, GridSpec grid) {
  require_wavenumber(k);
  require_finite_range(v);
  check_index_path(v, k, k * v.support_lo(), k * v.support_hi());
  const auto g = interior_grid(v.support_lo(), v.support_hi(), grid);
  const double h = 0.25 * g.spacing;
  auto pot = [&](double x) { return v.evaluate(x, k); };
  double worst = 0.0;
  for (int i = 0; i < g.count; ++i) {
    const double x = g.start + g.spacing * double(i);
    const cdouble dv = (pot(x - 2 * h) - 8.0 * pot(x - h) + 8.0 * pot(x + h) - pot(x + 2 * h)) / (12.0 * h);
    const double gap = std::abs(k * k - pot(x));
    worst = std::max(worst, std::abs(dv) / (8.0 * gap * std::sqrt(gap)));
  }
  return worst;
}

PhaseRecord phases(const PotentialProfile& v, double k, double tau0, double tau1) {
  require_wavenumber(k);
  check_index_path(v, k, tau0, tau1);
  const cdouble action = integrate_index(v, k, tau0, tau1);
  const cdouble n0 = index_at(v, k, tau0);
  const cdouble n1 = index_at(v, k, tau1);
  // exp(i gamma) = sqrt(n0 / n1).
  const cdouble gamma = 0.5 * kI * (std::log(n1) - std::log(n0));
  return {-action, action, gamma, gamma, tau0, tau1};
}

Matrix2cd adiabatic_evolution_operator(const PotentialProfile& v, double k, double tau0,
                                       double tau1) {
  const PhaseRecord ph = phases(v, k, tau0, tau1);
  const auto w_of = [&](double tau) { return v.evaluate(x_of_tau(v, k, tau), k) / (2.0 * k * k); };
  const auto es0 = eigensystem(w_of(tau0));
  const auto es1 = eigensystem(w_of(tau1));
  const cdouble plus = std::exp(kI * (ph.delta_plus + ph.gamma_plus));
  const cdouble minus = std::exp(kI * (ph.delta_minus + ph.gamma_minus));
  return plus * es1.psi_plus * es0.phi_plus.adjoint() + minus * es1.psi_minus * es0.phi_minus.adjoint();
}

std::function<cdouble(double)> wkb_wavefunction(const PotentialProfile& v, double k, double x0,
                                                WkbSign sign) {
  require_wavenumber(k);
  const double tau0 = k * x0;
  const cdouble n0 = index_at(v, k, tau0);
  if (std::abs(n0) < kDefaultEpsilon)
    throw Error(ErrorCode::turning_point, "reference point is a turning point");
  const double s = (sign == WkbSign::minus) ? -1.0 : 1.0;
  return [v, k, tau0, n0, s](double x) -> cdouble {
    const double tau = k * x;
    if (tau == tau0) return {1.0, 0.0};
    check_index_path(v, k, tau0, tau, 512);
    const cdouble n = index_at(v, k, tau);
    const cdouble action = integrate_index(v, k, tau0, tau);
    return std::exp(0.5 * (std::log(n0) - std::log(n)) + s * kI * action);
  };
}

SemiclassicalIngredients semiclassical_ingredients(const PotentialProfile& v, double k) {
  require_wavenumber(k);
  require_finite_range(v);
  const double tm = k * v.support_lo(), tp = k * v.support_hi();
  check_index_path(v, k, tm, tp);
  return make_ingredients(index_at(v, k, tm), index_at(v, k, tp), integrate_index(v, k, tm, tp), tm, tp);
}

TransferMatrixd semiclassical_transfer(const SemiclassicalIngredients& g) {
  const cdouble c = std::cos(g.delta), s = std::sin(g.delta);
  const double diff = g.tau_plus - g.tau_minus, sum = g.tau_plus + g.tau_minus;
  return TransferMatrixd(std::polar(1.0, -diff) * (g.a_plus * c + kI * g.b_plus * s),
                         std::polar(1.0, -sum) * (g.a_minus * c + kI * g.b_minus * s),
                         std::polar(1.0, sum) * (g.a_minus * c - kI * g.b_minus * s),
                         std::polar(1.0, diff) * (g.a_plus * c - kI * g.b_plus * s));
}

TransferMatrixd semiclassical_transfer(const PotentialProfile& v, double k) {
  require_wavenumber(k);
  if (v.infinite_range()) {
    const cdouble theta = infinite_range_phase(v, k);
    return TransferMatrixd(std::exp(kI * theta), 0.0, 0.0, std::exp(-kI * theta));
  }
  return semiclassical_transfer(semiclassical_ingredients(v, k));
}

ScatteringAmplitudesd semiclassical_amplitudes(const SemiclassicalIngredients& g, double epsilon) {
  const cdouble c = std::cos(g.delta), s = std::sin(g.delta);
  const cdouble den = g.a_plus * c - kI * g.b_plus * s;
  if (std::abs(den) < epsilon * std::max(1.0, std::abs(c) + std::abs(s)))
    throw Error(ErrorCode::spectral_singularity, "semiclassical spectral singularity");
  ScatteringAmplitudesd amps;
  amps.R_left = -std::polar(1.0, 2.0 * g.tau_minus) * (g.a_minus * c - kI * g.b_minus * s) / den;
  amps.R_right = std::polar(1.0, -2.0 * g.tau_plus) * (g.a_minus * c + kI * g.b_minus * s) / den;
  amps.T = std::polar(1.0, -(g.tau_plus - g.tau_minus)) / den;
  return amps;
}

ScatteringAmplitudesd semiclassical_amplitudes(const PotentialProfile& v, double k, double epsilon) {
  require_wavenumber(k);
  if (v.infinite_range()) {
    const cdouble theta = infinite_range_phase(v, k);
    return {std::exp(kI * theta), 0.0, 0.0};
  }
  return semiclassical_amplitudes(semiclassical_ingredients(v, k), epsilon);
}

cdouble infinite_range_phase(const PotentialProfile& v, double k) {
  require_wavenumber(k);
  const double center = 0.5 * (v.support_lo() + v.support_hi());
  const double scale = 0.5 * (v.support_hi() - v.support_lo());
  auto integrand = [&](double x) -> cdouble {
    const cdouble n = index_from_potential(v.evaluate(x, k), k);
    if (std::abs(n) < kDefaultEpsilon) throw Error(ErrorCode::turning_point, "turning point on the real line");
    return k * (n - 1.0);
  };
  for (double far : {center - 1e8 * scale, center + 1e8 * scale}) {
    if (std::abs(far - center) * std::abs(integrand(far)) > 1e-6)
      throw Error(ErrorCode::divergent_integral, "potential tail decays too slowly for a finite phase");
  }
  try {
    QuadratureOptions opts;
    opts.rel_tol = 1e-11;
    opts.max_depth = 60;
    return integrate_real_line(integrand, center, scale, opts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::quadrature_failure)
      throw Error(ErrorCode::divergent_integral, "infinite-range phase integral does not converge");
    throw;
  }
}

}  // namespace semiscat
