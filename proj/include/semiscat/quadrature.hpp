#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <utility>

#include "semiscat/core.hpp"

namespace semiscat {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on P_N.
template <std::size_t N>
struct GaussLegendreRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendreRule() {
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < N; ++i) {
      double x = std::cos(pi * (double(i) + 0.75) / (double(N) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t j = 2; j <= N; ++j) {
          const double p2 = ((2.0 * double(j) - 1.0) * x * p1 - (double(j) - 1.0) * p0) / double(j);
          p0 = p1;
          p1 = p2;
        }
        dp = double(N) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  static const GaussLegendreRule& get() {
    static const GaussLegendreRule rule;
    return rule;
  }
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_depth = 40;
};

namespace detail {

template <typename F>
auto gauss_legendre_panel(const F& f, double a, double b) {
  using R = std::decay_t<decltype(f(a))>;
  const auto& rule = GaussLegendreRule<16>::get();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  R sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return R(sum * half);
}

template <typename F, typename R>
R adaptive_panel(const F& f, double a, double b, const R& whole, double tol,
                 const QuadratureOptions& opts, int depth) {
  const double mid = 0.5 * (a + b);
  const R left = gauss_legendre_panel(f, a, mid);
  const R right = gauss_legendre_panel(f, mid, b);
  const R refined = left + right;
  const double err = std::abs(refined - whole);
  if (!std::isfinite(err))
    throw Error(ErrorCode::non_finite, "integrand is not finite");
  if (err <= tol || err <= opts.rel_tol * std::abs(refined)) return refined;
  if (depth >= opts.max_depth)
    throw Error(ErrorCode::quadrature_failure, "adaptive quadrature did not converge");
  return adaptive_panel(f, a, mid, left, 0.5 * tol, opts, depth + 1) +
         adaptive_panel(f, mid, b, right, 0.5 * tol, opts, depth + 1);
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre quadrature of a real- or complex-valued
/// integrand over [a, b]. Node placement depends only on the integrand, so
/// repeated calls are bitwise reproducible.
template <typename F>
auto integrate(const F& f, double a, double b, const QuadratureOptions& opts = {}) {
  using R = std::decay_t<decltype(f(a))>;
  if (a == b) return R{};
  const R whole = detail::gauss_legendre_panel(f, a, b);
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(whole));
  return detail::adaptive_panel(f, a, b, whole, tol, opts, 0);
}

/// Integral over the whole real line using x = center + scale * t / (1 - t^2).
template <typename F>
auto integrate_real_line(const F& f, double center, double scale,
                         const QuadratureOptions& opts = {}) {
  using R = std::decay_t<decltype(f(center))>;
  auto mapped = [&](double t) -> R {
    const double d = 1.0 - t * t;
    if (d <= 0.0) return R{};
    const double x = center + scale * t / d;
    return f(x) * (scale * (1.0 + t * t) / (d * d));
  };
  return integrate(mapped, -1.0, 1.0, opts);
}

}  // namespace semiscat
