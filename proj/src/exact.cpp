#include "semiscat/exact.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace semiscat {

namespace {

void require_finite(cdouble w, double tau) {
  if (!is_finite(w))
    throw Error(ErrorCode::non_finite, "potential is not finite at tau = " + std::to_string(tau));
}

// dU/dtau = -i H U, written out for the 2x2 case.
Matrix2cd rhs(cdouble w, const Matrix2cd& u) {
  const cdouble I(0.0, 1.0);
  return -I * (TwoLevelHamiltonian::assemble(w) * u);
}

}  // namespace

TwoLevelHamiltonian::TwoLevelHamiltonian(const PotentialProfile& v, double k) {
  if (!(k > 0)) throw Error(ErrorCode::invalid_argument, "wavenumber must be positive");
  tau_lo_ = v.infinite_range() ? -std::numeric_limits<double>::infinity() : k * v.support_lo();
  tau_hi_ = v.infinite_range() ? std::numeric_limits<double>::infinity() : k * v.support_hi();
  const double two_k2 = 2.0 * k * k;
  const double lo = v.support_lo(), hi = v.support_hi();
  const double klo = tau_lo_, khi = tau_hi_;
  w_ = [v, k, two_k2, lo, hi, klo, khi](double tau) {
    double x = tau / k;
    if (tau == klo) x = lo;
    if (tau == khi) x = hi;
    return v.evaluate(x, k) / two_k2;
  };
  for (double xb : v.breakpoints()) breaks_.push_back(k * xb);
}

TwoLevelHamiltonian::TwoLevelHamiltonian(Coupling w, double tau_lo, double tau_hi, std::vector<double> breakpoints)
    : w_(std::move(w)), tau_lo_(tau_lo), tau_hi_(tau_hi), breaks_(std::move(breakpoints)) {
  std::sort(breaks_.begin(), breaks_.end());
  if (!w_) throw Error(ErrorCode::invalid_argument, "coupling function is empty");
}

Matrix2cd evolve(const TwoLevelHamiltonian& h, double tau0, double tau1, double step) {
  if (tau1 == tau0) return Matrix2cd::Identity();
  if (!(tau1 > tau0)) throw Error(ErrorCode::invalid_argument, "evolve requires tau1 >= tau0");
  if (!(step > 0) || step >= tau1 - tau0)
    throw Error(ErrorCode::step_size, "step must satisfy 0 < step < tau1 - tau0");

  std::vector<double> cuts{tau0};
  for (double b : h.breakpoints())
    if (b > tau0 && b < tau1) cuts.push_back(b);
  cuts.push_back(tau1);

  Matrix2cd u = Matrix2cd::Identity();
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    // Segment ends that sit on a jump take the limit from inside the segment.
    const double ea = s > 0 ? 1e-12 * std::max(1.0, std::abs(a)) : 0.0;
    const double eb = s + 2 < cuts.size() ? 1e-12 * std::max(1.0, std::abs(b)) : 0.0;
    const auto steps = std::max(1LL, static_cast<long long>(std::ceil((b - a) / step - 1e-9)));
    const double dt = (b - a) / double(steps);

    cdouble w0 = h.coupling(a + ea);
    require_finite(w0, a);
    for (long long i = 0; i < steps; ++i) {
      const double t = a + double(i) * dt;
      const bool last = i + 1 == steps;
      const double t_end = last ? b : a + double(i + 1) * dt;
      const double t_mid = 0.5 * (t + t_end);
      const cdouble wm = h.coupling(t_mid);
      const cdouble w1 = h.coupling(last ? b - eb : t_end);
      require_finite(wm, t_mid);
      require_finite(w1, t_end);

      const Matrix2cd k1 = rhs(w0, u);
      const Matrix2cd k2 = rhs(wm, u + 0.5 * dt * k1);
      const Matrix2cd k3 = rhs(wm, u + 0.5 * dt * k2);
      const Matrix2cd k4 = rhs(w1, u + dt * k3);
      u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      w0 = w1;
    }
  }
  return u;
}

double default_step(double tau_lo, double tau_hi) {
  return std::min((tau_hi - tau_lo) / 1e6, 1e-3);
}

TransferMatrixd exact_transfer_matrix(const PotentialProfile& v, double k,
                                      std::optional<double> step) {
  if (v.infinite_range())
    throw Error(ErrorCode::infinite_range,
                "exact engine needs a finite-range profile; use the semiclassical "
                "infinite-range path or tabulate a truncation");
  const TwoLevelHamiltonian h(v, k);
  const double tau_lo = h.tau_lo(), tau_hi = h.tau_hi();
  const Matrix2cd u = evolve(h, tau_lo, tau_hi, step.value_or(default_step(tau_lo, tau_hi)));
  const Matrix2cd m = free_propagator(-tau_hi) * u * free_propagator(tau_lo);
  TransferMatrixd result(m);
  const double scale = std::max(1.0, m.cwiseAbs2().maxCoeff());
  if (!result.is_unimodular(1e-6 * scale))
    throw Error(ErrorCode::non_unimodular, "integrated transfer matrix lost det M = 1");
  return result;
}

std::vector<TransferMatrixd> exact_transfer_matrices(const PotentialProfile& v,
                                                     std::span<const double> ks,
                                                     std::optional<double> step, unsigned threads) {
  std::vector<TransferMatrixd> out(ks.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, ks.size())));

  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < ks.size(); i += threads) out[i] = exact_transfer_matrix(v, ks[i], step);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace semiscat
