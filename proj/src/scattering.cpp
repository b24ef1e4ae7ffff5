#include "semiscat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "semiscat/profiles.hpp"

namespace semiscat {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::barrier: return "barrier";
    case ProfileKind::quadratic_index: return "quadratic-index";
    case ProfileKind::f_family: return "f-family";
    case ProfileKind::tabulated: return "tabulated";
    case ProfileKind::custom: return "custom";
  }
  return "custom";
}

PotentialProfile::PotentialProfile(ProfileKind kind, double support_lo, double support_hi,
                                   Function fn, bool infinite_range)
    : kind_(kind), lo_(support_lo), hi_(support_hi), fn_(std::move(fn)), infinite_(infinite_range) {
  if (!(support_lo < support_hi))
    throw Error(ErrorCode::invalid_argument, "profile support must satisfy lo < hi");
  if (!fn_) throw Error(ErrorCode::invalid_argument, "profile has no evaluation function");
}

PotentialProfile PotentialProfile::padded(double pad) const {
  if (pad < 0) throw Error(ErrorCode::invalid_argument, "padding must be non-negative");
  const double lo = lo_, hi = hi_;
  auto inner = fn_;
  PotentialProfile out(
      kind_, lo_ - pad, hi_ + pad,
      [inner, lo, hi](double x, double k) -> cdouble {
        if (x < lo || x > hi) return {0.0, 0.0};
        return inner(x, k);
      },
      infinite_);
  out.breaks_ = breaks_;
  if (pad > 0 && !infinite_) {
    out.breaks_.push_back(lo_);
    out.breaks_.push_back(hi_);
  }
  std::sort(out.breaks_.begin(), out.breaks_.end());
  return out;
}

PotentialProfile free_profile(double lo, double hi) {
  return PotentialProfile(ProfileKind::custom, lo, hi, [](double, double) { return cdouble{}; });
}

PotentialProfile barrier_profile(cdouble z, double L) {
  if (!(L > 0)) throw Error(ErrorCode::invalid_argument, "barrier length must be positive");
  return PotentialProfile(ProfileKind::barrier, 0.0, L, [z](double, double) { return z; });
}

PotentialProfile tabulated_profile(std::vector<double> x, std::vector<cdouble> v) {
  if (x.size() < 2 || x.size() != v.size())
    throw Error(ErrorCode::invalid_argument, "tabulated profile needs >= 2 matching samples");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw Error(ErrorCode::invalid_argument, "tabulated abscissae must increase strictly");
  for (const auto& vi : v)
    if (!is_finite(vi)) throw Error(ErrorCode::non_finite, "tabulated potential is not finite");
  const double lo = x.front(), hi = x.back();
  return PotentialProfile(ProfileKind::tabulated, lo, hi,
                          [x = std::move(x), v = std::move(v)](double xq, double) -> cdouble {
                            auto it = std::upper_bound(x.begin(), x.end(), xq);
                            if (it == x.begin()) return v.front();
                            if (it == x.end()) return v.back();
                            const auto i = std::size_t(it - x.begin());
                            const double t = (xq - x[i - 1]) / (x[i] - x[i - 1]);
                            return v[i - 1] + t * (v[i] - v[i - 1]);
                          });
}

PotentialProfile index_profile(ProfileKind kind, double lo, double hi,
                               std::function<cdouble(double)> index) {
  return PotentialProfile(kind, lo, hi, [index = std::move(index)](double x, double k) {
    const cdouble n = index(x);
    return k * k * (1.0 - n * n);
  });
}

PotentialProfile gaussian_profile(cdouble amplitude, double width) {
  if (!(width > 0)) throw Error(ErrorCode::invalid_argument, "gaussian width must be positive");
  return PotentialProfile(
      ProfileKind::custom, -width, width,
      [amplitude, width](double x, double) {
        return amplitude * std::exp(-0.5 * (x / width) * (x / width));
      },
      true);
}

}  // namespace semiscat
