#pragma once

#include <functional>
#include <vector>

#include "semiscat/scattering.hpp"

namespace semiscat {

/// v = 0 on a nominal support [lo, hi].
PotentialProfile free_profile(double lo = 0.0, double hi = 1.0);

/// v = z on [0, L].
PotentialProfile barrier_profile(cdouble z, double L);

/// Piecewise-linear interpolation of samples (x_i, v_i); x must be strictly
/// increasing with at least two points. Independent of k.
PotentialProfile tabulated_profile(std::vector<double> x, std::vector<cdouble> v);

/// Optical medium with a fixed complex index n(x) on [lo, hi]:
/// v(x; k) = k^2 (1 - n(x)^2).
PotentialProfile index_profile(ProfileKind kind, double lo, double hi,
                               std::function<cdouble(double x)> index);

/// Infinite-range Gaussian v = amplitude * exp(-x^2 / (2 width^2)).
PotentialProfile gaussian_profile(cdouble amplitude, double width);

}  // namespace semiscat
