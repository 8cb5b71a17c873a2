#pragma once

#include <span>

#include "rmtlab/eigensolver.hpp"
#include "rmtlab/errors.hpp"

namespace rmtlab::semicircle {

// density of the semicircle law on [-2, 2]
double density(double x);

// closed-form distribution function of the semicircle law
double cdf(double x);

// 2k-th moment: the Catalan number C_k. order must be even and <= 40.
long long moment(int order);

// Kolmogorov distance between the empirical spectral distribution and the
// semicircle law, evaluated at both one-sided limits of every eigenvalue.
double ks_distance(std::span<const double> eigenvalues);
double ks_distance(const Spectrum& spectrum);

}  // namespace rmtlab::semicircle
