#pragma once

#include <functional>

namespace rmtlab {

// Adaptive Simpson integration on [a,b]. Recursion splits an interval until
// the Simpson estimate of the two halves agrees with the parent estimate.
// tol acts as a relative tolerance once the integral exceeds unit scale.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 60);

}  // namespace rmtlab
