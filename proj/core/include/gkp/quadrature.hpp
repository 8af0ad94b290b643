#pragma once

#include <functional>

namespace gkp {

// Adaptive Gauss-Kronrod (G7, K15) with recursive bisection. abs_tol is an
// absolute tolerance on the whole interval; panels are split until the
// local error estimate, scaled by panel fraction, meets it.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9);

}  // namespace gkp
