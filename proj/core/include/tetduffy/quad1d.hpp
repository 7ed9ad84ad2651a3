#pragma once

#include <complex>
#include <functional>

#include "tetduffy/errors.hpp"

namespace tetduffy {

// Adaptive 1-D quadrature: Gauss-Kronrod 7/15 panels with bisection until
// the per-panel error estimate meets the requested tolerance.  Throws
// NoConvergence if a panel at max_depth still fails its budget.
std::complex<double> adaptive_integrate(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double rel_tol, double abs_tol = 0.0, int max_depth = 40);

}  // namespace tetduffy
