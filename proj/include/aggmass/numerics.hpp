// numerics.hpp: small numerical utilities (quadrature, root bracketing, fits)
// used across the solver modules.
#pragma once

#include <functional>
#include <vector>

namespace aggmass {

// Adaptive Simpson quadrature of f over [a, b] to the given absolute
// tolerance. The integrand must be finite on (a, b]; an integrable endpoint
// singularity of power type is handled by the refinement as long as f(a) is
// finite (callers pass the continuous extension at the endpoint).
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol);

// Root of the increasing function g on [lo, hi] by bisection, i.e. the x with
// g(x) = 0, to absolute tolerance tol_x in x. Requires g(lo) <= 0 <= g(hi).
double bisect_increasing(const std::function<double(double)>& g, double lo,
                         double hi, double tol_x);

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace aggmass
