#pragma once

#include <functional>

namespace stable_psr {

struct QuadResult {
    double value = 0.0;
    double abs_err = 0.0;
    int intervals = 0;
    bool converged = false;
};

// Globally adaptive 15-point Gauss-Kronrod on [a,b]. Stops when the summed
// error estimate is below max(abs_tol, rel_tol*|value|) or the interval
// budget is spent (converged = false in that case).
QuadResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol = 0.0, int max_intervals = 10000);

// Same, but throws ConvergenceError when the budget runs out.
QuadResult integrate_checked(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, double rel_tol = 0.0, int max_intervals = 10000);

}  // namespace stable_psr
