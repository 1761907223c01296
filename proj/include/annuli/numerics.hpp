#pragma once

#include <cstddef>
#include <functional>
#include <utility>

namespace annuli {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_levels = 12;
    // Integrand may blow up like (x - lo)^{-1/2} at the lower endpoint.  The
    // double-exponential transform used here never evaluates at the endpoints
    // themselves, so such integrands stay finite at every node.
    bool singular_lo = false;
};

struct QuadratureResult {
    double value = 0.0;
    double err_est = 0.0;  // difference between the last two refinement levels
    int levels = 0;
    std::size_t evals = 0;
};

// Adaptive tanh-sinh quadrature of f over (lo, hi).  Refines by level doubling
// until two successive levels agree within tolerance; the result is certified
// by that agreement.  Throws EvaluationError on a non-finite interior value and
// AccuracyError (carrying the best estimate) if max_levels is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureConfig& cfg = {});

struct RootConfig {
    double x_tol = 1e-12;
    double f_tol = 1e-12;
    int max_iter = 200;
};

// Brent's method on a sign-changing bracket.  The iterate never leaves the
// initial bracket.  Throws BracketError if f does not change sign and
// AccuracyError (with the best point) if max_iter is exhausted.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootConfig& cfg = {});

// Doubles an offset upward from lo until f changes sign; returns the bracket.
// Gives up (UnboundedRootError) once the offset exceeds 2^60.
std::pair<double, double> expand_bracket_up(const std::function<double(double)>& f, double lo);

} // namespace annuli
