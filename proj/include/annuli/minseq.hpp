#pragma once

#include "annuli/functionals.hpp"
#include "annuli/maps.hpp"
#include "annuli/metric.hpp"
#include "annuli/nitsche.hpp"

#include <memory>
#include <vector>

namespace annuli {

// One element of the fat-regime minimizing family: the critical-profile map on
// [s_n, sigma] spliced with the power map r z |z|^{n-1} / tau^n on [tau, s_n].
struct MinSeqElement {
    int n = 0;
    double s_n = 0.0;
    RadialMap map;          // piecewise forward map A' -> A(r, 1)
    double K_rho_n = 0.0;   // mean distortion of the element
    double quad_err = 0.0;
};

// Root of q_critical(s) = r (s/tau)^n in (tau, sigma).  Throws BracketError
// (suggesting a larger n) when no splice radius exists yet.
double splice_radius(const NitscheProfile& crit, double r, int n);
double splice_radius(const RadialMetric& m, const AnnulusGeometry& geom, int n);

MinSeqElement build_element(std::shared_ptr<const NitscheProfile> crit,
                            const AnnulusGeometry& geom, int n);
MinSeqElement build_element(const RadialMetric& m, const AnnulusGeometry& geom, int n);

struct LimitRow {
    int n = 0;
    double s_n = 0.0;
    double n_excess = 0.0;   // n (s_n - tau)
    double K_rho_n = 0.0;
    double gap = 0.0;        // K_rho_n - lower bound
};

struct LimitStudy {
    std::vector<LimitRow> rows;
    double bound = 0.0;          // sharp fat-regime lower bound
    double r_prime = 0.0;
    double tau_log_ratio = 0.0;  // tau log(r'/r), the limit of n (s_n - tau)
    double fitted_C = 0.0;       // gap ~ C / n fit over the ladder
    double fitted_rate = 0.0;    // log-log slope of gap vs n
};

LimitStudy limit_study(const RadialMetric& m, const AnnulusGeometry& geom,
                       const std::vector<int>& n_list);

} // namespace annuli
