#pragma once

#include "annuli/maps.hpp"
#include "annuli/metric.hpp"
#include "annuli/nitsche.hpp"

namespace annuli {

enum class Regime { nitsche_range, fat };

const char* to_string(Regime r);

struct RegimeVerdict {
    Regime regime = Regime::nitsche_range;
    bool near_boundary = false; // |r - r*| < 1e-8: verdict limited by quadrature
    double r_star = 0.0;
    bool degenerate = false;
};

RegimeVerdict classify_regime(const RadialMetric& m, const AnnulusGeometry& geom);

struct ValueWithError {
    double value = 0.0;
    double err = 0.0;
};

// Mean distortion of a forward radial map over the weighted target annulus:
//   2 pi Integral s rho^2(s) (s Phi' + 1/(s Phi'))/2 ds.
// Critical-family maps are integrated in the sqrt(s - tau) variable where the
// endpoint singularity of s Phi' disappears.
ValueWithError mean_distortion_radial(const RadialMap& map, const RadialMetric& m);

// Dirichlet-type energy of an inverse radial map over the source annulus:
//   pi Integral (s g'^2 + g^2/s) rho^2(g(s)) ds.
ValueWithError energy_radial(const RadialMap& map, const RadialMetric& m);

struct FunctionalReport {
    double K_rho = 0.0;
    double E_rho = 0.0;
    double lower_bound = 0.0;
    double gap = 0.0; // K_rho - lower_bound
    double quadrature_err = 0.0;
    Regime regime = Regime::nitsche_range;
    // decomposition of the fat-regime bound
    double k_critical = 0.0;
    double gap_term = 0.0;
    double r_star = 0.0;
    double c = 0.0;
};

// Sharp lower bound in the fat regime:
//   K[f_critical] + (tau^2 rho^2(tau)/2) Mod A(r, r').
// The infimum is not attained there, so the report carries the bound itself
// as the functional value.
FunctionalReport theorem2_lower_bound(const RadialMetric& m, const AnnulusGeometry& geom);

// Full report for a geometry: extremal value in the admissible range, sharp
// bound in the fat regime.
FunctionalReport functional_report(const RadialMetric& m, const AnnulusGeometry& geom);

struct FikinResult {
    double lhs = 0.0;  // h(sigma)/h(tau) with h(x) = Integral_0^x rho
    double rhs = 0.0;  // 1 + (tau/(2 h(tau))) log^2(r) (t rho(t))' at tau or sigma
    bool holds = false;
    int curvature_sign = 0; // +1, -1, or 0 when indefinite
    bool inconclusive = false;
};

// Necessary condition for a radial harmonic diffeomorphism when the metric
// extends to the full disk and has sign-definite curvature.
FikinResult fikin_bound_check(const RadialMetric& m, const AnnulusGeometry& geom);

} // namespace annuli
