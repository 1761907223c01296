#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace annuli {

// Radial conformal density rho(z) = rho(|z|), immutable once constructed.
// density_deriv is always present (analytic for builtins, interpolant
// derivative for tabulated metrics); density_deriv2 may be empty, in which
// case second-derivative consumers fall back to finite differences.
struct RadialMetric {
    std::string name;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    bool defined_at_zero = false;
    std::function<double(double)> density;
    std::function<double(double)> density_deriv;
    std::function<double(double)> density_deriv2;

    double rho(double s) const;        // domain-checked, positivity-checked
    double rho_prime(double s) const;
    bool has_second_deriv() const { return static_cast<bool>(density_deriv2); }
    double rho_second(double s) const; // analytic or central difference of rho_prime
    double varrho(double s) const { return 1.0 / rho(s); }
    double s_rho(double s) const { return s * rho(s); }
    double srho2(double s) const { const double v = s_rho(s); return v * v; }
    // d(s rho)^2/ds = 2 s rho^2 + 2 s^2 rho rho'
    double srho2_prime(double s) const;
    // 2 s rho'/rho, the log-log slope of rho^2 (equals 4 t h'/h at t = s^2)
    double log_density_slope(double s) const;

    bool contains(double s) const;
};

// Builtins: euclidean, inverse_radius, hyperbolic_disk, punctured_disk,
// hyperbolic_annulus (params = {R}, R > 1), spherical, cigar.
RadialMetric builtin_metric(const std::string& name, const std::vector<double>& params = {});

// Metric from sampled (s, rho) pairs with monotone-cubic interpolation.
// Evaluation outside the tabulated range is an error.
RadialMetric table_metric(const std::vector<std::pair<double, double>>& table);

// Gauss curvature at radius s from K = -(4 t h'/h)' / h^2, t = s^2.
double gauss_curvature(const RadialMetric& m, double s);

struct RegularityReport {
    double inf_s_rho = 0.0;
    double inf_location = 0.0;
    double boundary_limit = 0.0;
    double curvature_bound = 0.0;
    bool is_regular = false;
};

// Samples s*rho(s) over (tau, sigma), refines the minimum by golden section,
// extrapolates the limit at tau from inside, and checks |K| stays bounded.
RegularityReport check_regularity(const RadialMetric& m, double tau, double sigma, int grid_n = 64);

enum class MonotoneVerdict { increasing, decreasing, constant, inconclusive };

// Direction of 4 t h'/h on [lo, hi]: increasing where K <= 0, decreasing where
// K >= 0, constant for flat metrics.  Mixed curvature sign is inconclusive.
MonotoneVerdict monotonicity_of_h(const RadialMetric& m, double lo, double hi, int samples = 256);

// True when s*rho(s) is constant on [tau, sigma] to relative 1e-12.
bool is_degenerate_on(const RadialMetric& m, double tau, double sigma, int samples = 128);

const char* to_string(MonotoneVerdict v);

} // namespace annuli
