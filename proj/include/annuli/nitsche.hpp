#pragma once

#include "annuli/interp.hpp"
#include "annuli/metric.hpp"

#include <memory>
#include <vector>

namespace annuli {

struct AnnulusGeometry {
    double tau = 0.0;   // inner radius of the target annulus A'(tau, sigma)
    double sigma = 0.0; // outer radius of A'
    double r = 0.0;     // inner radius of the source annulus A(r, 1)
    void validate() const;
    void validate_target() const; // tau/sigma only
};

// Mod(A(p, q)) = 2 pi log(q / p)
double modulus(double p, double q);

struct BoundResult {
    double r_star = 0.0;
    bool degenerate = false; // s*rho constant: the bound integral diverges, r* = 0
    double err_est = 0.0;
};

// Smallest admissible inner radius r* for radial harmonic maps A(r,1) -> A'.
BoundResult nitsche_bound(const RadialMetric& m, const AnnulusGeometry& geom);

// Monotone log-profile phi of the radial harmonic family on [tau, sigma]:
//   phi(s) = -Integral_s^sigma rho(y) dy / sqrt(y^2 rho^2(y) + c),  phi(sigma) = 0.
// Tabulated against u = sqrt(s - tau), where phi is smooth even at the
// critical parameter, and interpolated with monotone cubics.  phi' and phi''
// are evaluated analytically from the metric.  Immutable once built.
class NitscheProfile {
public:
    double c() const { return c_critical_ + e_; }
    double c_critical() const { return c_critical_; } // -tau^2 rho^2(tau)
    double c_offset() const { return e_; }            // c - c_critical >= 0
    bool is_critical() const { return is_critical_; }
    double tau() const { return tau_; }
    double sigma() const { return sigma_; }
    double r_achieved() const { return r_achieved_; }
    const RadialMetric& metric() const { return metric_; }

    double phi(double s) const;
    double q(double s) const;      // exp(phi)
    double q_inv(double x) const;  // monotone inverse of q on [r_achieved, 1]
    double phi_prime(double s) const;
    double phi_second(double s) const;

    // (s rho(s))^2 - (tau rho(tau))^2, evaluated without cancellation near tau
    double srho2_above_tau(double s) const;
    // d ((s rho)^2)/ds at tau
    double srho2_prime_tau() const { return srho2_prime_tau_; }

    double quad_err() const { return quad_err_; }
    double interp_err() const { return interp_err_; }
    std::size_t node_count() const { return psi_.size(); }
    // profile nodes as (s, phi) pairs
    std::vector<std::pair<double, double>> nodes() const;

    // Rebuild a profile from serialized (s, phi) nodes (12-digit CLI output).
    static NitscheProfile from_nodes(const RadialMetric& m, double tau, double sigma,
                                     double c, bool is_critical,
                                     const std::vector<std::pair<double, double>>& nodes);

private:
    NitscheProfile() = default;
    friend NitscheProfile solve_c(const RadialMetric&, const AnnulusGeometry&);
    friend NitscheProfile critical_profile(const RadialMetric&, const AnnulusGeometry&);
    friend class ProfileBuilder;

    RadialMetric metric_;
    double tau_ = 0.0, sigma_ = 0.0;
    double c_critical_ = 0.0;
    double e_ = 0.0;
    bool is_critical_ = false;
    double r_achieved_ = 0.0;
    double srho2_tau_ = 0.0, srho2_prime_tau_ = 0.0, srho2_second_tau_ = 0.0;
    MonotoneCubic psi_; // phi as a function of u = sqrt(s - tau)
    double quad_err_ = 0.0;
    double interp_err_ = 0.0;
};

// Solves for the parameter c with prescribed inner radius r >= r*; at r = r*
// the critical profile is returned.  Throws RegimeError for r < r*.
NitscheProfile solve_c(const RadialMetric& m, const AnnulusGeometry& geom);

// Profile at the boundary parameter c = -tau^2 rho^2(tau); r_achieved = r*.
NitscheProfile critical_profile(const RadialMetric& m, const AnnulusGeometry& geom);

} // namespace annuli
