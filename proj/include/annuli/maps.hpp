#pragma once

#include "annuli/metric.hpp"
#include "annuli/nitsche.hpp"

#include <complex>
#include <functional>
#include <memory>

namespace annuli {

enum class MapDirection {
    forward, // f : A'(tau, sigma) -> A(r, 1)
    inverse, // h : A(r, 1) -> A'(tau, sigma)
};

// Monotone modulus profile P(s) of a radial stretching P(s) e^{i(t + alpha)}.
class RadialProfile {
public:
    virtual ~RadialProfile() = default;
    virtual double lo() const = 0;
    virtual double hi() const = 0;
    virtual double value(double s) const = 0;
    virtual double deriv(double s) const = 0;
    virtual bool has_second() const { return false; }
    virtual double second(double s) const; // finite difference of deriv by default
    // set when the profile is backed by a solved c-parameter family
    virtual const NitscheProfile* nitsche() const { return nullptr; }
};

struct RadialMap {
    std::shared_ptr<const RadialProfile> profile;
    MapDirection direction = MapDirection::forward;
    double rotation = 0.0;
};

// Extremal map of the solved family: forward uses P = q, inverse P = q^{-1}.
RadialMap nitsche_map(std::shared_ptr<const NitscheProfile> profile,
                      MapDirection direction, double rotation = 0.0);

// P(s) = scale * s^alpha on [s_lo, s_hi]
RadialMap power_map(double s_lo, double s_hi, double alpha, double scale,
                    MapDirection direction = MapDirection::forward, double rotation = 0.0);

// Profile from callables, for tests and perturbation studies.
RadialMap generic_map(double s_lo, double s_hi,
                      std::function<double(double)> value,
                      std::function<double(double)> deriv,
                      std::function<double(double)> second = {},
                      MapDirection direction = MapDirection::forward, double rotation = 0.0);

std::complex<double> map_eval(const RadialMap& map, std::complex<double> z);

struct PointDerivatives {
    std::complex<double> f_s, f_t;     // polar partials
    std::complex<double> f_z, f_zbar;  // Wirtinger derivatives
    double J = 0.0;                    // Jacobian
    double K = 1.0;                    // distortion, >= 1 where J > 0
    bool degenerate = false;           // J = 0 convention: K set to 1
};

PointDerivatives map_derivatives(const RadialMap& map, std::complex<double> z);

// distortion from the Wirtinger pair, for cross-checking against K above
double distortion_from_wirtinger(const PointDerivatives& d);

double s_phi_prime(const RadialMap& map, double s);   // s P'(s)/P(s)
double distortion_at(const RadialMap& map, double s); // (s Phi' + 1/(s Phi'))/2

struct ResidualResult {
    double value = 0.0;
    bool used_fd = false; // second derivative came from finite differences
};

// Residual of the radial harmonic-map equation
//   s^2 g'' + s g' - g + (rho'(g)/rho(g)) (s^2 g'^2 - g^2) = 0
// for an inverse-direction map g = P, normalized by max(1, |g|).
ResidualResult harmonicity_residual(const RadialMap& map, const RadialMetric& m, double s);

// Max discrete Cauchy-Riemann residual of the Hopf differential
// rho^2(h) h_z conj(h_zbar) over an n_r x n_t polar grid; decays like
// O(step^2) for harmonic maps.  Requires an inverse-direction map.
double hopf_check(const RadialMap& map, const RadialMetric& m, int n_r, int n_t);

} // namespace annuli
