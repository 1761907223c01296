#pragma once

#include "annuli/functionals.hpp"
#include "annuli/maps.hpp"
#include "annuli/metric.hpp"
#include "annuli/nitsche.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace annuli {

// Finite-distortion test map on the annulus (tau, sigma), sampled in polar
// coordinates.  Partials may be supplied analytically; otherwise they come
// from central differences with the given step.
struct TestMap {
    std::function<std::complex<double>(double s, double t)> f;
    std::function<std::complex<double>(double s, double t)> f_s; // optional
    std::function<std::complex<double>(double s, double t)> f_t; // optional
    double fd_step = 1e-6;
    bool analytic() const { return f_s && f_t; }
};

struct LepoReport {
    double max_violation_first = 0.0;  // distortion bound in terms of |f_t|
    double max_violation_second = 0.0; // distortion bound in terms of |f_s|
    double max_equality_residual = 0.0; // relative size of f_s + i phi' f_t
    int checked = 0;
    int excluded = 0; // nodes with non-positive Jacobian
    bool orientation_warning = false;
};

// Pointwise distortion inequalities for an arbitrary finite-distortion map
// against a monotone weight phi': violations beyond discretization error mean
// a bug, equality holds exactly when f_s = -i phi'(s) f_t.
LepoReport lepo_check(const TestMap& f, const std::function<double(double)>& phi_prime,
                      double tau, double sigma, int n_r, int n_t);

struct RadialMinResult {
    std::vector<double> s;      // nodes on [tau, sigma]
    std::vector<double> slope;  // minimizing log-profile slopes Phi'(s_i)
    double c_discrete = 0.0;    // -2 lambda from the multiplier
    double discrete_objective = 0.0;
    double value = 0.0;     // certified mean distortion of the rebuilt competitor map
    double value_err = 0.0;
};

// Minimizes the discretized mean distortion over radial stretchings with the
// modulus constraint Integral Phi' = log(1/r); the per-node optimum reduces to
// one scalar Lagrange multiplier.  `value` is the true functional of the
// reconstructed (piecewise-linear slope) competitor, an upper bound for the
// extremal value.
RadialMinResult radial_discrete_minimize(const RadialMetric& m, const AnnulusGeometry& geom,
                                         int n_nodes);

// Log-polar mesh over the source annulus A(r, 1) with complex node values.
// Boundary rings stay on the image circles |w| = tau and |w| = sigma.
struct MeshState {
    int n_r = 0; // radial cells; n_r + 1 rings
    int n_t = 0; // angular nodes (periodic)
    double r = 0.0, tau = 0.0, sigma = 0.0;
    std::vector<std::complex<double>> v; // (n_r + 1) * n_t, ring-major
    std::complex<double>& at(int j, int k) { return v[static_cast<std::size_t>(j) * n_t + k]; }
    const std::complex<double>& at(int j, int k) const {
        return v[static_cast<std::size_t>(j) * n_t + k];
    }
    double ring_radius(int j) const; // source radius of ring j (log-spaced)
};

MeshState init_mesh(const AnnulusGeometry& geom, int n_r, int n_t);

double mesh_energy(const RadialMetric& m, const MeshState& state);

struct MeshRunReport {
    int iterations = 0;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    bool monotone = true;
    double positive_jacobian_fraction = 0.0;
    bool stagnated = false;
};

// Projected gradient descent with backtracking line search; energy is
// non-increasing across accepted steps and boundary nodes are reprojected to
// their circles after every trial step.
MeshRunReport mesh_energy_minimize(const RadialMetric& m, MeshState& state, int max_iters);

// mean |v| per ring
std::vector<double> mesh_radial_profile(const MeshState& state);

// K_rho, E_rho and the max harmonicity residual are unchanged under pre- and
// post-rotation of a solved-family map.
bool rotation_invariance_check(const std::shared_ptr<const NitscheProfile>& profile,
                               const RadialMetric& m, unsigned seed);

} // namespace annuli
