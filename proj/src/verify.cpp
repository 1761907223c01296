#include "annuli/verify.hpp"
#include "annuli/errors.hpp"
#include "annuli/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace annuli {

namespace {

using cplx = std::complex<double>;

struct Partials {
    cplx f_s, f_t;
};

Partials partials_at(const TestMap& map, double s, double t) {
    if (map.analytic()) return {map.f_s(s, t), map.f_t(s, t)};
    const double h = map.fd_step;
    return {(map.f(s + h, t) - map.f(s - h, t)) / (2.0 * h),
            (map.f(s, t + h) - map.f(s, t - h)) / (2.0 * h)};
}

} // namespace

LepoReport lepo_check(const TestMap& f, const std::function<double(double)>& phi_prime,
                      double tau, double sigma, int n_r, int n_t) {
    if (n_r < 4 || n_t < 4) throw ConfigError("lepo_check: grid too coarse");
    LepoReport rep;
    for (int i = 0; i < n_r; ++i) {
        // interior log-spaced radii
        const double s = tau * std::pow(sigma / tau, (i + 0.5) / n_r);
        const double fp = phi_prime(s);
        if (!(fp > 0.0)) throw PreconditionError("lepo_check: phi' must be positive");
        for (int k = 0; k < n_t; ++k) {
            const double t = 2.0 * M_PI * (k + 0.5) / n_t;
            const auto [f_s, f_t] = partials_at(f, s, t);
            const double jac_s = std::imag(f_t * std::conj(f_s)); // s * J_f
            if (!(jac_s > 1e-14)) {
                ++rep.excluded;
                continue;
            }
            ++rep.checked;
            const double K = (s * std::norm(f_s) + std::norm(f_t) / s) / (2.0 * jac_s);
            const double sf = s * fp;
            // 2 s^2 J_f = 2 s * jac_s
            const double first = sf + (1.0 - sf * sf) * std::norm(f_t) / (2.0 * s * jac_s);
            const double second =
                1.0 / sf + (sf * sf - 1.0) / (fp * fp) * std::norm(f_s) / (2.0 * s * jac_s);
            rep.max_violation_first = std::max(rep.max_violation_first, first - K);
            rep.max_violation_second = std::max(rep.max_violation_second, second - K);
            const double eq = std::abs(f_s + cplx(0.0, 1.0) * fp * f_t) /
                              (std::abs(f_s) + fp * std::abs(f_t) + 1e-300);
            rep.max_equality_residual = std::max(rep.max_equality_residual, eq);
        }
    }
    const int total = rep.checked + rep.excluded;
    rep.orientation_warning = total > 0 && rep.excluded > total / 100;
    return rep;
}

RadialMinResult radial_discrete_minimize(const RadialMetric& m, const AnnulusGeometry& geom,
                                         int n_nodes) {
    geom.validate();
    if (!(geom.r < 1.0)) throw GeometryError("radial_discrete_minimize: r must be < 1");
    if (n_nodes < 8) throw ConfigError("radial_discrete_minimize: need at least 8 nodes");

    const double tau = geom.tau, sigma = geom.sigma;
    const double L = std::log(1.0 / geom.r);
    const int n = n_nodes;
    const double dx = (sigma - tau) / (n - 1);

    RadialMinResult out;
    out.s.resize(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n)), rho(static_cast<std::size_t>(n)),
        g(static_cast<std::size_t>(n));
    double g_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double s = tau + dx * i;
        out.s[static_cast<std::size_t>(i)] = s;
        w[static_cast<std::size_t>(i)] = (i == 0 || i == n - 1) ? 0.5 * dx : dx;
        rho[static_cast<std::size_t>(i)] = m.rho(s);
        g[static_cast<std::size_t>(i)] = m.srho2(s);
        g_min = std::min(g_min, g[static_cast<std::size_t>(i)]);
    }

    // slopes at the per-node optimum: p_i = rho_i / sqrt(G_i - G_min + zeta),
    // zeta > 0 the shifted multiplier; the constraint sum is decreasing in zeta
    auto constraint = [&](double zeta) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            sum += w[k] * rho[k] / std::sqrt(g[k] - g_min + zeta);
        }
        return sum - L;
    };

    double z_lo = g_min, z_hi = g_min;
    while (constraint(z_lo) < 0.0) {
        z_lo *= 0.25;
        if (z_lo < 1e-280) throw AccuracyError("radial_discrete_minimize: constraint infeasible", 0, 0);
    }
    while (constraint(z_hi) > 0.0) {
        z_hi *= 4.0;
        if (z_hi > 1e280) throw GeometryError("radial_discrete_minimize: constraint unreachable");
    }
    RootConfig rc;
    rc.x_tol = 1e-14 * std::max(1.0, z_hi);
    rc.f_tol = 1e-13;
    const double zeta = find_root(constraint, z_lo, z_hi, rc);
    // p_i = rho_i / sqrt(G_i + c) identifies c = zeta - G_min
    out.c_discrete = zeta - g_min;

    out.slope.resize(static_cast<std::size_t>(n));
    out.discrete_objective = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double p = rho[k] / std::sqrt(g[k] - g_min + zeta);
        out.slope[k] = p;
        const double sp = out.s[k] * p;
        out.discrete_objective += w[k] * out.s[k] * rho[k] * rho[k] * 0.5 * (sp + 1.0 / sp);
    }
    out.discrete_objective *= 2.0 * M_PI;

    // true functional of the reconstructed competitor: piecewise-linear slopes
    // keep the trapezoid constraint exact, so the rebuilt map attains r
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    double value = 0.0, err = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double s0 = out.s[k], s1 = out.s[k + 1];
        const double p0 = out.slope[k], p1 = out.slope[k + 1];
        const QuadratureResult qr = integrate(
            [&](double s) {
                const double p = p0 + (p1 - p0) * (s - s0) / (s1 - s0);
                const double rr = m.rho(s);
                const double sp = s * p;
                return s * rr * rr * 0.5 * (sp + 1.0 / sp);
            },
            s0, s1, cfg);
        value += qr.value;
        err += qr.err_est;
    }
    out.value = 2.0 * M_PI * value;
    out.value_err = 2.0 * M_PI * err;
    return out;
}

double MeshState::ring_radius(int j) const {
    const double x = std::log(r) * (1.0 - static_cast<double>(j) / n_r);
    return std::exp(x);
}

MeshState init_mesh(const AnnulusGeometry& geom, int n_r, int n_t) {
    geom.validate();
    if (n_r < 8 || n_t < 8) throw ConfigError("init_mesh: mesh too coarse");
    MeshState st;
    st.n_r = n_r;
    st.n_t = n_t;
    st.r = geom.r;
    st.tau = geom.tau;
    st.sigma = geom.sigma;
    st.v.resize(static_cast<std::size_t>(n_r + 1) * n_t);
    const double log_ratio = std::log(geom.sigma / geom.tau);
    const double log_r = std::log(geom.r);
    for (int j = 0; j <= n_r; ++j) {
        const double x = log_r * (1.0 - static_cast<double>(j) / n_r); // log source radius
        const double frac = (x - log_r) / (0.0 - log_r);
        const double target = geom.tau * std::exp(log_ratio * frac);
        for (int k = 0; k < n_t; ++k) {
            const double t = 2.0 * M_PI * k / n_t;
            st.at(j, k) = std::polar(target, t);
        }
    }
    return st;
}

namespace {

struct MeshGeometry {
    double dx, dt;
};

MeshGeometry mesh_geom(const MeshState& st) {
    return {-std::log(st.r) / st.n_r, 2.0 * M_PI / st.n_t};
}

// Discrete weighted Dirichlet energy in log-polar coordinates:
//   E = Sum rho^2(|mid|) |dv|^2 / step^2 * (dx dt / 2) over both edge families.
double energy_impl(const RadialMetric& m, const MeshState& st, bool* ok) {
    const auto [dx, dt] = mesh_geom(st);
    const double cell = 0.5 * dx * dt;
    double e = 0.0;
    *ok = true;
    for (int j = 0; j <= st.n_r; ++j) {
        const double row_w = (j == 0 || j == st.n_r) ? 0.5 : 1.0;
        for (int k = 0; k < st.n_t; ++k) {
            const cplx a = st.at(j, k);
            // angular edge
            const cplx b = st.at(j, (k + 1) % st.n_t);
            const double mid_t = std::abs(0.5 * (a + b));
            if (!m.contains(mid_t)) { *ok = false; return 0.0; }
            const double rho_t = m.rho(mid_t);
            e += row_w * rho_t * rho_t * std::norm(b - a) / (dt * dt) * cell;
            // radial edge
            if (j < st.n_r) {
                const cplx c = st.at(j + 1, k);
                const double mid_x = std::abs(0.5 * (a + c));
                if (!m.contains(mid_x)) { *ok = false; return 0.0; }
                const double rho_x = m.rho(mid_x);
                e += rho_x * rho_x * std::norm(c - a) / (dx * dx) * cell;
            }
        }
    }
    return e;
}

void gradient_impl(const RadialMetric& m, const MeshState& st, std::vector<cplx>& grad) {
    const auto [dx, dt] = mesh_geom(st);
    const double cell = 0.5 * dx * dt;
    grad.assign(st.v.size(), cplx(0.0, 0.0));
    auto idx = [&](int j, int k) { return static_cast<std::size_t>(j) * st.n_t + k; };
    for (int j = 0; j <= st.n_r; ++j) {
        const double row_w = (j == 0 || j == st.n_r) ? 0.5 : 1.0;
        for (int k = 0; k < st.n_t; ++k) {
            const cplx a = st.at(j, k);
            {
                const int k2 = (k + 1) % st.n_t;
                const cplx b = st.at(j, k2);
                const cplx mid = 0.5 * (a + b);
                const double am = std::abs(mid);
                const double rho = m.rho(am);
                const double drho = m.rho_prime(am);
                const double coef = row_w * cell / (dt * dt);
                const cplx d = b - a;
                const cplx mhat = am > 0.0 ? mid / am : cplx(0.0, 0.0);
                const cplx common = coef * rho * drho * std::norm(d) * mhat;
                grad[idx(j, k)] += common - coef * rho * rho * 2.0 * d;
                grad[idx(j, k2)] += common + coef * rho * rho * 2.0 * d;
            }
            if (j < st.n_r) {
                const cplx c = st.at(j + 1, k);
                const cplx mid = 0.5 * (a + c);
                const double am = std::abs(mid);
                const double rho = m.rho(am);
                const double drho = m.rho_prime(am);
                const double coef = cell / (dx * dx);
                const cplx d = c - a;
                const cplx mhat = am > 0.0 ? mid / am : cplx(0.0, 0.0);
                const cplx common = coef * rho * drho * std::norm(d) * mhat;
                grad[idx(j, k)] += common - coef * rho * rho * 2.0 * d;
                grad[idx(j + 1, k)] += common + coef * rho * rho * 2.0 * d;
            }
        }
    }
}

void project_boundary(MeshState& st) {
    for (int k = 0; k < st.n_t; ++k) {
        cplx& inner = st.at(0, k);
        const double ai = std::abs(inner);
        inner = ai > 0.0 ? inner * (st.tau / ai) : std::polar(st.tau, 2.0 * M_PI * k / st.n_t);
        cplx& outer = st.at(st.n_r, k);
        const double ao = std::abs(outer);
        outer = ao > 0.0 ? outer * (st.sigma / ao) : std::polar(st.sigma, 2.0 * M_PI * k / st.n_t);
    }
}

double positive_jacobian_fraction(const MeshState& st) {
    int pos = 0, total = 0;
    for (int j = 0; j < st.n_r; ++j) {
        for (int k = 0; k < st.n_t; ++k) {
            const int k2 = (k + 1) % st.n_t;
            const cplx dxe = st.at(j + 1, k) - st.at(j, k);
            const cplx dte = st.at(j, k2) - st.at(j, k);
            // orientation of the pushed-forward cell
            if (std::imag(std::conj(dxe) * dte) > 0.0) ++pos;
            ++total;
        }
    }
    return total > 0 ? static_cast<double>(pos) / total : 0.0;
}

} // namespace

double mesh_energy(const RadialMetric& m, const MeshState& st) {
    bool ok = true;
    const double e = energy_impl(m, st, &ok);
    if (!ok) throw EvaluationError("mesh_energy: node midpoint left the metric domain");
    return e;
}

MeshRunReport mesh_energy_minimize(const RadialMetric& m, MeshState& st, int max_iters) {
    if (st.n_r < 8 || st.n_t < 8) throw ConfigError("mesh_energy_minimize: mesh too coarse");
    project_boundary(st);

    MeshRunReport rep;
    bool ok = true;
    double energy = energy_impl(m, st, &ok);
    if (!ok) throw EvaluationError("mesh_energy_minimize: invalid initial mesh");
    rep.initial_energy = energy;

    std::vector<cplx> grad;
    std::vector<cplx> trial(st.v.size());
    double step = 1e-3;

    for (int it = 0; it < max_iters; ++it) {
        gradient_impl(m, st, grad);
        double gnorm2 = 0.0;
        for (const cplx& g : grad) gnorm2 += std::norm(g);
        if (gnorm2 * step * step < 1e-30) { rep.iterations = it; break; }

        bool accepted = false;
        step *= 1.3; // optimistic growth, backtrack below
        for (int bt = 0; bt < 48; ++bt) {
            for (std::size_t i = 0; i < st.v.size(); ++i) trial[i] = st.v[i] - step * grad[i];
            MeshState cand = st;
            cand.v = trial;
            project_boundary(cand);
            bool cand_ok = true;
            const double cand_energy = energy_impl(m, cand, &cand_ok);
            if (cand_ok && cand_energy <= energy - 1e-14 * std::fabs(energy)) {
                st.v.swap(cand.v);
                energy = cand_energy;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        rep.iterations = it + 1;
        if (!accepted) {
            rep.stagnated = true;
            break;
        }
    }

    rep.final_energy = energy;
    rep.monotone = energy <= rep.initial_energy + 1e-14 * std::fabs(rep.initial_energy);
    rep.positive_jacobian_fraction = positive_jacobian_fraction(st);
    return rep;
}

std::vector<double> mesh_radial_profile(const MeshState& st) {
    std::vector<double> prof(static_cast<std::size_t>(st.n_r + 1), 0.0);
    for (int j = 0; j <= st.n_r; ++j) {
        double sum = 0.0;
        for (int k = 0; k < st.n_t; ++k) sum += std::abs(st.at(j, k));
        prof[static_cast<std::size_t>(j)] = sum / st.n_t;
    }
    return prof;
}

bool rotation_invariance_check(const std::shared_ptr<const NitscheProfile>& profile,
                               const RadialMetric& m, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

    auto scalars = [&](double rot) {
        const RadialMap fwd = nitsche_map(profile, MapDirection::forward, rot);
        const RadialMap inv = nitsche_map(profile, MapDirection::inverse, rot);
        const double K = mean_distortion_radial(fwd, m).value;
        const double E = energy_radial(inv, m).value;
        double res = 0.0;
        for (int i = 1; i <= 32; ++i) {
            const double s = inv.profile->lo() +
                             (inv.profile->hi() - inv.profile->lo()) * i / 33.0;
            res = std::max(res, harmonicity_residual(inv, m, s).value);
        }
        return std::array<double, 3>{K, E, res};
    };

    const auto base = scalars(0.0);
    for (int trial = 0; trial < 3; ++trial) {
        const auto rotated = scalars(angle(rng));
        for (int i = 0; i < 3; ++i) {
            const double tol = 1e-12 * std::max(1.0, std::fabs(base[static_cast<std::size_t>(i)]));
            if (std::fabs(rotated[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(i)]) > tol)
                return false;
        }
    }
    return true;
}

} // namespace annuli
