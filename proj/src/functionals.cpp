#include "annuli/functionals.hpp"
#include "annuli/errors.hpp"
#include "annuli/numerics.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace annuli {

namespace {

QuadratureConfig tight_cfg(bool singular = false) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    cfg.singular_lo = singular;
    return cfg;
}

// Distortion integrand of a solved-family forward map in the u = sqrt(s - tau)
// variable:
//   s rho^2 K(s) ds = u (s^2 rho^3 / sqrt(rad) + rho sqrt(rad)) du,
// rad = (s rho)^2 + c.  srho2_above_tau already evaluates rad without
// cancellation, so the critical endpoint only needs its finite limit.
double nitsche_distortion_integrand_u(const NitscheProfile& p, const RadialMetric& m, double u) {
    const double d = u * u;
    const double s = p.tau() + d;
    const double rho = m.rho(s);
    const double rad = p.srho2_above_tau(s) + p.c_offset();
    if (rad <= 0.0) // u = 0 at the critical parameter
        return s * s * rho * rho * rho / std::sqrt(p.srho2_prime_tau());
    const double root = std::sqrt(rad);
    return u * (s * s * rho * rho * rho / root + rho * root);
}

} // namespace

const char* to_string(Regime r) {
    return r == Regime::nitsche_range ? "nitsche_range" : "fat";
}

RegimeVerdict classify_regime(const RadialMetric& m, const AnnulusGeometry& geom) {
    geom.validate();
    const BoundResult b = nitsche_bound(m, geom);
    RegimeVerdict v;
    v.r_star = b.r_star;
    v.degenerate = b.degenerate;
    v.near_boundary = std::fabs(geom.r - b.r_star) < 1e-8;
    v.regime = geom.r >= b.r_star ? Regime::nitsche_range : Regime::fat;
    return v;
}

ValueWithError mean_distortion_radial(const RadialMap& map, const RadialMetric& m) {
    if (map.direction != MapDirection::forward)
        throw PreconditionError("mean_distortion_radial: needs a forward map");
    const RadialProfile& prof = *map.profile;
    const double tau = prof.lo(), sigma = prof.hi();

    if (const NitscheProfile* p = prof.nitsche()) {
        const double u_max = std::sqrt(sigma - tau);
        const QuadratureResult q = integrate(
            [&](double u) { return nitsche_distortion_integrand_u(*p, m, u); },
            0.0, u_max, tight_cfg(p->is_critical()));
        return {2.0 * M_PI * q.value, 2.0 * M_PI * q.err_est};
    }

    auto integrand = [&](double s) {
        const double sp = s_phi_prime(map, s);
        if (!(sp > 0.0)) {
            std::ostringstream msg;
            msg << "mean_distortion_radial: s Phi'(s) <= 0 at s = " << s;
            throw EvaluationError(msg.str());
        }
        const double rho = m.rho(s);
        return s * rho * rho * 0.5 * (sp + 1.0 / sp);
    };
    const QuadratureResult q = integrate(integrand, tau, sigma, tight_cfg());
    return {2.0 * M_PI * q.value, 2.0 * M_PI * q.err_est};
}

ValueWithError energy_radial(const RadialMap& map, const RadialMetric& m) {
    if (map.direction != MapDirection::inverse)
        throw PreconditionError("energy_radial: needs an inverse-direction map");
    const RadialProfile& prof = *map.profile;
    auto integrand = [&](double s) {
        const double g = prof.value(s);
        const double gp = prof.deriv(s);
        const double rho = m.rho(g);
        return (s * gp * gp + g * g / s) * rho * rho;
    };
    const QuadratureResult q = integrate(integrand, prof.lo(), prof.hi(), tight_cfg());
    return {M_PI * q.value, M_PI * q.err_est};
}

FunctionalReport theorem2_lower_bound(const RadialMetric& m, const AnnulusGeometry& geom) {
    geom.validate();
    if (is_degenerate_on(m, geom.tau, geom.sigma))
        throw DegeneracyError("theorem2_lower_bound: degenerate metric has no fat regime");

    auto crit = std::make_shared<NitscheProfile>(critical_profile(m, geom));
    const double r_prime = crit->r_achieved();
    if (geom.r >= r_prime) {
        std::ostringstream msg;
        msg << "theorem2_lower_bound: r = " << geom.r << " >= r' = " << r_prime
            << "; the admissible range applies, use the solved profile";
        throw RegimeError(msg.str());
    }

    const RadialMap f_crit = nitsche_map(crit, MapDirection::forward);
    const ValueWithError k_crit = mean_distortion_radial(f_crit, m);
    const double gap_term = 0.5 * m.srho2(geom.tau) * modulus(geom.r, r_prime);

    FunctionalReport rep;
    rep.regime = Regime::fat;
    rep.k_critical = k_crit.value;
    rep.gap_term = gap_term;
    rep.lower_bound = k_crit.value + gap_term;
    rep.K_rho = rep.lower_bound; // infimum value; not attained in this regime
    rep.E_rho = rep.lower_bound;
    rep.gap = 0.0;
    rep.quadrature_err = k_crit.err + crit->quad_err();
    rep.r_star = r_prime;
    rep.c = crit->c();
    return rep;
}

FunctionalReport functional_report(const RadialMetric& m, const AnnulusGeometry& geom) {
    const RegimeVerdict v = classify_regime(m, geom);
    if (v.regime == Regime::fat) return theorem2_lower_bound(m, geom);

    auto prof = std::make_shared<NitscheProfile>(solve_c(m, geom));
    const RadialMap fwd = nitsche_map(prof, MapDirection::forward);
    const RadialMap inv = nitsche_map(prof, MapDirection::inverse);
    const ValueWithError k = mean_distortion_radial(fwd, m);
    const ValueWithError e = energy_radial(inv, m);

    FunctionalReport rep;
    rep.regime = Regime::nitsche_range;
    rep.K_rho = k.value;
    rep.E_rho = e.value;
    rep.lower_bound = k.value;
    rep.gap = 0.0;
    rep.quadrature_err = k.err + e.err + prof->quad_err();
    rep.k_critical = 0.0;
    rep.gap_term = 0.0;
    rep.r_star = v.r_star;
    rep.c = prof->c();
    return rep;
}

FikinResult fikin_bound_check(const RadialMetric& m, const AnnulusGeometry& geom) {
    geom.validate();
    if (!m.defined_at_zero)
        throw PreconditionError("fikin_bound_check: metric must extend to the origin");

    FikinResult out;
    int pos = 0, neg = 0;
    for (int i = 0; i < 64; ++i) {
        const double s = geom.sigma * (i + 0.5) / 64.0;
        if (!(s > 0.0)) continue;
        const double k = gauss_curvature(m, s);
        if (k > 1e-10) ++pos;
        if (k < -1e-10) ++neg;
    }
    if ((pos > 0) == (neg > 0)) { // mixed sign or identically flat
        out.inconclusive = true;
        return out;
    }
    out.curvature_sign = pos > 0 ? 1 : -1;

    auto arc = [&](double x) {
        return integrate([&](double t) { return m.rho(t); }, 0.0, x, tight_cfg()).value;
    };
    const double h_tau = arc(geom.tau);
    const double h_sigma = arc(geom.sigma);
    const double t_eval = out.curvature_sign < 0 ? geom.tau : geom.sigma;
    const double srho_deriv = m.rho(t_eval) + t_eval * m.rho_prime(t_eval);
    const double log_r = std::log(geom.r);

    out.lhs = h_sigma / h_tau;
    out.rhs = 1.0 + geom.tau / (2.0 * h_tau) * log_r * log_r * srho_deriv;
    out.holds = out.lhs >= out.rhs - 1e-10 * std::max(1.0, std::fabs(out.rhs));
    return out;
}

} // namespace annuli
