#include "annuli/nitsche.hpp"
#include "annuli/errors.hpp"
#include "annuli/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace annuli {

namespace {

// distance below which (s rho)^2 - (tau rho(tau))^2 switches to its Taylor form
double taylor_switch(double tau) { return 1e-5 * std::max(1.0, tau); }

void require_regular(const RadialMetric& m, double tau, double sigma) {
    const RegularityReport rep = check_regularity(m, tau, sigma);
    if (!rep.is_regular) {
        std::ostringstream msg;
        msg << "metric '" << m.name << "' is not regular on (" << tau << ", " << sigma
            << "): inf s*rho = " << rep.inf_s_rho << " at s = " << rep.inf_location
            << " vs boundary limit " << rep.boundary_limit;
        throw RegularityError(msg.str());
    }
}

// Shared machinery for the c-integrals.  All integrals run in the variable
// u = sqrt(y - tau): the critical inverse-square-root endpoint disappears and
// the integrand is a smooth even function of u.
class ProfileState {
public:
    ProfileState(const RadialMetric& m, double tau, double sigma)
        : m_(m), tau_(tau), sigma_(sigma), u_max_(std::sqrt(sigma - tau)) {
        g_tau_ = m.srho2(tau);
        gp_tau_ = m.srho2_prime(tau);
        // second derivative of (s rho)^2 at tau, analytic when rho'' exists
        if (m.has_second_deriv()) {
            const double r = m.rho(tau), rp = m.rho_prime(tau), rpp = m.rho_second(tau);
            gpp_tau_ = 2.0 * r * r + 8.0 * tau * r * rp +
                       2.0 * tau * tau * (rp * rp + r * rpp);
        } else {
            const double h = 1e-6 * std::max(1.0, tau);
            gpp_tau_ = (m.srho2_prime(tau + h) - m.srho2_prime(std::max(tau - h, tau * 0.5))) /
                       (h + std::min(h, tau * 0.5));
        }
    }

    double g_above_tau(double s) const {
        const double d = s - tau_;
        if (d <= 0.0) return 0.0;
        if (d > taylor_switch(tau_)) {
            const double direct = m_.srho2(s) - g_tau_;
            if (direct > 0.0) return direct;
        }
        return d * (gp_tau_ + 0.5 * gpp_tau_ * d);
    }

    // integrand of Integral rho(y) dy / sqrt((y rho)^2 + c) after y = tau + u^2
    double integrand_u(double u, double e) const {
        const double d = u * u;
        const double y = tau_ + d;
        const double r = m_.rho(y);
        if (d > taylor_switch(tau_)) {
            return 2.0 * u * r / std::sqrt(g_above_tau(y) + e);
        }
        // per-distance radicand keeps u / sqrt(u^2 ...) exact as u -> 0
        const double per_d = gp_tau_ + 0.5 * gpp_tau_ * d + (d > 0.0 ? e / d : 0.0);
        if (d == 0.0) return e > 0.0 ? 0.0 : 2.0 * r / std::sqrt(gp_tau_);
        return 2.0 * r / std::sqrt(per_d);
    }

    // Integral_tau^sigma rho dy / sqrt((y rho)^2 + c), c = c_critical + e
    QuadratureResult total_integral(double e) const {
        QuadratureConfig cfg;
        cfg.rel_tol = 1e-12;
        cfg.abs_tol = 1e-14;
        cfg.singular_lo = (e == 0.0);
        return integrate([&](double u) { return integrand_u(u, e); }, 0.0, u_max_, cfg);
    }

    double tau() const { return tau_; }
    double sigma() const { return sigma_; }
    double u_max() const { return u_max_; }
    double g_tau() const { return g_tau_; }
    double gp_tau() const { return gp_tau_; }
    double gpp_tau() const { return gpp_tau_; }
    const RadialMetric& metric() const { return m_; }

private:
    const RadialMetric& m_;
    double tau_, sigma_, u_max_;
    double g_tau_ = 0.0, gp_tau_ = 0.0, gpp_tau_ = 0.0;
};

} // namespace

void AnnulusGeometry::validate_target() const {
    if (!(0.0 < tau && tau < sigma))
        throw GeometryError("annulus geometry requires 0 < tau < sigma");
}

void AnnulusGeometry::validate() const {
    validate_target();
    if (!(0.0 < r && r < 1.0))
        throw GeometryError("annulus geometry requires 0 < r < 1");
}

double modulus(double p, double q) {
    if (!(0.0 < p && p < q)) throw GeometryError("modulus: requires 0 < p < q");
    return 2.0 * M_PI * std::log(q / p);
}

BoundResult nitsche_bound(const RadialMetric& m, const AnnulusGeometry& geom) {
    geom.validate_target();
    require_regular(m, geom.tau, geom.sigma);
    BoundResult out;
    if (is_degenerate_on(m, geom.tau, geom.sigma)) {
        out.r_star = 0.0;
        out.degenerate = true;
        return out;
    }
    ProfileState st(m, geom.tau, geom.sigma);
    const QuadratureResult q = st.total_integral(0.0);
    out.r_star = std::exp(-q.value);
    out.err_est = q.err_est * out.r_star;
    return out;
}

// ---------------------------------------------------------------------------
// profile construction

class ProfileBuilder {
public:
    static NitscheProfile build(const RadialMetric& m, double tau, double sigma,
                                double e, bool critical) {
        ProfileState st(m, tau, sigma);
        NitscheProfile p;
        p.metric_ = m;
        p.tau_ = tau;
        p.sigma_ = sigma;
        p.srho2_tau_ = st.g_tau();
        p.srho2_prime_tau_ = st.gp_tau();
        p.srho2_second_tau_ = st.gpp_tau();
        p.c_critical_ = -st.g_tau();
        p.e_ = e;
        p.is_critical_ = critical;

        QuadratureConfig cfg;
        cfg.rel_tol = 1e-12;
        cfg.abs_tol = 1e-14;
        cfg.singular_lo = critical;

        const double budget = 2.5e-10;
        std::size_t n = 1025;
        const std::size_t n_cap = 16385;
        std::vector<double> us, psi;
        double quad_err = 0.0;
        MonotoneCubic interp;
        double achieved = 0.0;

        auto tabulate = [&](std::size_t count) {
            us.assign(count, 0.0);
            psi.assign(count, 0.0);
            for (std::size_t i = 0; i < count; ++i)
                us[i] = st.u_max() * static_cast<double>(i) / static_cast<double>(count - 1);
            quad_err = 0.0;
            // suffix sums of certified panel integrals; phi(sigma) = 0
            double acc = 0.0;
            std::vector<double> panel(count - 1);
            for (std::size_t i = 0; i + 1 < count; ++i) {
                const QuadratureResult qr = integrate(
                    [&](double u) { return st.integrand_u(u, e); }, us[i], us[i + 1], cfg);
                panel[i] = qr.value;
                quad_err += qr.err_est;
            }
            for (std::size_t i = count - 1; i-- > 0;) {
                acc += panel[i];
                psi[i] = -acc;
            }
            psi[count - 1] = 0.0;
        };

        // analytic end slopes of psi(u) = phi(tau + u^2)
        auto end_slopes = [&](const std::vector<double>& u) {
            const double at_zero =
                e > 0.0 ? 0.0 : 2.0 * m.rho(tau) / std::sqrt(st.gp_tau());
            const double U = u.back();
            const double at_top = 2.0 * U * m.rho(sigma) /
                                  std::sqrt(st.g_above_tau(sigma) + e);
            return std::make_pair(at_zero, at_top);
        };

        tabulate(n);
        while (true) {
            auto [s0, s1] = end_slopes(us);
            interp = MonotoneCubic(us, psi, s0, s1);
            const std::vector<double> coarse_u = us, coarse_psi = psi;
            const std::size_t n2 = 2 * n - 1;
            tabulate(n2);
            double max_dev = 0.0;
            for (std::size_t i = 1; i < n2; i += 2)
                max_dev = std::max(max_dev, std::fabs(interp.value(us[i]) - psi[i]));
            p.interp_err_ = max_dev;
            if (max_dev <= budget || n2 >= n_cap) {
                auto [t0, t1] = end_slopes(us);
                interp = MonotoneCubic(us, psi, t0, t1);
                achieved = std::exp(psi.front());
                break;
            }
            n = n2;
        }

        p.psi_ = std::move(interp);
        p.quad_err_ = quad_err;
        p.r_achieved_ = achieved;
        return p;
    }
};

double NitscheProfile::phi(double s) const {
    const double span = sigma_ - tau_;
    if (s < tau_ - 1e-12 * span || s > sigma_ + 1e-12 * span) {
        std::ostringstream msg;
        msg << "profile: s = " << s << " outside [" << tau_ << ", " << sigma_ << "]";
        throw DomainError(msg.str());
    }
    const double d = std::max(0.0, s - tau_);
    const double u = std::min(std::sqrt(d), psi_.x_max());
    return psi_.value(u);
}

double NitscheProfile::q(double s) const { return std::exp(phi(s)); }

double NitscheProfile::q_inv(double x) const {
    const double lo = r_achieved_, hi = 1.0;
    if (x < lo * (1.0 - 1e-9) || x > hi * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "profile: modulus " << x << " outside [" << lo << ", 1]";
        throw DomainError(msg.str());
    }
    const double target = std::log(std::min(std::max(x, lo), hi));
    if (target >= 0.0) return sigma_;
    if (target <= psi_.ys().front()) return tau_;
    RootConfig rc;
    rc.x_tol = 1e-14 * std::max(1.0, sigma_);
    rc.f_tol = 1e-15;
    return find_root([&](double s) { return phi(s) - target; }, tau_, sigma_, rc);
}

double NitscheProfile::srho2_above_tau(double s) const {
    const double d = s - tau_;
    if (d <= 0.0) return 0.0;
    if (d > taylor_switch(tau_)) {
        const double direct = metric_.srho2(s) - srho2_tau_;
        if (direct > 0.0) return direct;
    }
    return d * (srho2_prime_tau_ + 0.5 * srho2_second_tau_ * d);
}

double NitscheProfile::phi_prime(double s) const {
    return metric_.rho(s) / std::sqrt(srho2_above_tau(s) + e_);
}

double NitscheProfile::phi_second(double s) const {
    const double rad = srho2_above_tau(s) + e_;
    const double rp = metric_.rho_prime(s);
    return rp / std::sqrt(rad) -
           0.5 * metric_.rho(s) * metric_.srho2_prime(s) / (rad * std::sqrt(rad));
}

std::vector<std::pair<double, double>> NitscheProfile::nodes() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(psi_.size());
    for (std::size_t i = 0; i < psi_.size(); ++i) {
        const double u = psi_.xs()[i];
        out.emplace_back(tau_ + u * u, psi_.ys()[i]);
    }
    return out;
}

NitscheProfile NitscheProfile::from_nodes(const RadialMetric& m, double tau, double sigma,
                                          double c, bool is_critical,
                                          const std::vector<std::pair<double, double>>& nodes) {
    if (nodes.size() < 8) throw PreconditionError("profile nodes: need at least 8 samples");
    NitscheProfile p;
    p.metric_ = m;
    p.tau_ = tau;
    p.sigma_ = sigma;
    ProfileState st(m, tau, sigma);
    p.srho2_tau_ = st.g_tau();
    p.srho2_prime_tau_ = st.gp_tau();
    p.srho2_second_tau_ = st.gpp_tau();
    p.c_critical_ = -st.g_tau();
    p.e_ = is_critical ? 0.0 : c - p.c_critical_;
    p.is_critical_ = is_critical;
    std::vector<double> us, psi;
    us.reserve(nodes.size());
    psi.reserve(nodes.size());
    for (const auto& [s, ph] : nodes) {
        us.push_back(std::sqrt(std::max(0.0, s - tau)));
        psi.push_back(ph);
    }
    us.front() = 0.0;
    p.psi_ = MonotoneCubic(us, psi);
    p.r_achieved_ = std::exp(psi.front());
    p.quad_err_ = 1e-11; // nodes serialized with 12 significant digits
    p.interp_err_ = 1e-9;
    return p;
}

NitscheProfile critical_profile(const RadialMetric& m, const AnnulusGeometry& geom) {
    geom.validate_target();
    require_regular(m, geom.tau, geom.sigma);
    if (is_degenerate_on(m, geom.tau, geom.sigma))
        throw DegeneracyError("critical profile undefined: s*rho(s) is constant on the annulus");
    return ProfileBuilder::build(m, geom.tau, geom.sigma, 0.0, true);
}

NitscheProfile solve_c(const RadialMetric& m, const AnnulusGeometry& geom) {
    geom.validate();
    require_regular(m, geom.tau, geom.sigma);
    if (!(geom.r < 1.0)) throw GeometryError("solve_c: r must be < 1");

    const bool degenerate = is_degenerate_on(m, geom.tau, geom.sigma);
    ProfileState st(m, geom.tau, geom.sigma);
    const double log_r = std::log(geom.r);

    double r_star = 0.0;
    if (!degenerate) {
        r_star = std::exp(-st.total_integral(0.0).value);
        if (geom.r < r_star * (1.0 - 1e-12)) {
            std::ostringstream msg;
            msg << "solve_c: r = " << geom.r << " below the admissible bound r* = " << r_star
                << " (fatness range; use the critical profile)";
            throw RegimeError(msg.str());
        }
        if (geom.r <= r_star * (1.0 + 1e-12)) {
            // closed range: the boundary parameter attains r*
            return ProfileBuilder::build(m, geom.tau, geom.sigma, 0.0, true);
        }
    }

    // F(e) = log R(c_crit + e) - log r, strictly increasing in e
    auto F = [&](double e) { return -st.total_integral(e).value - log_r; };

    double e_lo = 0.0;
    if (degenerate) {
        // R(e) -> 0 as e -> 0+: walk down until F goes negative
        e_lo = 1.0;
        while (F(e_lo) > 0.0) {
            e_lo *= 0.25;
            if (e_lo < 1e-280)
                throw AccuracyError("solve_c: could not bracket the parameter from below", e_lo, 0.0);
        }
    }
    const auto [b_lo, b_hi] = expand_bracket_up(F, e_lo);
    RootConfig rc;
    rc.x_tol = 1e-13 * std::max(1.0, std::fabs(b_hi));
    rc.f_tol = 1e-13;
    const double e = (b_lo == b_hi) ? b_lo : find_root(F, b_lo, b_hi, rc);

    NitscheProfile p = ProfileBuilder::build(m, geom.tau, geom.sigma, e, false);
    if (std::fabs(p.r_achieved() - geom.r) > 1e-9 * std::max(1.0, geom.r)) {
        std::ostringstream msg;
        msg << "solve_c: achieved r = " << p.r_achieved() << " differs from target " << geom.r;
        throw AccuracyError(msg.str(), p.r_achieved(), std::fabs(p.r_achieved() - geom.r));
    }
    return p;
}

} // namespace annuli
