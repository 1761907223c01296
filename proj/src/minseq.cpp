#include "annuli/minseq.hpp"
#include "annuli/errors.hpp"
#include "annuli/numerics.hpp"

#include <cmath>
#include <sstream>

namespace annuli {

namespace {

// forward piecewise profile: inner power piece on [tau, s_n], critical piece above
class SplicedProfile final : public RadialProfile {
public:
    SplicedProfile(std::shared_ptr<const NitscheProfile> crit, double r, int n, double s_n)
        : crit_(std::move(crit)), r_(r), n_(n), s_n_(s_n),
          tau_(crit_->tau()), scale_(r / std::pow(tau_, n)) {}

    double lo() const override { return tau_; }
    double hi() const override { return crit_->sigma(); }
    double value(double s) const override {
        if (s <= s_n_) return scale_ * std::pow(s, n_);
        return crit_->q(s);
    }
    double deriv(double s) const override {
        if (s <= s_n_) return scale_ * n_ * std::pow(s, n_ - 1.0);
        return crit_->q(s) * crit_->phi_prime(s);
    }
    bool has_second() const override { return true; }
    double second(double s) const override {
        if (s <= s_n_) return scale_ * n_ * (n_ - 1.0) * std::pow(s, n_ - 2.0);
        const double fp = crit_->phi_prime(s);
        return crit_->q(s) * (fp * fp + crit_->phi_second(s));
    }
    const NitscheProfile* nitsche() const override { return nullptr; }

private:
    std::shared_ptr<const NitscheProfile> crit_;
    double r_;
    double n_;
    double s_n_;
    double tau_;
    double scale_;
};

void require_fat(const NitscheProfile& crit, double r) {
    if (!(r < crit.r_achieved())) {
        std::ostringstream msg;
        msg << "minimizing sequence requires the fat regime: r = " << r
            << " is not below r' = " << crit.r_achieved();
        throw RegimeError(msg.str());
    }
}

} // namespace

double splice_radius(const NitscheProfile& crit, double r, int n) {
    require_fat(crit, r);
    const double tau = crit.tau(), sigma = crit.sigma();
    const double log_r = std::log(r);
    auto p = [&](double s) { return crit.phi(s) - log_r - n * std::log(s / tau); };
    if (!(p(sigma) < 0.0)) {
        const int n_min = static_cast<int>(std::ceil(-log_r / std::log(sigma / tau))) + 1;
        std::ostringstream msg;
        msg << "splice_radius: no splice for n = " << n << "; need roughly n >= " << n_min;
        throw BracketError(msg.str());
    }
    RootConfig rc;
    rc.x_tol = 1e-14 * std::max(1.0, sigma);
    rc.f_tol = 1e-13;
    return find_root(p, tau, sigma, rc);
}

double splice_radius(const RadialMetric& m, const AnnulusGeometry& geom, int n) {
    geom.validate();
    const NitscheProfile crit = critical_profile(m, geom);
    return splice_radius(crit, geom.r, n);
}

MinSeqElement build_element(std::shared_ptr<const NitscheProfile> crit,
                            const AnnulusGeometry& geom, int n) {
    const double s_n = splice_radius(*crit, geom.r, n);
    const double tau = crit->tau(), sigma = crit->sigma();
    const RadialMetric& m = crit->metric();

    MinSeqElement el;
    el.n = n;
    el.s_n = s_n;
    el.map = RadialMap{std::make_shared<SplicedProfile>(crit, geom.r, n, s_n),
                       MapDirection::forward, 0.0};

    // inner piece has constant distortion (n + 1/n)/2
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    const QuadratureResult inner = integrate(
        [&](double s) { const double rho = m.rho(s); return s * rho * rho; }, tau, s_n, cfg);

    // outer piece: critical-profile distortion in the u = sqrt(s - tau) variable
    const double u_n = std::sqrt(s_n - tau), u_max = std::sqrt(sigma - tau);
    const QuadratureResult outer = integrate(
        [&](double u) {
            const double d = u * u;
            const double s = tau + d;
            const double rho = m.rho(s);
            const double rad = crit->srho2_above_tau(s);
            const double root = std::sqrt(rad);
            return u * (s * s * rho * rho * rho / root + rho * root);
        },
        u_n, u_max, cfg);

    const double k_inner = 0.5 * (n + 1.0 / n);
    el.K_rho_n = 2.0 * M_PI * (outer.value + k_inner * inner.value);
    el.quad_err = 2.0 * M_PI * (outer.err_est + k_inner * inner.err_est);
    return el;
}

MinSeqElement build_element(const RadialMetric& m, const AnnulusGeometry& geom, int n) {
    geom.validate();
    auto crit = std::make_shared<NitscheProfile>(critical_profile(m, geom));
    return build_element(crit, geom, n);
}

LimitStudy limit_study(const RadialMetric& m, const AnnulusGeometry& geom,
                       const std::vector<int>& n_list) {
    geom.validate();
    auto crit = std::make_shared<NitscheProfile>(critical_profile(m, geom));
    require_fat(*crit, geom.r);

    LimitStudy study;
    const FunctionalReport bound = theorem2_lower_bound(m, geom);
    study.bound = bound.lower_bound;
    study.r_prime = crit->r_achieved();
    study.tau_log_ratio = geom.tau * std::log(study.r_prime / geom.r);

    for (int n : n_list) {
        const MinSeqElement el = build_element(crit, geom, n);
        LimitRow row;
        row.n = n;
        row.s_n = el.s_n;
        row.n_excess = n * (el.s_n - geom.tau);
        row.K_rho_n = el.K_rho_n;
        row.gap = el.K_rho_n - study.bound;
        study.rows.push_back(row);
    }

    // least-squares fit of log gap = log C - rate log n over the ladder
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const LimitRow& row : study.rows) {
        if (row.gap <= 0.0) continue;
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.gap);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) {
        const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        study.fitted_rate = -slope;
        const LimitRow& last = study.rows.back();
        study.fitted_C = last.gap * last.n;
    }
    return study;
}

} // namespace annuli
