#include "annuli/maps.hpp"
#include "annuli/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace annuli {

namespace {

using cplx = std::complex<double>;

class NitscheForwardProfile final : public RadialProfile {
public:
    explicit NitscheForwardProfile(std::shared_ptr<const NitscheProfile> p) : p_(std::move(p)) {}
    double lo() const override { return p_->tau(); }
    double hi() const override { return p_->sigma(); }
    double value(double s) const override { return p_->q(s); }
    double deriv(double s) const override { return p_->q(s) * p_->phi_prime(s); }
    bool has_second() const override { return true; }
    double second(double s) const override {
        const double fp = p_->phi_prime(s);
        return p_->q(s) * (fp * fp + p_->phi_second(s));
    }
    const NitscheProfile* nitsche() const override { return p_.get(); }

private:
    std::shared_ptr<const NitscheProfile> p_;
};

class NitscheInverseProfile final : public RadialProfile {
public:
    explicit NitscheInverseProfile(std::shared_ptr<const NitscheProfile> p) : p_(std::move(p)) {}
    double lo() const override { return p_->r_achieved(); }
    double hi() const override { return 1.0; }
    double value(double x) const override { return p_->q_inv(x); }
    double deriv(double x) const override {
        const double g = p_->q_inv(x);
        return 1.0 / (x * p_->phi_prime(g)); // inverse-function rule; 0 at a critical endpoint
    }
    bool has_second() const override { return true; }
    double second(double x) const override {
        const double g = p_->q_inv(x);
        const double fp = p_->phi_prime(g);
        const double fpp = p_->phi_second(g);
        if (!std::isfinite(fp) || fp == 0.0) return 0.0;
        return -(1.0 / fp + fpp / (fp * fp * fp)) / (x * x);
    }
    const NitscheProfile* nitsche() const override { return p_.get(); }

private:
    std::shared_ptr<const NitscheProfile> p_;
};

class PowerLawProfile final : public RadialProfile {
public:
    PowerLawProfile(double lo, double hi, double alpha, double scale)
        : lo_(lo), hi_(hi), alpha_(alpha), scale_(scale) {}
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    double value(double s) const override { return scale_ * std::pow(s, alpha_); }
    double deriv(double s) const override { return scale_ * alpha_ * std::pow(s, alpha_ - 1.0); }
    bool has_second() const override { return true; }
    double second(double s) const override {
        return scale_ * alpha_ * (alpha_ - 1.0) * std::pow(s, alpha_ - 2.0);
    }

private:
    double lo_, hi_, alpha_, scale_;
};

class GenericProfile final : public RadialProfile {
public:
    GenericProfile(double lo, double hi, std::function<double(double)> v,
                   std::function<double(double)> d, std::function<double(double)> dd)
        : lo_(lo), hi_(hi), v_(std::move(v)), d_(std::move(d)), dd_(std::move(dd)) {}
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    double value(double s) const override { return v_(s); }
    double deriv(double s) const override { return d_(s); }
    bool has_second() const override { return static_cast<bool>(dd_); }
    double second(double s) const override {
        return dd_ ? dd_(s) : RadialProfile::second(s);
    }

private:
    double lo_, hi_;
    std::function<double(double)> v_, d_, dd_;
};

double checked_radius(const RadialMap& map, cplx z) {
    const double s = std::abs(z);
    const double lo = map.profile->lo(), hi = map.profile->hi();
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    if (s < lo - slack || s > hi + slack) {
        std::ostringstream msg;
        msg << "map: |z| = " << s << " outside source annulus [" << lo << ", " << hi << "]";
        throw DomainError(msg.str());
    }
    return std::min(std::max(s, lo), hi);
}

} // namespace

double RadialProfile::second(double s) const {
    const double h = 1e-6 * std::max(1.0, std::fabs(s));
    const double a = std::max(s - h, lo()), b = std::min(s + h, hi());
    return (deriv(b) - deriv(a)) / (b - a);
}

RadialMap nitsche_map(std::shared_ptr<const NitscheProfile> profile,
                      MapDirection direction, double rotation) {
    RadialMap map;
    map.direction = direction;
    map.rotation = rotation;
    if (direction == MapDirection::forward)
        map.profile = std::make_shared<NitscheForwardProfile>(std::move(profile));
    else
        map.profile = std::make_shared<NitscheInverseProfile>(std::move(profile));
    return map;
}

RadialMap power_map(double s_lo, double s_hi, double alpha, double scale,
                    MapDirection direction, double rotation) {
    if (!(s_lo < s_hi)) throw GeometryError("power_map: requires s_lo < s_hi");
    return {std::make_shared<PowerLawProfile>(s_lo, s_hi, alpha, scale), direction, rotation};
}

RadialMap generic_map(double s_lo, double s_hi,
                      std::function<double(double)> value,
                      std::function<double(double)> deriv,
                      std::function<double(double)> second,
                      MapDirection direction, double rotation) {
    if (!(s_lo < s_hi)) throw GeometryError("generic_map: requires s_lo < s_hi");
    return {std::make_shared<GenericProfile>(s_lo, s_hi, std::move(value), std::move(deriv),
                                             std::move(second)),
            direction, rotation};
}

std::complex<double> map_eval(const RadialMap& map, std::complex<double> z) {
    const double s = checked_radius(map, z);
    const double t = std::arg(z);
    return std::polar(map.profile->value(s), t + map.rotation);
}

PointDerivatives map_derivatives(const RadialMap& map, std::complex<double> z) {
    const double s = checked_radius(map, z);
    const double t = std::arg(z);
    const double P = map.profile->value(s);
    const double Pp = map.profile->deriv(s);

    PointDerivatives d;
    const cplx phase = std::polar(1.0, t + map.rotation);
    d.f_s = Pp * phase;
    d.f_t = cplx(0.0, 1.0) * P * phase;
    const cplx e_mt = std::polar(1.0, -t);
    const cplx e_pt = std::polar(1.0, t);
    d.f_z = 0.5 * e_mt * (d.f_s - cplx(0.0, 1.0) * d.f_t / s);
    d.f_zbar = 0.5 * e_pt * (d.f_s + cplx(0.0, 1.0) * d.f_t / s);
    d.J = std::imag(d.f_t * std::conj(d.f_s)) / s;

    const double sp = s * Pp / P;
    if (d.J <= 0.0 || !(sp > 0.0)) {
        d.K = 1.0;
        d.degenerate = true;
    } else {
        d.K = 0.5 * (sp + 1.0 / sp);
    }
    return d;
}

double distortion_from_wirtinger(const PointDerivatives& d) {
    const double a = std::norm(d.f_z), b = std::norm(d.f_zbar);
    if (a - b <= 0.0) return 1.0;
    return (a + b) / (a - b);
}

double s_phi_prime(const RadialMap& map, double s) {
    return s * map.profile->deriv(s) / map.profile->value(s);
}

double distortion_at(const RadialMap& map, double s) {
    const double sp = s_phi_prime(map, s);
    if (!(sp > 0.0)) throw EvaluationError("distortion_at: non-positive s Phi'(s)");
    return 0.5 * (sp + 1.0 / sp);
}

ResidualResult harmonicity_residual(const RadialMap& map, const RadialMetric& m, double s) {
    if (map.direction != MapDirection::inverse)
        throw PreconditionError("harmonicity_residual: needs an inverse-direction map");
    const RadialProfile& prof = *map.profile;
    if (!(s > prof.lo() && s < prof.hi()))
        throw DomainError("harmonicity_residual: s must be interior to the source annulus");

    ResidualResult out;
    const double g = prof.value(s);
    const double gp = prof.deriv(s);
    out.used_fd = !prof.has_second();
    const double gpp = prof.second(s);

    const double metric_term = m.rho_prime(g) / m.rho(g);
    const double res = s * s * gpp + s * gp - g + metric_term * (s * s * gp * gp - g * g);
    out.value = std::fabs(res) / std::max(1.0, std::fabs(g));
    return out;
}

double hopf_check(const RadialMap& map, const RadialMetric& m, int n_r, int n_t) {
    if (map.direction != MapDirection::inverse)
        throw PreconditionError("hopf_check: needs an inverse-direction map");
    if (n_r < 16 || n_t < 16)
        throw ConfigError("hopf_check: grid must be at least 16x16");

    const double lo = map.profile->lo(), hi = map.profile->hi();
    const double h = (hi - lo) / (8.0 * std::max(n_r, n_t)); // FD step tied to grid scale

    auto psi = [&](cplx z) -> cplx {
        PointDerivatives d = map_derivatives(map, z);
        const double w = std::abs(map_eval(map, z));
        const double r = m.rho(w);
        return r * r * d.f_z * std::conj(d.f_zbar);
    };

    const double s_lo = lo + 2.0 * h, s_hi = hi - 2.0 * h;
    double worst = 0.0;
    for (int j = 0; j < n_r; ++j) {
        const double s = s_lo * std::pow(s_hi / s_lo, (j + 0.5) / n_r);
        for (int k = 0; k < n_t; ++k) {
            const double t = 2.0 * M_PI * k / n_t;
            const cplx z = std::polar(s, t);
            const cplx dx = (psi(z + h) - psi(z - h)) / (2.0 * h);
            const cplx dy = (psi(z + cplx(0.0, h)) - psi(z - cplx(0.0, h))) / (2.0 * h);
            // discrete d(psi)/d(zbar) = (dx + i dy) / 2
            worst = std::max(worst, 0.5 * std::abs(dx + cplx(0.0, 1.0) * dy));
        }
    }
    return worst;
}

} // namespace annuli
