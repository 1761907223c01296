#include "annuli/metric.hpp"
#include "annuli/errors.hpp"
#include "annuli/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace annuli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inside(const RadialMetric& m, double s) {
    const bool at_origin_ok = m.defined_at_zero && m.domain_lo == 0.0 && s >= 0.0;
    if ((s > m.domain_lo || at_origin_ok) && s < m.domain_hi) return;
    std::ostringstream msg;
    msg << "metric '" << m.name << "': radius " << s << " outside domain ("
        << m.domain_lo << ", " << m.domain_hi << ")";
    throw DomainError(msg.str());
}

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

} // namespace

double RadialMetric::rho(double s) const {
    check_inside(*this, s);
    const double v = density(s);
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "metric '" << name << "': density not positive/finite at s = " << s;
        throw EvaluationError(msg.str());
    }
    return v;
}

double RadialMetric::rho_prime(double s) const {
    check_inside(*this, s);
    return density_deriv(s);
}

double RadialMetric::rho_second(double s) const {
    check_inside(*this, s);
    if (density_deriv2) return density_deriv2(s);
    double h = 1e-6 * std::max(1.0, std::fabs(s));
    // keep the stencil inside the domain
    while ((s - h <= domain_lo && !(defined_at_zero && s - h >= 0.0)) || s + h >= domain_hi) h *= 0.5;
    return (density_deriv(s + h) - density_deriv(s - h)) / (2.0 * h);
}

double RadialMetric::srho2_prime(double s) const {
    const double r = rho(s), rp = rho_prime(s);
    return 2.0 * s * r * r + 2.0 * s * s * r * rp;
}

double RadialMetric::log_density_slope(double s) const {
    return 2.0 * s * rho_prime(s) / rho(s);
}

bool RadialMetric::contains(double s) const {
    const bool at_origin_ok = defined_at_zero && domain_lo == 0.0 && s >= 0.0;
    return (s > domain_lo || at_origin_ok) && s < domain_hi;
}

RadialMetric builtin_metric(const std::string& name, const std::vector<double>& params) {
    RadialMetric m;
    m.name = name;
    if (name == "euclidean") {
        m.domain_lo = 0.0; m.domain_hi = kInf; m.defined_at_zero = true;
        m.density = [](double) { return 1.0; };
        m.density_deriv = [](double) { return 0.0; };
        m.density_deriv2 = [](double) { return 0.0; };
    } else if (name == "inverse_radius") {
        m.domain_lo = 0.0; m.domain_hi = kInf; m.defined_at_zero = false;
        m.density = [](double s) { return 1.0 / s; };
        m.density_deriv = [](double s) { return -1.0 / (s * s); };
        m.density_deriv2 = [](double s) { return 2.0 / (s * s * s); };
    } else if (name == "hyperbolic_disk") {
        m.domain_lo = 0.0; m.domain_hi = 1.0; m.defined_at_zero = true;
        m.density = [](double s) { return 2.0 / (1.0 - s * s); };
        m.density_deriv = [](double s) {
            const double d = 1.0 - s * s;
            return 4.0 * s / (d * d);
        };
        m.density_deriv2 = [](double s) {
            const double d = 1.0 - s * s;
            return 4.0 * (1.0 + 3.0 * s * s) / (d * d * d);
        };
    } else if (name == "punctured_disk") {
        m.domain_lo = 0.0; m.domain_hi = 1.0; m.defined_at_zero = false;
        m.density = [](double s) { return 1.0 / (s * std::log(1.0 / s)); };
        m.density_deriv = [](double s) {
            const double L = std::log(1.0 / s);
            const double g = s * L;
            return -(L - 1.0) / (g * g);
        };
        m.density_deriv2 = [](double s) {
            const double L = std::log(1.0 / s);
            const double g = s * L;
            return (2.0 * (L - 1.0) * (L - 1.0) + L) / (g * g * g);
        };
    } else if (name == "hyperbolic_annulus") {
        if (params.size() != 1) throw ParamError("hyperbolic_annulus: expected one parameter R > 1");
        const double R = params[0];
        if (!(R > 1.0)) throw ParamError("hyperbolic_annulus: R must be > 1");
        const double a = M_PI / (2.0 * std::log(R));
        m.domain_lo = 1.0 / R; m.domain_hi = R; m.defined_at_zero = false;
        m.density = [a](double s) {
            const double u = a * std::log(s);
            return a / (s * std::cos(u));
        };
        m.density_deriv = [a](double s) {
            const double u = a * std::log(s);
            return a / (s * s * std::cos(u)) * (a * std::tan(u) - 1.0);
        };
        m.density_deriv2 = [a](double s) {
            const double u = a * std::log(s);
            const double tn = std::tan(u);
            return a / (s * s * s * std::cos(u)) *
                   (2.0 * a * a * tn * tn - 3.0 * a * tn + 2.0 + a * a);
        };
    } else if (name == "spherical") {
        m.domain_lo = 0.0; m.domain_hi = kInf; m.defined_at_zero = true;
        m.density = [](double s) { return 2.0 / (1.0 + s * s); };
        m.density_deriv = [](double s) {
            const double d = 1.0 + s * s;
            return -4.0 * s / (d * d);
        };
        m.density_deriv2 = [](double s) {
            const double d = 1.0 + s * s;
            return 4.0 * (3.0 * s * s - 1.0) / (d * d * d);
        };
    } else if (name == "cigar") {
        m.domain_lo = 0.0; m.domain_hi = kInf; m.defined_at_zero = true;
        m.density = [](double s) { return 1.0 / std::sqrt(1.0 + s * s); };
        m.density_deriv = [](double s) { return -s * std::pow(1.0 + s * s, -1.5); };
        m.density_deriv2 = [](double s) {
            return (2.0 * s * s - 1.0) * std::pow(1.0 + s * s, -2.5);
        };
    } else {
        throw ParamError("unknown builtin metric '" + name + "'");
    }
    return m;
}

RadialMetric table_metric(const std::vector<std::pair<double, double>>& table) {
    if (table.size() < 4) throw ParamError("table_metric: need at least 4 samples");
    std::vector<double> s, r;
    s.reserve(table.size());
    r.reserve(table.size());
    for (const auto& [si, ri] : table) {
        if (!(ri > 0.0)) throw ParamError("table_metric: density samples must be positive");
        s.push_back(si);
        r.push_back(ri);
    }
    auto interp = std::make_shared<MonotoneCubic>(std::move(s), std::move(r));
    RadialMetric m;
    m.name = "table";
    m.domain_lo = interp->x_min();
    m.domain_hi = interp->x_max();
    m.defined_at_zero = false;
    m.density = [interp](double x) { return interp->value(x); };
    m.density_deriv = [interp](double x) { return interp->deriv(x); };
    // no analytic second derivative for tabulated data
    return m;
}

double gauss_curvature(const RadialMetric& m, double s) {
    check_inside(m, s);
    if (s <= 0.0) throw DomainError("gauss_curvature: radius must be positive");
    const double r = m.rho(s);
    double w_prime;
    if (m.has_second_deriv()) {
        const double rp = m.rho_prime(s);
        const double rpp = m.rho_second(s);
        w_prime = 2.0 * rp / r + 2.0 * s * rpp / r - 2.0 * s * (rp / r) * (rp / r);
    } else {
        // five-point derivative of 2 s rho'/rho on log-spaced nodes
        const double x = std::log(s);
        double dx = 1e-3;
        auto inside = [&](double step) {
            const double a = std::exp(x - 2.0 * step), b = std::exp(x + 2.0 * step);
            return m.contains(a) && m.contains(b);
        };
        int shrink = 0;
        while (!inside(dx) && shrink++ < 60) dx *= 0.5;
        if (!inside(dx)) throw DomainError("gauss_curvature: radius too close to the domain boundary");
        auto w = [&](double xx) { return m.log_density_slope(std::exp(xx)); };
        const double dwdx = (w(x - 2.0 * dx) - 8.0 * w(x - dx) + 8.0 * w(x + dx) - w(x + 2.0 * dx)) / (12.0 * dx);
        w_prime = dwdx / s;
    }
    return -w_prime / (2.0 * s * r * r);
}

RegularityReport check_regularity(const RadialMetric& m, double tau, double sigma, int grid_n) {
    if (!(m.domain_lo <= tau && tau < sigma && sigma <= m.domain_hi))
        throw PreconditionError("check_regularity: need domain_lo <= tau < sigma <= domain_hi");
    if (grid_n < 16) throw PreconditionError("check_regularity: grid_n must be >= 16");

    const double width = sigma - tau;
    const double lo = (tau > m.domain_lo) ? tau : tau + 1e-9 * width;
    const double hi = (sigma < m.domain_hi) ? sigma : sigma - 1e-9 * width;

    auto f = [&](double s) { return m.s_rho(s); };

    // log-spaced sample with extra refinement toward tau
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(grid_n) + 8);
    const double ratio = hi / lo;
    for (int i = 0; i < grid_n; ++i)
        grid.push_back(lo * std::pow(ratio, static_cast<double>(i) / (grid_n - 1)));
    for (int k = 1; k <= 8; ++k) grid.push_back(lo + width * std::pow(10.0, -k));
    std::sort(grid.begin(), grid.end());

    std::size_t best = 0;
    double best_val = kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        if (v < best_val) { best_val = v; best = i; }
    }
    const double bl = best > 0 ? grid[best - 1] : lo;
    const double bu = best + 1 < grid.size() ? grid[best + 1] : hi;
    const double s_min = golden_min(f, bl, bu, 1e-12 * width);
    double inf_val = std::min(best_val, f(s_min));
    double inf_loc = f(s_min) <= best_val ? s_min : grid[best];

    // quadratic extrapolation of s*rho toward tau from inside
    const double d = 1e-5 * width;
    const double f1 = f(lo + d), f2 = f(lo + 0.5 * d), f3 = f(lo + 0.25 * d);
    const double boundary_limit = (f1 - 6.0 * f2 + 8.0 * f3) / 3.0;
    if (boundary_limit < inf_val) { inf_val = std::min(inf_val, f(lo + 0.25 * d)); }

    double curv_bound = 0.0;
    bool curv_finite = true;
    const double margin = 1e-6 * width;
    for (int i = 0; i < grid_n; ++i) {
        const double s = std::min(std::max(grid[static_cast<std::size_t>(i)], lo + margin), hi - margin);
        double k;
        try {
            k = gauss_curvature(m, s);
        } catch (const Error&) {
            curv_finite = false;
            break;
        }
        if (!std::isfinite(k)) { curv_finite = false; break; }
        curv_bound = std::max(curv_bound, std::fabs(k));
    }

    RegularityReport rep;
    rep.inf_s_rho = inf_val;
    rep.inf_location = inf_loc;
    rep.boundary_limit = boundary_limit;
    rep.curvature_bound = curv_finite ? curv_bound : kInf;
    rep.is_regular = curv_finite &&
                     std::fabs(inf_val - boundary_limit) <= 1e-8 * std::fabs(boundary_limit);
    return rep;
}

MonotoneVerdict monotonicity_of_h(const RadialMetric& m, double lo, double hi, int samples) {
    if (!(lo < hi) || samples < 8) throw PreconditionError("monotonicity_of_h: bad range or sample count");
    std::vector<double> w(static_cast<std::size_t>(samples));
    double scale = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = lo + (hi - lo) * (i + 0.5) / samples;
        w[static_cast<std::size_t>(i)] = m.log_density_slope(s);
        scale = std::max(scale, std::fabs(w[static_cast<std::size_t>(i)]));
    }
    const double tol = 1e-10 * std::max(1.0, scale);
    if (scale <= tol) return MonotoneVerdict::constant;

    // curvature must not change sign on the range
    int pos = 0, neg = 0;
    for (int i = 0; i < 32; ++i) {
        const double s = lo + (hi - lo) * (i + 0.5) / 32;
        const double k = gauss_curvature(m, s);
        if (k > 1e-10) ++pos;
        if (k < -1e-10) ++neg;
    }
    if (pos > 0 && neg > 0) return MonotoneVerdict::inconclusive;

    bool incr = true, decr = true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i + 1] < w[i] - tol) incr = false;
        if (w[i + 1] > w[i] + tol) decr = false;
    }
    if (incr && decr) return MonotoneVerdict::constant;
    if (incr) return MonotoneVerdict::increasing;
    if (decr) return MonotoneVerdict::decreasing;
    return MonotoneVerdict::inconclusive;
}

bool is_degenerate_on(const RadialMetric& m, double tau, double sigma, int samples) {
    double mn = kInf, mx = -kInf;
    for (int i = 0; i < samples; ++i) {
        const double s = tau + (sigma - tau) * (i + 0.5) / samples;
        const double v = m.s_rho(s);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    return (mx - mn) < 1e-12 * std::fabs(mx);
}

const char* to_string(MonotoneVerdict v) {
    switch (v) {
        case MonotoneVerdict::increasing: return "increasing";
        case MonotoneVerdict::decreasing: return "decreasing";
        case MonotoneVerdict::constant: return "constant";
        default: return "inconclusive";
    }
}

} // namespace annuli
