#include "annuli/numerics.hpp"
#include "annuli/errors.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace annuli {

namespace {

constexpr double kPiHalf = 1.5707963267948966;
constexpr double kTMax = 4.0;   // abscissa cutoff; weights beyond are ~1e-35
constexpr double kH0 = 0.5;     // level-0 spacing in t

struct Node {
    double offset;  // distance of the abscissa from the nearer endpoint, unit half-width
    double weight;  // includes the (pi/2) cosh t / cosh^2(.) factor
};

// Nodes for t > 0 at a given level.  Level 0 holds all multiples of kH0
// (excluding t = 0, handled separately); level L > 0 holds the odd multiples
// of kH0 * 2^-L.  Offsets are measured from the near endpoint so callers can
// reconstruct abscissae without cancellation.
const std::vector<Node>& level_nodes(int level) {
    static const std::vector<std::vector<Node>> tables = [] {
        std::vector<std::vector<Node>> all;
        const int deepest = 14;
        for (int level = 0; level <= deepest; ++level) {
            std::vector<Node> nodes;
            const double h = kH0 * std::pow(0.5, level);
            const int stride = (level == 0) ? 1 : 2;
            for (int k = 1; k * h <= kTMax; k += stride) {
                const double t = k * h;
                const double v = kPiHalf * std::sinh(t);
                // 1 - tanh(v) = 2 / (1 + e^{2v}), stable for large v
                const double om_u = 2.0 / (1.0 + std::exp(2.0 * v));
                const double sech = 1.0 / std::cosh(v);
                const double w = kPiHalf * std::cosh(t) * sech * sech;
                if (om_u == 0.0 || w == 0.0) break;
                nodes.push_back({om_u, w});
            }
            all.push_back(std::move(nodes));
        }
        return all;
    }();
    return tables.at(static_cast<std::size_t>(level));
}

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureConfig& cfg) {
    if (!(lo <= hi)) throw PreconditionError("integrate: requires lo <= hi");
    if (cfg.rel_tol <= 0 || cfg.abs_tol <= 0) throw PreconditionError("integrate: tolerances must be positive");
    if (cfg.max_levels < 4) throw PreconditionError("integrate: max_levels must be >= 4");
    QuadratureResult res;
    if (lo == hi) return res;

    const double half = 0.5 * (hi - lo);
    const double mid = lo + half;

    auto eval = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg << "integrate: non-finite integrand value at x = " << x;
            throw EvaluationError(msg.str());
        }
        ++res.evals;
        return y;
    };

    // level-0 sum: the t = 0 node plus the coarse grid
    KahanSum sum;
    sum.add(kPiHalf * eval(mid));
    for (const Node& n : level_nodes(0)) {
        const double xl = lo + n.offset * half;
        const double xr = hi - n.offset * half;
        sum.add(n.weight * eval(xl));
        sum.add(n.weight * eval(xr));
    }
    double h = kH0;
    double prev = h * half * sum.s;

    for (int level = 1; level <= cfg.max_levels; ++level) {
        for (const Node& n : level_nodes(level)) {
            const double xl = lo + n.offset * half;
            const double xr = hi - n.offset * half;
            sum.add(n.weight * eval(xl));
            sum.add(n.weight * eval(xr));
        }
        h *= 0.5;
        const double cur = h * half * sum.s;
        const double err = std::fabs(cur - prev);
        res.value = cur;
        res.err_est = err;
        res.levels = level;
        if (level >= 2 && err <= std::max(cfg.rel_tol * std::fabs(cur), cfg.abs_tol)) {
            return res;
        }
        prev = cur;
    }

    std::ostringstream msg;
    msg << "integrate: no convergence within " << cfg.max_levels
        << " levels (best " << res.value << ", err " << res.err_est << ")";
    throw AccuracyError(msg.str(), res.value, res.err_est);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootConfig& cfg) {
    if (!(lo < hi)) throw PreconditionError("find_root: requires lo < hi");
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (std::fabs(fa) <= cfg.f_tol) return a;
    if (std::fabs(fb) <= cfg.f_tol) return b;
    if (fa * fb > 0.0) {
        std::ostringstream msg;
        msg << "find_root: no sign change on bracket: f(" << a << ") = " << fa
            << ", f(" << b << ") = " << fb;
        throw BracketError(msg.str());
    }

    double c = a, fc = fa;
    double d = b - a, e = b - a;
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if (fb * fc > 0.0) {
            c = a; fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 0.5 * cfg.x_tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || std::fabs(fb) <= cfg.f_tol) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // inverse quadratic / secant step
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
            const double min2 = std::fabs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::fabs(d) > tol1)
            b += d;
        else
            b += (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    std::ostringstream msg;
    msg << "find_root: max_iter = " << cfg.max_iter << " exceeded (best x = " << b << ")";
    throw AccuracyError(msg.str(), b, std::fabs(fb));
}

std::pair<double, double> expand_bracket_up(const std::function<double(double)>& f, double lo) {
    const double f_lo = f(lo);
    if (!std::isfinite(f_lo)) throw EvaluationError("expand_bracket_up: f(lo) not finite");
    if (f_lo == 0.0) return {lo, lo};
    double prev = lo;
    double step = 1.0;
    for (int k = 0; k <= 60; ++k) {
        const double hi = lo + step;
        const double f_hi = f(hi);
        if (!std::isfinite(f_hi)) throw EvaluationError("expand_bracket_up: non-finite value during expansion");
        if (f_lo * f_hi <= 0.0) return {prev, hi};
        prev = hi;
        step *= 2.0;
    }
    throw UnboundedRootError("expand_bracket_up: no sign change below the 2^60 growth cap");
}

} // namespace annuli
