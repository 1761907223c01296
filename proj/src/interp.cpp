#include "annuli/interp.hpp"
#include "annuli/errors.hpp"

#include <cmath>
#include <sstream>

namespace annuli {

namespace {

// Hermite basis on [0,1]
inline double h00(double t) { return (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t); }
inline double h10(double t) { return t * (1.0 - t) * (1.0 - t); }

// parabolic one-sided slope estimate, clipped for shape preservation
double end_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0)
        m = 0.0;
    else if (d0 * d1 <= 0.0 && std::fabs(m) > 3.0 * std::fabs(d0))
        m = 3.0 * d0;
    return m;
}

} // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::optional<double> slope_lo,
                             std::optional<double> slope_hi)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw PreconditionError("MonotoneCubic: need >= 2 nodes, matching sizes");
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (!(x_[k] < x_[k + 1])) throw PreconditionError("MonotoneCubic: abscissae must be strictly increasing");

    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x_[k + 1] - x_[k];
        d[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    m_.resize(n);
    m_[0] = slope_lo ? *slope_lo : (n > 2 ? end_slope(h[0], h[1], d[0], d[1]) : d[0]);
    m_[n - 1] = slope_hi ? *slope_hi : (n > 2 ? end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]) : d[n - 2]);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double prod = d[k - 1] * d[k];
        if (prod > 0.0) {
            // Brodlie's weighted harmonic mean
            const double a = (h[k - 1] + 2.0 * h[k]) / (3.0 * (h[k - 1] + h[k]));
            m_[k] = prod / (a * d[k] + (1.0 - a) * d[k - 1]);
        } else {
            m_[k] = 0.0;
        }
    }
}

std::size_t MonotoneCubic::segment(double x) const {
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (x_[mid] > x)
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

double MonotoneCubic::value(double x) const {
    const double span = x_.back() - x_.front();
    const double slack = 1e-12 * span;
    if (x < x_.front() - slack || x > x_.back() + slack) {
        std::ostringstream msg;
        msg << "MonotoneCubic: x = " << x << " outside [" << x_.front() << ", " << x_.back()
            << "]; extrapolation is not supported";
        throw DomainError(msg.str());
    }
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    return y_[k] * h00(t) + h * m_[k] * h10(t) + y_[k + 1] * h00(1.0 - t) - h * m_[k + 1] * h10(1.0 - t);
}

double MonotoneCubic::deriv(double x) const {
    const double span = x_.back() - x_.front();
    const double slack = 1e-12 * span;
    if (x < x_.front() - slack || x > x_.back() + slack)
        throw DomainError("MonotoneCubic: derivative requested outside the data range");
    if (x <= x_.front()) return m_.front();
    if (x >= x_.back()) return m_.back();
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    return 6.0 * t * (1.0 - t) * (y_[k + 1] - y_[k]) / h +
           m_[k] * (3.0 * t - 1.0) * (t - 1.0) - m_[k + 1] * t * (2.0 - 3.0 * t);
}

} // namespace annuli
