#pragma once

#include <optional>
#include <vector>

namespace annuli {

// Monotone piecewise-cubic Hermite interpolation with Fritsch-Butland slopes
// (SIAM J Sci Stat Comput 5, 300).  Monotone data yields a monotone
// interpolant.  End slopes default to one-sided parabolic estimates, clipped
// to preserve shape; callers with exact endpoint derivatives can supply them.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y,
                  std::optional<double> slope_lo = std::nullopt,
                  std::optional<double> slope_hi = std::nullopt);

    double value(double x) const;
    double deriv(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    std::size_t size() const { return x_.size(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, m_;
};

} // namespace annuli
