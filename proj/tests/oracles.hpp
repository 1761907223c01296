#pragma once

// Frozen reference values, computed with an independent high-precision
// quadrature/root-finding implementation (mpmath, 30 digits), plus closed
// forms for the flat metrics.

#include <cmath>

namespace oracles {

// flat metric, annulus (0.5, 1)
inline constexpr double kRStarEuclid = 0.26794919243112270647; // 2 - sqrt(3)
inline constexpr double kKCritEuclid = 2.7206990463513267759;  // pi sqrt(3)/2

// flat metric closed forms
inline double euclid_R_of_c(double tau, double sigma, double c) {
    return (tau + std::sqrt(tau * tau + c)) / (sigma + std::sqrt(sigma * sigma + c));
}
inline double euclid_mean_distortion(double tau, double sigma, double c) {
    return M_PI * (sigma * std::sqrt(sigma * sigma + c) - tau * std::sqrt(tau * tau + c));
}

// hyperbolic disk density on the annulus (0.5, 0.9)
inline constexpr double kRStarHyp = 0.38878012759183862154;
inline constexpr double kCHypR06 = 1.7589821647877075678;   // solved c at r = 0.6
inline constexpr double kKCritHyp = 50.871323561760020787;  // distortion of the critical map
inline constexpr double kKHypR06 = 49.574083221259668202;

// other admissible-bound references
inline constexpr double kRStarEuclid0509 = 0.30333704529042344577;
inline constexpr double kRStarPunctured0509 = 0.37417842340509237338;
inline constexpr double kRStarSpherical0509 = 0.20709681982626897077;
inline constexpr double kRStarCigar0509 = 0.26349661884397647337;
inline constexpr double kRStarHypAnn2_1118 = 0.31199728176455005364;
inline constexpr double kRStarSpherical0309 = 0.14303658361686589681;
inline constexpr double kRStarHyp0309 = 0.19720348031221632471;

// fat-regime study, flat metric, (tau, sigma, r) = (0.5, 1, 0.1)
inline constexpr double kBoundEuclidFat = 3.494808835938675897;
inline constexpr double kGapN10 = 0.121476696312;
inline constexpr double kGapN100 = 0.00850224760131;
inline constexpr double kGapN1000 = 0.000787230368671;
inline constexpr double kGapN3000 = 0.000258882888376;

} // namespace oracles
