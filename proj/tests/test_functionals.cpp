#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "annuli/errors.hpp"
#include "annuli/functionals.hpp"
#include "annuli/numerics.hpp"
#include "oracles.hpp"

#include <cmath>
#include <memory>
#include <random>

using namespace annuli;

namespace {

std::shared_ptr<NitscheProfile> solved(const char* metric, AnnulusGeometry g,
                                       std::vector<double> params = {}) {
    return std::make_shared<NitscheProfile>(solve_c(builtin_metric(metric, params), g));
}

} // namespace

TEST_CASE("conformal mean distortion is the weighted area") {
    auto p = solved("euclidean", {0.5, 1.0, 0.5});
    const RadialMap f = nitsche_map(p, MapDirection::forward);
    const ValueWithError k = mean_distortion_radial(f, builtin_metric("euclidean"));
    CHECK(std::fabs(k.value - M_PI * 0.75) < 1e-8);
    CHECK(std::fabs(k.value - 2.3561945) < 1e-6);
}

TEST_CASE("power-map distortion for the constant-s*rho metric") {
    const RadialMetric m = builtin_metric("inverse_radius");
    const double alpha = 0.5;
    const RadialMap f = power_map(0.5, 1.0, alpha, 1.0);
    const ValueWithError k = mean_distortion_radial(f, m);
    const double exact = M_PI * std::log(2.0) * (alpha + 1.0 / alpha);
    CHECK(std::fabs(k.value - exact) < 1e-9 * exact);
}

TEST_CASE("flat-metric values match the closed form for several parameters") {
    const RadialMetric m = builtin_metric("euclidean");
    for (double r : {0.30, 0.45, 0.60, 0.80}) {
        auto p = solved("euclidean", {0.5, 1.0, r});
        const ValueWithError k = mean_distortion_radial(nitsche_map(p, MapDirection::forward), m);
        const double exact = oracles::euclid_mean_distortion(0.5, 1.0, p->c());
        CHECK(std::fabs(k.value - exact) < 1e-8 * std::max(1.0, exact));
    }
}

TEST_CASE("critical distortion closed form") {
    const AnnulusGeometry g{0.5, 1.0, 0.1};
    auto crit = std::make_shared<NitscheProfile>(critical_profile(builtin_metric("euclidean"), g));
    const ValueWithError k =
        mean_distortion_radial(nitsche_map(crit, MapDirection::forward), builtin_metric("euclidean"));
    CHECK(std::fabs(k.value - oracles::kKCritEuclid) < 1e-8);
}

TEST_CASE("hyperbolic values match the independent oracle") {
    const RadialMetric m = builtin_metric("hyperbolic_disk");
    const AnnulusGeometry g{0.5, 0.9, 0.6};
    auto p = solved("hyperbolic_disk", g);
    const ValueWithError k = mean_distortion_radial(nitsche_map(p, MapDirection::forward), m);
    CHECK(std::fabs(k.value - oracles::kKHypR06) < 1e-7 * oracles::kKHypR06);
    auto crit = std::make_shared<NitscheProfile>(critical_profile(m, g));
    const ValueWithError kc = mean_distortion_radial(nitsche_map(crit, MapDirection::forward), m);
    CHECK(std::fabs(kc.value - oracles::kKCritHyp) < 1e-7 * oracles::kKCritHyp);
}

TEST_CASE("energy equals distortion through the change of variables") {
    const RadialMetric m = builtin_metric("hyperbolic_disk");
    auto p = solved("hyperbolic_disk", {0.5, 0.9, 0.6});
    const ValueWithError k = mean_distortion_radial(nitsche_map(p, MapDirection::forward), m);
    const ValueWithError e = energy_radial(nitsche_map(p, MapDirection::inverse), m);
    CHECK(std::fabs(e.value - k.value) < 1e-7 * (1.0 + k.value));
}

TEST_CASE("conformal energy equals the weighted area") {
    auto p = solved("euclidean", {0.5, 1.0, 0.5});
    const ValueWithError e = energy_radial(nitsche_map(p, MapDirection::inverse),
                                           builtin_metric("euclidean"));
    CHECK(std::fabs(e.value - M_PI * 0.75) < 1e-8);
}

TEST_CASE("power-map pair has exactly equal energy and distortion") {
    const RadialMetric m = builtin_metric("inverse_radius");
    const double alpha = 0.5;
    // forward alpha and inverse 1/alpha describe the same pair of annuli
    const RadialMap f = power_map(0.5, 1.0, alpha, 1.0);
    const RadialMap h = power_map(std::sqrt(0.5), 1.0, 1.0 / alpha, 1.0, MapDirection::inverse);
    const ValueWithError k = mean_distortion_radial(f, m);
    const ValueWithError e = energy_radial(h, m);
    const double exact = M_PI * std::log(2.0) * (alpha + 1.0 / alpha);
    CHECK(std::fabs(k.value - exact) < 1e-9 * exact);
    CHECK(std::fabs(e.value - exact) < 1e-9 * exact);
}

TEST_CASE("energy identity across the builtins at three radii each") {
    struct Window { const char* name; std::vector<double> params; double tau, sigma; };
    const std::vector<Window> windows = {
        {"euclidean", {}, 0.5, 0.9},   {"inverse_radius", {}, 0.5, 0.9},
        {"hyperbolic_disk", {}, 0.5, 0.9}, {"punctured_disk", {}, 0.5, 0.9},
        {"spherical", {}, 0.5, 0.9},   {"cigar", {}, 0.5, 0.9},
        {"hyperbolic_annulus", {2.0}, 1.1, 1.8},
    };
    for (const Window& wdw : windows) {
        const RadialMetric m = builtin_metric(wdw.name, wdw.params);
        const AnnulusGeometry probe{wdw.tau, wdw.sigma, 0.5};
        const double r_star = nitsche_bound(m, probe).r_star;
        for (double frac : {0.25, 0.5, 0.75}) {
            const double r = r_star + frac * (0.98 - r_star);
            auto p = std::make_shared<NitscheProfile>(
                solve_c(m, AnnulusGeometry{wdw.tau, wdw.sigma, r}));
            const ValueWithError k = mean_distortion_radial(nitsche_map(p, MapDirection::forward), m);
            const ValueWithError e = energy_radial(nitsche_map(p, MapDirection::inverse), m);
            CHECK(std::fabs(e.value - k.value) <= 1e-7 * (1.0 + k.value));
        }
    }
}

TEST_CASE("split-form consistency for the solved map") {
    const RadialMetric m = builtin_metric("hyperbolic_disk");
    auto p = solved("hyperbolic_disk", {0.5, 0.9, 0.6});
    const ValueWithError k = mean_distortion_radial(nitsche_map(p, MapDirection::forward), m);
    // pi int s^2 rho^3 / sqrt(rad) + pi int rho sqrt(rad), integrated directly in s
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    const double part1 =
        integrate([&](double s) {
            const double rad = p->srho2_above_tau(s) + p->c_offset();
            const double rho = m.rho(s);
            return s * s * rho * rho * rho / std::sqrt(rad);
        }, 0.5, 0.9, cfg).value;
    const double part2 =
        integrate([&](double s) {
            const double rad = p->srho2_above_tau(s) + p->c_offset();
            return m.rho(s) * std::sqrt(rad);
        }, 0.5, 0.9, cfg).value;
    CHECK(std::fabs(M_PI * (part1 + part2) - k.value) < 1e-9 * k.value);
}

TEST_CASE("solved profile beats random monotone perturbations") {
    const RadialMetric m = builtin_metric("euclidean");
    const AnnulusGeometry g{0.5, 1.0, 0.45};
    auto p = solved("euclidean", g);
    const double k_best =
        mean_distortion_radial(nitsche_map(p, MapDirection::forward), m).value;

    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    int tested = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
        // bump vanishing at both endpoints keeps the same boundary radii
        auto bump = [=](double s) {
            const double x = (s - g.tau) / (g.sigma - g.tau);
            return a1 * std::sin(M_PI * x) + a2 * std::sin(2.0 * M_PI * x) +
                   a3 * std::sin(3.0 * M_PI * x);
        };
        auto bump_deriv = [=](double s) {
            const double x = (s - g.tau) / (g.sigma - g.tau);
            const double c = M_PI / (g.sigma - g.tau);
            return c * (a1 * std::cos(M_PI * x) + 2.0 * a2 * std::cos(2.0 * M_PI * x) +
                        3.0 * a3 * std::cos(3.0 * M_PI * x));
        };
        // scale down until the perturbed profile stays increasing
        double scale = 0.05;
        bool ok = false;
        for (int halve = 0; halve < 20 && !ok; ++halve, scale *= 0.5) {
            ok = true;
            for (int i = 0; i <= 200; ++i) {
                const double s = g.tau + (g.sigma - g.tau) * i / 200.0;
                if (p->phi_prime(s) + scale * bump_deriv(s) <= 1e-3) { ok = false; break; }
            }
        }
        if (!ok) continue;
        ++tested;
        const double sc = scale;
        const RadialMap pert = generic_map(
            g.tau, g.sigma,
            [=](double s) { return std::exp(p->phi(s) + sc * bump(s)); },
            [=](double s) {
                return std::exp(p->phi(s) + sc * bump(s)) * (p->phi_prime(s) + sc * bump_deriv(s));
            },
            {}, MapDirection::forward);
        const double k_pert = mean_distortion_radial(pert, m).value;
        CHECK(k_pert >= k_best - 1e-9);
    }
    CHECK(tested >= 40);
}

TEST_CASE("regime classification") {
    const RadialMetric m = builtin_metric("euclidean");
    CHECK(classify_regime(m, {0.5, 1.0, 0.5}).regime == Regime::nitsche_range);
    CHECK(classify_regime(m, {0.5, 1.0, 0.1}).regime == Regime::fat);
    const RegimeVerdict near = classify_regime(m, {0.5, 1.0, oracles::kRStarEuclid + 1e-10});
    CHECK(near.near_boundary);
    const RegimeVerdict deg = classify_regime(builtin_metric("inverse_radius"), {0.5, 1.0, 0.02});
    CHECK(deg.regime == Regime::nitsche_range);
    CHECK(deg.degenerate);
}

TEST_CASE("fat-regime lower bound assembly") {
    const RadialMetric m = builtin_metric("euclidean");
    const AnnulusGeometry g{0.5, 1.0, 0.1};
    const FunctionalReport rep = theorem2_lower_bound(m, g);
    const double expect =
        oracles::kKCritEuclid + 0.125 * 2.0 * M_PI * std::log(oracles::kRStarEuclid / 0.1);
    CHECK(std::fabs(rep.lower_bound - expect) < 1e-8);
    CHECK(std::fabs(rep.lower_bound - oracles::kBoundEuclidFat) < 1e-8);
    CHECK(rep.gap == 0.0);
    CHECK(rep.regime == Regime::fat);
    CHECK(std::fabs(rep.k_critical - oracles::kKCritEuclid) < 1e-8);
}

TEST_CASE("gap term scaling") {
    const RadialMetric m = builtin_metric("euclidean");
    // r = r'/e gives a gap term of exactly (tau^2 rho^2 / 2) * 2 pi
    const double r = oracles::kRStarEuclid / std::exp(1.0);
    const FunctionalReport rep = theorem2_lower_bound(m, {0.5, 1.0, r});
    CHECK(std::fabs(rep.gap_term - 0.125 * 2.0 * M_PI) < 1e-8);
}

TEST_CASE("lower bound refuses the admissible range") {
    CHECK_THROWS_AS(theorem2_lower_bound(builtin_metric("euclidean"), {0.5, 1.0, 0.5}),
                    RegimeError);
}

TEST_CASE("full report in both regimes") {
    const RadialMetric m = builtin_metric("euclidean");
    const FunctionalReport in_range = functional_report(m, {0.5, 1.0, 0.45});
    CHECK(in_range.regime == Regime::nitsche_range);
    CHECK(std::fabs(in_range.K_rho - in_range.lower_bound) < 1e-12);
    CHECK(std::fabs(in_range.E_rho - in_range.K_rho) < 1e-7 * (1.0 + in_range.K_rho));
    const FunctionalReport fat = functional_report(m, {0.5, 1.0, 0.1});
    CHECK(fat.regime == Regime::fat);
    CHECK(std::fabs(fat.lower_bound - oracles::kBoundEuclidFat) < 1e-8);
}

TEST_CASE("necessary-condition check for disk metrics") {
    const RadialMetric sph = builtin_metric("spherical");
    const RadialMetric hyp = builtin_metric("hyperbolic_disk");

    const FikinResult s1 = fikin_bound_check(sph, {0.3, 0.9, oracles::kRStarSpherical0309 + 0.1});
    CHECK_FALSE(s1.inconclusive);
    CHECK(s1.curvature_sign == 1);
    CHECK(s1.holds);

    const FikinResult h1 = fikin_bound_check(hyp, {0.3, 0.9, 0.5});
    CHECK(h1.curvature_sign == -1);
    CHECK(h1.holds);

    // r -> 1 sends the right side to 1
    const FikinResult near_one = fikin_bound_check(hyp, {0.3, 0.9, 0.999999});
    CHECK(std::fabs(near_one.rhs - 1.0) < 1e-6);
    CHECK(near_one.holds);

    // closed-form cross-check of the arc lengths: h(x) = 2 atanh(x) / 2 atan(x)
    const FikinResult h2 = fikin_bound_check(hyp, {0.3, 0.9, 0.5});
    CHECK(h2.lhs == doctest::Approx(std::atanh(0.9) / std::atanh(0.3)).epsilon(1e-9));
    const FikinResult s2 = fikin_bound_check(sph, {0.3, 0.9, 0.5});
    CHECK(s2.lhs == doctest::Approx(std::atan(0.9) / std::atan(0.3)).epsilon(1e-9));
}

TEST_CASE("necessary-condition preconditions") {
    CHECK_THROWS_AS(fikin_bound_check(builtin_metric("punctured_disk"), {0.3, 0.9, 0.5}),
                    PreconditionError);
    const FikinResult flat = fikin_bound_check(builtin_metric("euclidean"), {0.3, 0.9, 0.5});
    CHECK(flat.inconclusive);
}
