#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "annuli/errors.hpp"
#include "annuli/metric.hpp"
#include "annuli/nitsche.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace annuli;

TEST_CASE("modulus") {
    CHECK(modulus(0.5, 1.0) == doctest::Approx(2.0 * M_PI * std::log(2.0)).epsilon(1e-14));
    CHECK(std::fabs(modulus(0.5, 1.0) - 4.3551721) < 1e-6);
    CHECK(modulus(0.3, 0.3 * std::exp(1.0)) == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
    CHECK(modulus(0.25, 1.0) == doctest::Approx(2.0 * modulus(0.5, 1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(modulus(1.0, 0.5), GeometryError);
}

TEST_CASE("classical bound for the flat metric") {
    const AnnulusGeometry g{0.5, 1.0, 0.5};
    const BoundResult b = nitsche_bound(builtin_metric("euclidean"), g);
    CHECK_FALSE(b.degenerate);
    CHECK(std::fabs(b.r_star - oracles::kRStarEuclid) < 1e-10);
    // sigma/tau = (r* + 1/r*)/2
    CHECK(std::fabs(2.0 - 0.5 * (b.r_star + 1.0 / b.r_star)) < 1e-9);
}

TEST_CASE("constant s*rho degenerates the bound") {
    const AnnulusGeometry g{0.5, 1.0, 0.5};
    const BoundResult b = nitsche_bound(builtin_metric("inverse_radius"), g);
    CHECK(b.degenerate);
    CHECK(b.r_star == 0.0);
}

TEST_CASE("thin target annulus pushes the bound to 1") {
    const AnnulusGeometry g{0.5, 0.5 + 1e-6, 0.5};
    const BoundResult b = nitsche_bound(builtin_metric("euclidean"), g);
    CHECK(b.r_star > 0.99);
    CHECK(b.r_star < 1.0);
}

TEST_CASE("bound refuses non-regular metrics") {
    const AnnulusGeometry g{0.5, 0.9, 0.5};
    CHECK_THROWS_AS(nitsche_bound(builtin_metric("hyperbolic_annulus", {2.0}), g),
                    RegularityError);
}

TEST_CASE("frozen bound for the hyperbolic disk window") {
    const AnnulusGeometry g{0.5, 0.9, 0.5};
    const BoundResult b = nitsche_bound(builtin_metric("hyperbolic_disk"), g);
    CHECK(std::fabs(b.r_star - oracles::kRStarHyp) < 1e-10);
}

TEST_CASE("conformal solve for the flat metric") {
    const AnnulusGeometry g{0.5, 1.0, 0.5};
    const NitscheProfile p = solve_c(builtin_metric("euclidean"), g);
    CHECK(std::fabs(p.c()) < 1e-9);
    // phi(s) = log(s/sigma)
    for (int i = 1; i < 16; ++i) {
        const double s = 0.5 + 0.5 * i / 16.0;
        CHECK(std::fabs(p.phi(s) - std::log(s)) < 1e-9);
    }
}

TEST_CASE("power solve for the constant-s*rho metric") {
    const AnnulusGeometry g{0.5, 1.0, 0.25};
    const NitscheProfile p = solve_c(builtin_metric("inverse_radius"), g);
    CHECK(std::fabs(p.c() - (-0.75)) < 1e-8);
    // phi(s) = alpha log(s/sigma) with alpha = Mod(A)/Mod(A') = 2
    for (int i = 1; i < 16; ++i) {
        const double s = 0.5 + 0.5 * i / 16.0;
        CHECK(std::fabs(p.phi(s) - 2.0 * std::log(s)) < 1e-9);
    }
}

TEST_CASE("solving at the bound returns the critical parameter") {
    const AnnulusGeometry g{0.5, 1.0, oracles::kRStarEuclid};
    const NitscheProfile p = solve_c(builtin_metric("euclidean"), g);
    CHECK(p.is_critical());
    CHECK(std::fabs(p.c() - (-0.25)) < 1e-8);
}

TEST_CASE("solved c for the hyperbolic disk matches the oracle") {
    const AnnulusGeometry g{0.5, 0.9, 0.6};
    const NitscheProfile p = solve_c(builtin_metric("hyperbolic_disk"), g);
    CHECK(std::fabs(p.c() - oracles::kCHypR06) < 1e-8 * std::max(1.0, oracles::kCHypR06));
    CHECK(std::fabs(p.r_achieved() - 0.6) < 1e-9);
}

TEST_CASE("below the bound the solve refuses") {
    const AnnulusGeometry g{0.5, 1.0, 0.1};
    CHECK_THROWS_AS(solve_c(builtin_metric("euclidean"), g), RegimeError);
}

TEST_CASE("critical profile reproduces the bound") {
    for (const char* name : {"euclidean", "hyperbolic_disk", "punctured_disk", "spherical", "cigar"}) {
        const AnnulusGeometry g{0.5, 0.9, 0.5};
        const RadialMetric m = builtin_metric(name);
        const NitscheProfile p = critical_profile(m, g);
        const BoundResult b = nitsche_bound(m, g);
        CHECK(p.is_critical());
        CHECK(std::fabs(p.r_achieved() - b.r_star) < 1e-9);
    }
}

TEST_CASE("critical profile of a degenerate metric is an error") {
    const AnnulusGeometry g{0.5, 1.0, 0.5};
    CHECK_THROWS_AS(critical_profile(builtin_metric("inverse_radius"), g), DegeneracyError);
}

TEST_CASE("solve at the critical radius returns c near the boundary parameter") {
    const AnnulusGeometry base{0.5, 0.9, 0.5};
    const RadialMetric m = builtin_metric("hyperbolic_disk");
    const NitscheProfile crit = critical_profile(m, base);
    const AnnulusGeometry g{0.5, 0.9, crit.r_achieved()};
    const NitscheProfile p = solve_c(m, g);
    CHECK(std::fabs(p.c() - crit.c_critical()) < 1e-8 * std::max(1.0, std::fabs(crit.c_critical())));
}

TEST_CASE("R(c) is strictly increasing and the solve is consistent") {
    const RadialMetric m = builtin_metric("hyperbolic_disk");
    const AnnulusGeometry g{0.5, 0.9, 0.55};
    const NitscheProfile p = solve_c(m, g);
    CHECK(std::fabs(p.r_achieved() - 0.55) < 1e-9);
    // move the parameter: r must move the same way
    double prev = 0.0;
    for (double r : {0.45, 0.55, 0.65, 0.80, 0.92}) {
        const AnnulusGeometry gi{0.5, 0.9, r};
        const double c = solve_c(m, gi).c();
        CHECK(c > prev - 1e-12);
        prev = c;
    }
}

TEST_CASE("profile invariants") {
    const RadialMetric m = builtin_metric("hyperbolic_disk");
    const AnnulusGeometry g{0.5, 0.9, 0.6};
    const NitscheProfile p = solve_c(m, g);
    CHECK(p.c() >= p.c_critical());
    CHECK(std::fabs(p.phi(0.9)) < 1e-12);
    CHECK(p.phi(0.5) == doctest::Approx(std::log(p.r_achieved())).epsilon(1e-10));
    // strict monotonicity across nodes and the sign rule for s^2 phi'^2 - 1
    const auto nodes = p.nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        CHECK(nodes[i].second < nodes[i + 1].second);
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const double s = nodes[i].first;
        const double sp = s * p.phi_prime(s);
        const double lhs = sp * sp - 1.0;
        if (p.c() > 1e-10) CHECK(lhs <= 1e-10);
        if (p.c() < -1e-10) CHECK(lhs >= -1e-10);
    }
}

TEST_CASE("flat-metric inverse profile is a Moebius-type radial map") {
    // q^{-1}(x) = A x + B / x for constants fixed by two nodes
    const AnnulusGeometry g{0.5, 1.0, 0.35};
    const NitscheProfile p = solve_c(builtin_metric("euclidean"), g);
    const double x1 = 0.45, x2 = 0.8;
    const double g1 = p.q_inv(x1), g2 = p.q_inv(x2);
    const double B = (g1 - g2 * x1 / x2) / (1.0 / x1 - x1 / x2);
    const double A = (g2 - B / x2) / x2;
    for (int i = 0; i < 40; ++i) {
        const double x = 0.35 + 0.65 * (i + 0.5) / 40.0;
        CHECK(std::fabs(p.q_inv(x) - (A * x + B / x)) < 1e-7);
    }
}

TEST_CASE("profile round-trips through its serialized nodes") {
    const AnnulusGeometry g{0.5, 0.9, 0.6};
    const RadialMetric m = builtin_metric("hyperbolic_disk");
    const NitscheProfile p = solve_c(m, g);
    const NitscheProfile q = NitscheProfile::from_nodes(m, p.tau(), p.sigma(), p.c(),
                                                        p.is_critical(), p.nodes());
    for (int i = 0; i < 24; ++i) {
        const double s = 0.5 + 0.4 * (i + 0.5) / 24.0;
        CHECK(std::fabs(p.phi(s) - q.phi(s)) < 1e-9);
    }
}
