#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "annuli/errors.hpp"
#include "annuli/minseq.hpp"
#include "oracles.hpp"

#include <cmath>
#include <memory>

using namespace annuli;

namespace {

const AnnulusGeometry kFat{0.5, 1.0, 0.1};

std::shared_ptr<NitscheProfile> critical_euclid() {
    static auto p =
        std::make_shared<NitscheProfile>(critical_profile(builtin_metric("euclidean"), kFat));
    return p;
}

} // namespace

TEST_CASE("splice radius exists exactly when the power piece can reach") {
    // 0.1 * 2^n > 1 first holds at n = 4
    CHECK_THROWS_AS(splice_radius(*critical_euclid(), 0.1, 3), BracketError);
    const double s4 = splice_radius(*critical_euclid(), 0.1, 4);
    CHECK(s4 > 0.5);
    CHECK(s4 < 1.0);
}

TEST_CASE("splice radius decreases toward the inner edge") {
    double prev = 1.0;
    for (int n : {10, 30, 100, 300, 1000}) {
        const double s_n = splice_radius(*critical_euclid(), 0.1, n);
        CHECK(s_n < prev);
        CHECK(s_n > 0.5);
        prev = s_n;
    }
    CHECK(prev - 0.5 < 1e-3);
}

TEST_CASE("splice against the exact flat-metric equation") {
    // q#(s) = exp(arccosh(s/tau) - arccosh(sigma/tau)) for the flat metric
    for (int n : {10, 100, 1000}) {
        const double s_n = splice_radius(*critical_euclid(), 0.1, n);
        const double lhs = std::acosh(s_n / 0.5) - std::acosh(2.0);
        const double rhs = std::log(0.1) + n * std::log(s_n / 0.5);
        CHECK(std::fabs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("excess limit n(s_n - tau) -> tau log(r'/r)") {
    const double target = 0.5 * std::log(oracles::kRStarEuclid / 0.1);
    const double e4 = 1e4 * (splice_radius(*critical_euclid(), 0.1, 10000) - 0.5);
    const double e5 = 1e5 * (splice_radius(*critical_euclid(), 0.1, 100000) - 0.5);
    // oracle values: deviations 1.4398% and 0.452%
    CHECK(std::fabs(e4 - 0.499908952335) < 1e-8);
    CHECK(std::fabs(e4 / target - 1.0) < 0.015);
    CHECK(std::fabs(e5 / target - 1.0) < 0.01);
}

TEST_CASE("element continuity at the splice") {
    auto crit = critical_euclid();
    for (int n : {10, 100, 1000}) {
        const MinSeqElement el = build_element(crit, kFat, n);
        const double inner = 0.1 * std::pow(el.s_n, n) / std::pow(0.5, n);
        const double outer = crit->q(el.s_n);
        CHECK(std::fabs(inner - outer) < 1e-10);
        // evaluating the piecewise map right at the splice stays continuous
        const double left = std::abs(map_eval(el.map, std::polar(el.s_n * (1 - 1e-12), 0.3)));
        const double right = std::abs(map_eval(el.map, std::polar(el.s_n * (1 + 1e-12), 0.3)));
        CHECK(std::fabs(left - right) < 1e-9);
    }
}

TEST_CASE("inner piece has constant distortion (n + 1/n)/2") {
    const MinSeqElement el = build_element(critical_euclid(), kFat, 12);
    for (double s : {0.501, 0.505, (0.5 + el.s_n) / 2}) {
        if (s >= el.s_n) continue;
        CHECK(distortion_at(el.map, s) == doctest::Approx(0.5 * (12.0 + 1.0 / 12.0)).epsilon(1e-12));
    }
}

TEST_CASE("sequence values stay above the bound and decrease") {
    const LimitStudy study =
        limit_study(builtin_metric("euclidean"), kFat, {10, 30, 100, 300, 1000});
    CHECK(std::fabs(study.bound - oracles::kBoundEuclidFat) < 1e-8);
    double prev = 1e300;
    for (const LimitRow& row : study.rows) {
        CHECK(row.gap > 0.0);
        CHECK(row.K_rho_n <= prev + 1e-9);
        prev = row.K_rho_n;
    }
}

TEST_CASE("gaps match the independent oracle") {
    const LimitStudy study =
        limit_study(builtin_metric("euclidean"), kFat, {10, 100, 1000, 3000});
    CHECK(std::fabs(study.rows[0].gap - oracles::kGapN10) < 1e-8);
    CHECK(std::fabs(study.rows[1].gap - oracles::kGapN100) < 1e-8);
    CHECK(std::fabs(study.rows[2].gap - oracles::kGapN1000) < 1e-8);
    CHECK(std::fabs(study.rows[3].gap - oracles::kGapN3000) < 1e-8);
    CHECK(study.rows[3].gap < 0.1 * study.rows[1].gap);
}

TEST_CASE("first-order decay of the gap") {
    const LimitStudy study =
        limit_study(builtin_metric("euclidean"), kFat, {100, 300, 1000, 3000});
    CHECK(study.fitted_C > 0.0);
    CHECK(study.fitted_rate > 0.8);
    CHECK(study.fitted_rate < 1.3);
    // the proof's intermediate limit (n/2)(s_n^2 - tau^2) -> tau^2 log(r'/r)
    const double target2 = 0.25 * std::log(oracles::kRStarEuclid / 0.1);
    const LimitRow& last = study.rows.back();
    const double mid = 0.5 * last.n * (last.s_n * last.s_n - 0.25);
    CHECK(std::fabs(mid / target2 - 1.0) < 0.03);
}

TEST_CASE("minimizing sequence needs the fat regime") {
    CHECK_THROWS_AS(limit_study(builtin_metric("euclidean"), {0.5, 1.0, 0.5}, {10, 100}),
                    RegimeError);
    CHECK_THROWS_AS(build_element(builtin_metric("euclidean"), {0.5, 1.0, 0.5}, 10), RegimeError);
}
