#include "doctest.h"

#include <cmath>
#include <random>

#include "ngrq/oracle.hpp"
#include "ngrq/error.hpp"
#include "ngrq/fibering.hpp"
#include "ngrq/quotients.hpp"

using namespace ngrq;

namespace {

const FiberCoefficients3 unit3{1.0, 1.0, 1.0, {1.5, 2.0, 3.0}};
const FiberCoefficients4 unit4{1.0, 1.0, 1.0, 1.0, {1.2, 1.5, 2.0, 3.0}};

FiberCoefficients3 random3(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(0.2, 5.0);
    std::uniform_real_distribution<double> ex(0.0, 1.0);
    const double q = 1.1 + ex(rng), p = q + 0.2 + ex(rng), g = p + 0.2 + 1.5 * ex(rng);
    return {coef(rng), coef(rng), coef(rng), {q, p, g}};
}

}  // namespace

TEST_CASE("three-term fiber values") {
    CHECK(phi_fiber(unit3, 0.0, 1.0).phi == doctest::Approx(1.0 / 6.0));
    CHECK(phi_fiber(unit3, 0.2, 1.0).phi == doctest::Approx(0.5 - 0.2 / 1.5 - 1.0 / 3.0));
    CHECK(phi_fiber(unit3, 0.2, 1.0).phi == doctest::Approx(0.0333).epsilon(1e-2));
    CHECK_THROWS_AS(phi_fiber(unit3, 0.2, 0.0), InvalidInput);
    CHECK_THROWS_AS(phi_fiber(unit3, 0.2, -1.0), InvalidInput);
}

TEST_CASE("fiber derivatives match finite differences") {
    const double t = 0.7, h = 1e-5;
    for (double lambda : {0.0, 0.2, -0.4}) {
        const auto f = [&](double s) { return phi_fiber(unit3, lambda, s).phi; };
        const auto df = [&](double s) { return phi_fiber(unit3, lambda, s).dphi; };
        CHECK(phi_fiber(unit3, lambda, t).dphi == doctest::Approx(oracle::central_difference(f, t, h)).epsilon(1e-6));
        CHECK(phi_fiber(unit3, lambda, t).ddphi == doctest::Approx(oracle::central_difference(df, t, h)).epsilon(1e-6));
        const auto g = [&](double s) { return phi_fiber(unit4, lambda, 0.49, s).phi; };
        const auto dg = [&](double s) { return phi_fiber(unit4, lambda, 0.49, s).dphi; };
        CHECK(phi_fiber(unit4, lambda, 0.49, t).dphi == doctest::Approx(oracle::central_difference(g, t, h)).epsilon(1e-6));
        CHECK(phi_fiber(unit4, lambda, 0.49, t).ddphi == doctest::Approx(oracle::central_difference(dg, t, h)).epsilon(1e-6));
    }
}

TEST_CASE("three-term critical points") {
    const auto two = critical_points_3term(unit3, 0.2);
    REQUIRE(two.points.size() == 2);
    CHECK(two.points[0].t == doctest::Approx(0.0437).epsilon(2e-3));
    CHECK(two.points[1].t == doctest::Approx(0.772).epsilon(2e-3));
    CHECK(two.points[0].curvature == Curvature::positive);
    CHECK(two.points[1].curvature == Curvature::negative);
    for (const auto& cp : two.points) {
        const double x = cp.t;
        CHECK(std::abs(x - 0.2 * std::sqrt(x) - x * x) < 1e-10 * x);
    }
    CHECK(two.brackets.size() == 2);

    CHECK(critical_points_3term(unit3, 0.5).points.empty());

    const double lu = lambda_u(unit3).value;
    const auto tangent = critical_points_3term(unit3, lu);
    REQUIRE(tangent.points.size() == 1);
    CHECK(tangent.points[0].curvature == Curvature::zero);
    CHECK(tangent.points[0].t == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(tangent.points[0].ddphi) < 1e-8 * curvature_scale(unit3, lu, tangent.points[0].t));

    for (double lambda : {0.0, -0.3, -5.0}) {
        const auto one = critical_points_3term(unit3, lambda);
        REQUIRE(one.points.size() == 1);
        CHECK(one.points[0].curvature == Curvature::negative);
    }
}

TEST_CASE("three-term census matches brute-force sign scan") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> frac(0.05, 1.6);
    for (int i = 0; i < 100; ++i) {
        // keep the fibering points well inside the window
        auto k = random3(rng);
        k = k.scaled(1.0 / s_max(k));
        const double lambda = frac(rng) * lambda_u(k).value;
        const auto set = critical_points_3term(k, lambda);
        const int brute = oracle::sign_changes([&](double t) { return phi_fiber(k, lambda, t).dphi; }, 1e-4, 1e3);
        CHECK(static_cast<int>(set.points.size()) == brute);
        for (std::size_t j = 1; j < set.points.size(); ++j) CHECK(set.points[j].t > set.points[j - 1].t);
    }
}

TEST_CASE("tangency on a grid node stays a single point") {
    // s_max = 1 is the geometric midpoint of the window, so a grid node lands on the double root
    FiberScanOptions wide;
    wide.t_min = 1e-8;
    wide.t_max = 1e8;
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i) {
        auto k = random3(rng);
        k = k.scaled(s_max(k));
        const auto set = critical_points_3term(k, lambda_u(k).value, wide);
        REQUIRE(set.points.size() == 1);
        CHECK(set.points[0].curvature == Curvature::zero);
    }
}

TEST_CASE("four-term critical points") {
    const auto three = critical_points_4term(unit4, 0.1, 0.49);
    REQUIRE(three.points.size() == 3);
    CHECK(three.points[0].curvature == Curvature::negative);
    CHECK(three.points[1].curvature == Curvature::positive);
    CHECK(three.points[2].curvature == Curvature::negative);
    for (const auto& cp : three.points) CHECK(rn_lambda_4term(unit4, 0.1, cp.t) == doctest::Approx(0.49).epsilon(1e-9));

    // for large mu the single crossing sits near t = 0, where R^n_lambda blows up
    FiberScanOptions wide;
    wide.t_min = 1e-9;
    const auto one = critical_points_4term(unit4, 0.1, 10.0, wide);
    REQUIRE(one.points.size() == 1);
    CHECK(one.points[0].curvature == Curvature::negative);
    CHECK(one.points[0].t < 1e-6);
    CHECK(critical_points_4term(unit4, 0.1, 10.0).points.empty());

    // level far below every value of R^n_lambda on the scan window
    CHECK(critical_points_4term(unit4, 0.1, -1e6).points.empty());
}

TEST_CASE("four-term census matches brute-force sign scan") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double q = 1.1 + 0.5 * u01(rng), al = q + 0.1 + 0.5 * u01(rng), p = al + 0.1 + 0.5 * u01(rng),
                     g = p + 0.2 + u01(rng);
        FiberCoefficients4 k{0.2 + 3 * u01(rng), 0.2 + 3 * u01(rng), 0.2 + 3 * u01(rng), 0.2 + 3 * u01(rng), {q, al, p, g}};
        k = k.scaled(1.0 / t_n(k));
        const double lambda = (u01(rng) - 0.2) * 1.5 * lambda_n_quotient(k).value;
        const double mu = rn_lambda_4term(k, lambda, std::exp(2.0 * u01(rng) - 1.0)) * (0.8 + 0.4 * u01(rng));
        const auto set = critical_points_4term(k, lambda, mu);
        const int brute = oracle::sign_changes([&](double t) { return phi_fiber(k, lambda, mu, t).dphi; }, 1e-4, 1e3);
        CHECK(static_cast<int>(set.points.size()) == brute);
    }
}

TEST_CASE("scan options are validated") {
    FiberScanOptions bad;
    bad.t_min = 2.0;
    bad.t_max = 1.0;
    CHECK_THROWS_AS(critical_points_3term(unit3, 0.1, bad), InvalidInput);
    FiberCoefficients3 zero = unit3;
    zero.c = 0.0;
    CHECK_THROWS_AS(critical_points_3term(zero, 0.1), InvalidInput);
}
