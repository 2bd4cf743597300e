#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ngrq/error.hpp"
#include "ngrq/gridfield.hpp"

using namespace ngrq;

namespace {

DiscreteFunction sample(const Domain& d, auto&& f) {
    std::vector<double> v(d.interior_size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto x = d.coordinates(k);
        v[k] = x.size() == 1 ? f(x[0], 0.0) : f(x[0], x[1]);
    }
    return DiscreteFunction(d, std::move(v));
}

DiscreteFunction hat(int nodes) {
    return sample(Domain::interval(1.0, nodes), [](double x, double) { return 1.0 - std::abs(2.0 * x - 1.0); });
}

DiscreteFunction bump(const Domain& d) {
    return sample(d, [](double r, double) { return r < 2.0 ? std::pow(1.0 - r * r / 4.0, 2) : 0.0; });
}

DiscreteFunction random_positive(const Domain& d, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    std::vector<double> v(d.interior_size());
    for (double& x : v) x = dist(rng);
    return DiscreteFunction(d, std::move(v));
}

}  // namespace

TEST_CASE("domain layout") {
    const auto i = Domain::interval(2.0, 11);
    CHECK(i.interior_size() == 9);
    CHECK(i.spacing() == doctest::Approx(0.2));
    CHECK(i.coordinates(0)[0] == doctest::Approx(0.2));
    const auto r = Domain::radial(5.0, 6, 3);
    CHECK(r.interior_size() == 5);
    CHECK(r.coordinates(0)[0] == 0.0);
    const auto q = Domain::rectangle(1.0, 2.0, 5, 9);
    CHECK(q.interior_size() == 3 * 7);
    CHECK(q.coordinates(4)[0] == doctest::Approx(0.5));
    CHECK(q.coordinates(4)[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(Domain::radial(1.0, 10, 2), InvalidInput);
    CHECK_THROWS_AS(Domain::interval(1.0, 2), InvalidInput);
    CHECK_THROWS_AS(Domain::interval(-1.0, 20), InvalidInput);
    CHECK(i.refined(2).nodes() == 21);
}

TEST_CASE("node weights sum to the measure") {
    double s = 0.0;
    for (double w : Domain::interval(1.0, 101).node_weights()) s += w;
    CHECK(s == doctest::Approx(0.99));
    s = 0.0;
    const auto r = Domain::radial(1.0, 801, 3);
    for (double w : r.node_weights()) s += w;
    CHECK(s == doctest::Approx(r.measure()).epsilon(1e-2));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("invalid values are rejected") {
    const auto d = Domain::interval(1.0, 5);
    CHECK_THROWS_AS(DiscreteFunction(d, {1.0, NAN, 0.0}), InvalidInput);
    CHECK_THROWS_AS(DiscreteFunction(d, {1.0, 2.0}), InvalidInput);
    CHECK_THROWS_AS(DiscreteFunction(d, {1.0, INFINITY, 0.0}), InvalidInput);
}

TEST_CASE("zero function integrates to zero") {
    for (const auto& d : {Domain::interval(1.0, 20), Domain::rectangle(1.0, 1.0, 7, 9), Domain::radial(3.0, 40, 3)}) {
        const double ex[] = {1.5, 2.0, 3.0};
        const auto b = integrate(DiscreteFunction::zero(d), ex, 2.0);
        CHECK(b.grad_p == 0.0);
        for (const auto& [r, v] : b.lebesgue) CHECK(v == 0.0);
        CHECK(residual(DiscreteFunction::zero(d), ConvexConcaveProblem{1.5, 2.0, 3.0, 0.3}) == 0.0);
    }
}

TEST_CASE("hat function quadrature converges") {
    double prev_err = 1.0;
    for (int n : {11, 21, 41, 81}) {
        const auto u = hat(n);
        CHECK(gradient_integral(u, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
        const double err = std::abs(lebesgue_integral(u, 2.0) - 1.0 / 3.0);
        CHECK(err <= 0.5 * prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-4);
}

TEST_CASE("integrals are exactly homogeneous") {
    for (const auto& d : {Domain::interval(1.0, 30), Domain::rectangle(1.0, 2.0, 8, 11), Domain::radial(2.0, 25, 4)}) {
        const auto u = random_positive(d, 7);
        const auto v = u.scaled(2.0);
        for (double r : {1.5, 2.0, 3.7}) {
            CHECK(lebesgue_integral(v, r) == doctest::Approx(std::pow(2.0, r) * lebesgue_integral(u, r)).epsilon(1e-14));
            CHECK(gradient_integral(v, r) == doctest::Approx(std::pow(2.0, r) * gradient_integral(u, r)).epsilon(1e-14));
        }
    }
}

TEST_CASE("radial quadrature matches ball integrals") {
    const auto d = Domain::radial(2.0, 2001, 3);
    const auto u = sample(d, [](double r, double) { return 1.0 - r * r / 4.0; });
    CHECK(lebesgue_integral(u, 2.0) > 0.0);
    // int 4 pi r^2 (1 - r^2/4)^2 dr over (0,2) = 4 pi * 64/105
    CHECK(lebesgue_integral(u, 2.0) == doctest::Approx(4.0 * std::numbers::pi * 64.0 / 105.0).epsilon(1e-5));
    // |grad u|^2 = r^2/4: int 4 pi r^4 / 4 = pi * 32/5
    CHECK(gradient_integral(u, 2.0) == doctest::Approx(std::numbers::pi * 32.0 / 5.0).epsilon(1e-3));
}

TEST_CASE("rectangle quadrature") {
    const auto d = Domain::rectangle(1.0, 1.0, 201, 201);
    const double pi = std::numbers::pi;
    const auto u = sample(d, [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    CHECK(lebesgue_integral(u, 2.0) == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(gradient_integral(u, 2.0) == doctest::Approx(pi * pi / 2.0).epsilon(1e-3));
}

TEST_CASE("dilation") {
    const auto d = Domain::radial(10.0, 2001, 3);
    const auto u = bump(d);
    const auto same = dilate(u, 1.0);
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(same[k] == u[k]);
    const double T = gradient_integral(u, 2.0), B = lebesgue_integral(u, 3.0), A = lebesgue_integral(u, 4.0);
    for (double s : {0.5, 2.0, 4.0}) {
        const auto v = dilate(u, s);
        CHECK(gradient_integral(v, 2.0) == doctest::Approx(s * T).epsilon(2e-3));
        CHECK(lebesgue_integral(v, 3.0) == doctest::Approx(s * s * s * B).epsilon(2e-3));
        CHECK(lebesgue_integral(v, 4.0) == doctest::Approx(s * s * s * A).epsilon(2e-3));
    }
    CHECK_THROWS_AS(dilate(u, 6.0), DomainOverflow);
    CHECK_THROWS_AS(dilate(hat(11), 1.0), InvalidInput);

    // error shrinks under refinement
    auto err = [](int n) {
        const auto dd = Domain::radial(10.0, n, 3);
        const auto uu = bump(dd);
        return std::abs(gradient_integral(dilate(uu, 1.7), 2.0) / gradient_integral(uu, 2.0) - 1.7);
    };
    CHECK(err(201) > 1e-12);
    CHECK(err(801) < err(201));
    // sigma = 2 maps nodes onto cell midpoints of a piecewise-linear function: exact
    CHECK(gradient_integral(dilate(u, 2.0), 2.0) == doctest::Approx(2.0 * T).epsilon(1e-12));
}

TEST_CASE("discrete Laplacian of sine") {
    const double pi = std::numbers::pi;
    const auto d = Domain::interval(1.0, 401);
    const auto u = sample(d, [pi](double x, double) { return std::sin(pi * x); });
    const EnergyForm form{2.0, 0.5, {}};
    const auto field = residual_field(u, form);
    for (std::size_t k = 0; k < field.size(); k += 37)
        CHECK(field[k] == doctest::Approx(pi * pi * std::sin(pi * d.coordinates(k)[0])).epsilon(1e-4));
    CHECK(residual(u, form) == doctest::Approx(pi * pi).epsilon(1e-4));
    CHECK(residual(u, ConvexConcaveProblem{1.5, 2.0, 3.0, 0.0}) > 0.0);
}

TEST_CASE("integral derivatives match finite differences") {
    for (const auto& d : {Domain::interval(1.0, 12), Domain::rectangle(1.0, 1.5, 6, 7), Domain::radial(2.0, 10, 3)}) {
        const auto u = random_positive(d, 3);
        for (double r : {1.5, 2.0, 3.0}) {
            const auto gl = lebesgue_integral_derivative(u, r);
            const auto gg = gradient_integral_derivative(u, r);
            for (std::size_t k = 0; k < u.size(); ++k) {
                const double h = 1e-6;
                std::vector<double> up(u.values().begin(), u.values().end()), um = up;
                up[k] += h;
                um[k] -= h;
                const DiscreteFunction fp(d, up), fm(d, um);
                const double fdl = (lebesgue_integral(fp, r) - lebesgue_integral(fm, r)) / (2 * h);
                const double fdg = (gradient_integral(fp, r) - gradient_integral(fm, r)) / (2 * h);
                CHECK(gl[k] == doctest::Approx(fdl).epsilon(1e-6));
                CHECK(gg[k] == doctest::Approx(fdg).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("energy forms per family") {
    const auto d = Domain::interval(1.0, 30);
    const auto u = random_positive(d, 11);
    const auto f3 = energy_form(ConvexConcaveProblem{1.5, 2.0, 3.0, 0.2});
    const double e = gradient_integral(u, 2.0) / 2.0 - 0.2 * lebesgue_integral(u, 1.5) / 1.5 - lebesgue_integral(u, 3.0) / 3.0;
    CHECK(energy(u, f3) == doctest::Approx(e));
    const auto f4 = energy_form(FourTermProblem{1.2, 1.5, 2.0, 3.0, 0.1, 0.4});
    CHECK(f4.terms.size() == 3);
    CHECK(f4.terms[0].weight > 0.0);
    const auto fz = energy_form(ZeroMassProblem{4.0, 3.0, 1.0});
    CHECK(fz.grad_exponent == 2.0);
    CHECK(parse_family("four-term") == Family::four_term);
    CHECK(family_name(Family::zero_mass) == "zero-mass");
    CHECK_THROWS_AS(parse_family("cubic"), InvalidInput);
}

TEST_CASE("stiffness solver inverts the discrete Laplacian") {
    for (const auto& d : {Domain::interval(1.0, 50), Domain::rectangle(1.0, 1.0, 9, 12), Domain::radial(3.0, 40, 3)}) {
        const auto u = random_positive(d, 5);
        const StiffnessSolver K(d);
        // gradient of (1/2) int |grad u|^2 is K u
        auto ku = gradient_integral_derivative(u, 2.0);
        for (double& x : ku) x *= 0.5;
        const auto back = K.solve(ku);
        for (std::size_t k = 0; k < u.size(); ++k) CHECK(back[k] == doctest::Approx(u[k]).epsilon(1e-9));
        CHECK(K.energy_norm_squared(u.values()) == doctest::Approx(gradient_integral(u, 2.0)).epsilon(1e-12));
    }
}
