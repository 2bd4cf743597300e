#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ngrq/oracle.hpp"
#include "ngrq/error.hpp"
#include "ngrq/nehari.hpp"
#include "ngrq/quotients.hpp"

using namespace ngrq;

namespace {

const Exponents3 e3{1.5, 2.0, 3.0};
const Exponents4 e4{1.2, 1.5, 2.0, 3.0};

DiscreteFunction hat(const Domain& d) {
    std::vector<double> v(d.interior_size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double x = d.coordinates(k)[0];
        v[k] = std::min(x, 1.0 - x);
    }
    return DiscreteFunction(d, std::move(v));
}

DiscreteFunction random_trial(const Domain& d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double a2 = unit_uniform(rng()), a3 = unit_uniform(rng()), c = 0.2 + 0.6 * unit_uniform(rng());
    std::vector<double> v(d.interior_size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double x = d.coordinates(k)[0];
        const double pi = std::numbers::pi;
        v[k] = std::sin(pi * x) + a2 * std::sin(2 * pi * x) * 0.5 + a3 * std::max(0.0, 0.3 - std::abs(x - c));
        v[k] = std::max(v[k], 0.0);
    }
    return DiscreteFunction(d, std::move(v));
}

double fiber_slope(const DiscreteFunction& w, double lambda) {
    const auto k = fiber_coefficients(w, e3);
    return phi_fiber(k, lambda, 1.0).dphi;
}

struct ThreeTermFixture {
    Domain d = Domain::interval(1.0, 101);
    ExtremalEstimate star = lambda_star(d, e3, {});
    double lambda = 0.5 * star.value;
};

const ThreeTermFixture& fixture() {
    static const ThreeTermFixture f;
    return f;
}

}  // namespace

TEST_CASE("projection onto the Nehari set") {
    const Domain d = Domain::interval(1.0, 101);
    const DiscreteFunction u = hat(d);
    const double lu = lambda_u(fiber_coefficients(u, e3)).value;

    const auto plus = project_to_nehari(u, 0.5 * lu, Branch::plus, e3);
    const auto minus = project_to_nehari(u, 0.5 * lu, Branch::minus, e3);
    CHECK(plus.t < minus.t);
    CHECK_FALSE(plus.degenerate);
    // oracle: the fiber derivative vanishes at both scaled functions
    const auto k = fiber_coefficients(u, e3);
    const auto dphi = [&](double t) { return phi_fiber(k, 0.5 * lu, t).dphi; };
    const double h = 1e-6;
    CHECK(std::abs(dphi(plus.t)) < 1e-9 * k.a * std::pow(plus.t, e3.p - 1));
    CHECK(std::abs(dphi(minus.t)) < 1e-9 * k.a * std::pow(minus.t, e3.p - 1));
    CHECK(oracle::central_difference(dphi, plus.t, h * plus.t) > 0.0);
    CHECK(oracle::central_difference(dphi, minus.t, h * minus.t) < 0.0);

    // a point already on the set is a fixed point
    const auto again = project_to_nehari(plus.u, 0.5 * lu, Branch::plus, e3);
    CHECK(again.t == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(project_to_nehari(u, 1.01 * lu, Branch::plus, e3), ProjectionNonexistent);
    CHECK(project_to_nehari(u, lu, Branch::plus, e3).degenerate);
    CHECK_THROWS_AS(project_to_nehari(DiscreteFunction::zero(d), 1.0, Branch::plus, e3), InvalidInput);
    CHECK_THROWS_AS(project_to_nehari(u, 0.1, Branch::rn1, e3), InvalidInput);
    // far below lambda(u) the plus point leaves the default scan window
    const auto tiny = project_to_nehari(u, 1e-6 * lu, Branch::plus, e3);
    CHECK(std::abs(fiber_slope(tiny.u, 1e-6 * lu)) < 1e-9 * gradient_integral(tiny.u, 2.0));
}

TEST_CASE("two solutions below lambda star") {
    const auto& f = fixture();
    const auto plus = solve_M(f.lambda, Branch::plus, f.d, e3);
    const auto minus = solve_M(f.lambda, Branch::minus, f.d, e3);
    const NehariOptions opt;

    CHECK(plus.converged);
    CHECK(minus.converged);
    CHECK(plus.residual < 1e-6);
    CHECK(minus.residual < 1e-6);
    CHECK(plus.energy < 0.0);
    CHECK(minus.energy > 0.0);
    CHECK(plus.phi2 > 0.0);
    CHECK(minus.phi2 < 0.0);
    CHECK(std::abs(plus.energy - minus.energy) > 10 * opt.tol_res);
    CHECK(plus.admissible);
    CHECK(minus.admissible);
    CHECK(std::abs(plus.dphi) < opt.tol_fiber);
    CHECK(std::abs(minus.dphi) < opt.tol_fiber);
    CHECK(plus.coercivity_violations == 0);
    CHECK(minus.coercivity_violations == 0);
    for (double x : plus.u.values()) CHECK(x >= 0.0);
    for (double x : minus.u.values()) CHECK(x >= 0.0);
    CHECK(plus.lambda() == f.lambda);
    CHECK(std::isnan(plus.mu()));

    // minimality audit against projected random trials
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto trial = random_trial(f.d, 100 + s);
        const auto pp = project_to_nehari(trial, f.lambda, Branch::plus, e3);
        const auto pm = project_to_nehari(trial, f.lambda, Branch::minus, e3);
        const auto kp = fiber_coefficients(pp.u, e3), km = fiber_coefficients(pm.u, e3);
        CHECK(plus.energy <= phi_fiber(kp, f.lambda, 1.0).phi + 1e-12);
        CHECK(minus.energy <= phi_fiber(km, f.lambda, 1.0).phi + 1e-12);
    }
}

TEST_CASE("solve_M preconditions") {
    const Domain d = Domain::interval(1.0, 41);
    CHECK_THROWS_AS(solve_M(0.0, Branch::plus, d, e3), PreconditionViolated);
    CHECK_THROWS_AS(solve_M(-1.0, Branch::minus, d, e3), PreconditionViolated);
    CHECK_THROWS_AS(solve_M(1.0, Branch::rn2, d, e3), InvalidInput);
    // far above lambda star every start is infeasible
    CHECK_THROWS_AS(solve_M(1e3, Branch::plus, d, e3), Infeasible);
}

TEST_CASE("coercivity bound") {
    const Domain d = Domain::interval(1.0, 101);
    const double C = coercivity_constant(d, e3);
    // int |u|^q <= C (int |u'|^p)^{q/p} on random trials
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto u = random_trial(d, s).scaled(0.3 + s);
        CHECK(lebesgue_integral(u, e3.q) <= C * std::pow(gradient_integral(u, e3.p), e3.q / e3.p));
    }
    const Domain r = Domain::rectangle(1.0, 2.0, 21, 31);
    CHECK(coercivity_constant(r, e3) > 0.0);
    CHECK_THROWS_AS(coercivity_constant(Domain::radial(1.0, 21, 3), e3), InvalidInput);
}

TEST_CASE("verify") {
    const auto& f = fixture();
    const auto plus = solve_M(f.lambda, Branch::plus, f.d, e3);
    const auto report = verify(plus);
    CHECK(report.ok());
    CHECK(report.checks.size() == 5);

    std::mt19937_64 rng(7);
    auto noisy = plus;
    std::vector<double> v(plus.u.values().begin(), plus.u.values().end());
    for (double& x : v) x *= 1.0 + 0.1 * (2.0 * unit_uniform(rng()) - 1.0);
    noisy.u = DiscreteFunction(f.d, std::move(v));
    const auto bad = verify(noisy);
    CHECK_FALSE(bad.ok());
    for (const auto& [name, pass] : bad.checks)
        if (name == "residual") CHECK_FALSE(pass);

    auto zero = plus;
    zero.u = DiscreteFunction::zero(f.d);
    const auto z = verify(zero);
    CHECK_FALSE(z.ok());
    CHECK(z.checks.front().first == "nonzero");
    CHECK_FALSE(z.checks.front().second);
    CHECK_FALSE(assess(zero.u, zero.params, Branch::plus, {}).admissible);
}

TEST_CASE("four-term solutions in the window") {
    const Domain d = Domain::interval(1.0, 101);
    const auto le = lambda_e_star(d, e4);
    const auto ln = lambda_n_star(d, e4);
    const double lambda = 0.5 * le.value;
    const auto w = estimate_window(lambda, d, e4, le, ln);
    CHECK(w.mu_n_plus < w.mu_e_plus);
    CHECK(w.mu_e_plus < w.mu_e_minus);
    CHECK(w.mu_e_minus < w.mu_n_minus);
    CHECK(w.seeds.size() == 4);
    const double mu = 0.5 * (w.mu_e_minus + w.mu_n_minus);

    const auto s1 = solve_three_term(lambda, mu, Branch::rn1, d, e4, w);
    const auto s2 = solve_three_term(lambda, mu, Branch::rn2, d, e4, w);
    for (const auto* s : {&s1, &s2}) {
        CHECK(s->converged);
        CHECK(s->residual < 1e-6);
        CHECK(s->energy < 0.0);
        CHECK(s->admissible);
        CHECK(verify(*s).ok());
        CHECK(s->mu() == mu);
    }
    CHECK(s1.phi2 > 0.0);
    CHECK(s2.phi2 < 0.0);
    CHECK(s1.energy <= s2.energy);
    CHECK(std::abs(s1.energy - s2.energy) > 1e-5);

    CHECK_THROWS_AS(solve_three_term(lambda, 0.99 * w.mu_n_plus, Branch::rn1, d, e4, w), PreconditionViolated);
    CHECK_THROWS_AS(solve_three_term(lambda, 1.01 * w.mu_n_minus, Branch::rn2, d, e4, w), PreconditionViolated);
    CHECK_THROWS_AS(solve_three_term(1.01 * le.value, mu, Branch::rn1, d, e4, w), PreconditionViolated);
    CHECK_THROWS_AS(solve_three_term(lambda, mu, Branch::plus, d, e4, w), InvalidInput);
    CHECK_THROWS_AS(estimate_window(1.01 * le.value, d, e4, le, ln), PreconditionViolated);
}

TEST_CASE("branch continuation") {
    const auto& f = fixture();
    CHECK(continue_branch({}, Branch::plus, f.d, e3).rows.empty());
    CHECK_THROWS_AS(continue_branch({1.0, 1.0}, Branch::plus, f.d, e3), InvalidInput);
    CHECK_THROWS_AS(continue_branch({-1.0}, Branch::plus, f.d, e3), InvalidInput);

    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(f.star.value * 0.06 * i);
    const auto diagram = continue_branch(grid, Branch::plus, f.d, e3);
    REQUIRE(diagram.rows.size() == grid.size());
    double prev = 0.0;
    bool failed = false;
    for (const auto& r : diagram.rows) {
        if (r.lambda < f.star.value) {
            CHECK(r.admissible);
            CHECK(r.energy < prev);
            prev = r.energy;
        }
        if (failed) CHECK_FALSE(r.attempted);
        failed = failed || !r.admissible;
    }
    REQUIRE(diagram.lambda_f);
    REQUIRE(diagram.lambda_fail);
    CHECK(*diagram.lambda_f >= f.star.value * (1.0 - 1e-9));
    CHECK(*diagram.lambda_fail - *diagram.lambda_f < 1e-2 * f.star.value);
    CHECK(diagram.last_solution);
}

TEST_CASE("branch names") {
    for (Branch b : {Branch::plus, Branch::minus, Branch::rn1, Branch::rn2}) CHECK(parse_branch(branch_name(b)) == b);
    CHECK_THROWS_AS(parse_branch("up"), InvalidInput);
}
