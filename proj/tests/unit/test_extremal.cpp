#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "ngrq/oracle.hpp"
#include "ngrq/error.hpp"
#include "ngrq/extremal.hpp"

using namespace ngrq;

namespace {

const Exponents3 e3{1.5, 2.0, 3.0};
const Exponents4 e4{1.2, 1.5, 2.0, 3.0};

DiscreteFunction random_positive(const Domain& d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(d.interior_size());
    for (double& x : v) x = 0.1 + unit_uniform(rng());
    return DiscreteFunction(d, std::move(v));
}

// Smooth random trial: a few random positive sine modes.
DiscreteFunction random_trial(const Domain& d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double a1 = 1.0, a2 = 0.5 * unit_uniform(rng()), a3 = 0.3 * unit_uniform(rng()), s = unit_uniform(rng());
    std::vector<double> v(d.interior_size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double x = d.coordinates(k)[0] / d.extent();
        const double pi = std::numbers::pi;
        v[k] = a1 * std::sin(pi * x) + a2 * std::sin(pi * x) * std::sin(pi * x) * (x + s) + a3 * std::pow(std::sin(pi * x), 3);
    }
    return DiscreteFunction(d, std::move(v));
}

DescentOptions quick() {
    DescentOptions o;
    o.starts = 4;
    return o;
}

}  // namespace

TEST_CASE("constant quotient") {
    const auto d = Domain::interval(1.0, 50);
    const auto est = minimize_quotient(constant_quotient(7.0), d, quick());
    CHECK(est.value == 7.0);
    CHECK(est.grad_norm == 0.0);
    CHECK(est.iterations == 0);
    CHECK(gradient_check(constant_quotient(7.0), random_positive(d, 1), 1e-5) == 0.0);
}

TEST_CASE("Dirichlet eigenvalues") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const auto est = minimize_quotient(dirichlet_quotient(), Domain::interval(1.0, 200), quick());
    CHECK(est.value == doctest::Approx(pi2).epsilon(1e-2));
    CHECK(est.converged);
    const auto rect = minimize_quotient(dirichlet_quotient(), Domain::rectangle(1.0, 1.0, 41, 41), quick());
    CHECK(rect.value == doctest::Approx(2.0 * pi2).epsilon(2e-2));
    const auto ball = minimize_quotient(dirichlet_quotient(), Domain::radial(1.0, 200, 3), quick());
    CHECK(ball.value == doctest::Approx(pi2).epsilon(2e-2));
}

TEST_CASE("descent invariants") {
    const auto d = Domain::interval(1.0, 120);
    const auto est = lambda_star(d, e3, quick());
    for (const auto& s : est.starts) {
        CHECK(s.monotone);
        CHECK(s.feasible);
        CHECK(s.converged);
        CHECK(s.value >= est.value);
    }
    CHECK(est.per_start_values().size() == 4);
    const auto Q = lambda_u_quotient(e3);
    CHECK(oracle::rel(Q(est.minimizer.scaled(3.7)).value, Q(est.minimizer).value) < 1e-12);
    for (double v : est.minimizer.values()) CHECK(v >= 0.0);
    CHECK(lebesgue_integral(est.minimizer, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("determinism") {
    const auto d = Domain::interval(1.0, 80);
    auto o = quick();
    o.seed = 99;
    const auto a = lambda_star(d, e3, o);
    const auto b = lambda_star(d, e3, o);
    CHECK(a.value == b.value);
    for (std::size_t k = 0; k < a.minimizer.size(); ++k) CHECK(a.minimizer[k] == b.minimizer[k]);
    o.threads = 3;
    const auto c = lambda_star(d, e3, o);
    CHECK(c.value == a.value);
    CHECK(unit_uniform(0) == 0.0);
    CHECK(unit_uniform(~0ULL) < 1.0);
}

TEST_CASE("non-homogeneous quotient is rejected") {
    const auto q = integral_quotient(2.0, {2.0}, [](const std::vector<double>& I) {
        return IntegralReduction{I[1], {0.0, 1.0}, true};
    });
    CHECK_THROWS_AS(minimize_quotient(q, Domain::interval(1.0, 30), quick()), InvalidQuotient);
}

TEST_CASE("lambda star") {
    const auto d100 = Domain::interval(1.0, 100), d200 = Domain::interval(1.0, 200);
    const auto a = lambda_star(d100, e3, quick()), b = lambda_star(d200, e3, quick());
    CHECK(a.value > 0.0);
    CHECK(oracle::rel(a.value, b.value) < 1e-3);
    for (double v : b.per_start_values()) CHECK(oracle::rel(v, b.value) < 1e-4);
    // infimum bound against the hat function
    std::vector<double> hat(d200.interior_size());
    for (std::size_t k = 0; k < hat.size(); ++k) hat[k] = 1.0 - std::abs(2.0 * d200.coordinates(k)[0] - 1.0);
    CHECK(b.value <= lambda_u_quotient(e3)(DiscreteFunction(d200, hat)).value);
    // threshold: two fibering points just below, none just above
    const auto k = fiber_coefficients(b.minimizer, e3);
    CHECK(critical_points_3term(k, 0.999 * b.value).points.size() == 2);
    CHECK(critical_points_3term(k, 1.001 * b.value).points.empty());
}

TEST_CASE("four-term lambda extremals") {
    const auto d = Domain::interval(1.0, 100);
    const auto n = lambda_n_star(d, e4, quick()), e = lambda_e_star(d, e4, quick());
    CHECK(e.value > 0.0);
    CHECK(e.value < n.value);
    const auto qn = lambda_n_u_quotient(e4), qe = lambda_e4_u_quotient(e4);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto u = random_trial(d, s);
        CHECK(n.value <= qn(u).value);
        CHECK(e.value <= qe(u).value);
    }
    const auto n2 = lambda_n_star(Domain::interval(1.0, 200), e4, quick());
    CHECK(oracle::rel(n.value, n2.value) < 1e-3);
}

TEST_CASE("mu extremals") {
    const auto d = Domain::interval(1.0, 100);
    const double le = lambda_e_star(d, e4, quick()).value, ln = lambda_n_star(d, e4, quick()).value;
    const double lambda = 0.5 * le;
    const auto np = mu_extremal(d, e4, lambda, MuSign::plus, Flavor::n, quick(), ln);
    const auto ep = mu_extremal(d, e4, lambda, MuSign::plus, Flavor::e, quick(), le);
    const auto em = mu_extremal(d, e4, lambda, MuSign::minus, Flavor::e, quick(), le);
    const auto nm = mu_extremal(d, e4, lambda, MuSign::minus, Flavor::n, quick(), ln);
    CHECK(np.value > 0.0);
    CHECK(np.value < ep.value);
    CHECK(ep.value < em.value);
    CHECK(em.value < nm.value);
    CHECK(std::isfinite(nm.value));
    const auto q = mu_u_quotient(e4, lambda, MuSign::plus, Flavor::n);
    for (std::uint64_t s = 0; s < 5; ++s) CHECK(np.value <= q(random_trial(d, s)).value);
    CHECK_THROWS_AS(mu_extremal(d, e4, 1.5 * le, MuSign::plus, Flavor::e, quick(), le), PreconditionViolated);
    CHECK_THROWS_AS(mu_extremal(d, e4, -0.1, MuSign::plus, Flavor::n, quick(), ln), PreconditionViolated);
}

TEST_CASE("gradient checks") {
    const auto d = Domain::interval(1.0, 40);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto u = random_positive(d, s);
        CHECK(gradient_check(dirichlet_quotient(), u, 1e-5) < 1e-6);
        CHECK(gradient_check(lambda_u_quotient(e3), u, 1e-5) < 1e-5);
        CHECK(gradient_check(lambda_e_u_quotient(e3), u, 1e-5) < 1e-5);
        CHECK(gradient_check(lambda_n_u_quotient(e4), u, 1e-5) < 1e-5);
    }
    // fibering-derived quotient, at a point where it is defined
    const auto u = random_trial(d, 3);
    const auto k = fiber_coefficients(u, e4);
    const double lambda = 0.5 * lambda_e_quotient(k).value;
    for (auto sign : {MuSign::plus, MuSign::minus})
        for (auto flavor : {Flavor::n, Flavor::e})
            CHECK(gradient_check(mu_u_quotient(e4, lambda, sign, flavor), u, 1e-5) < 1e-5);
    CHECK_THROWS_AS(gradient_check(dirichlet_quotient(), DiscreteFunction::zero(d), 1e-5), InvalidInput);
}

TEST_CASE("start family") {
    for (const auto& d : {Domain::interval(2.0, 30), Domain::rectangle(1.0, 2.0, 9, 11), Domain::radial(5.0, 40, 3)}) {
        const auto s = start_functions(d, 5, 4);
        REQUIRE(s.size() == 5);
        CHECK(s[0].first == "eigenfunction");
        for (const auto& [kind, f] : s) {
            CHECK(f.sup_norm() > 0.0);
            for (double v : f.values()) CHECK(v >= 0.0);
        }
    }
}
