#include "ngrq/quotients.hpp"

#include <cmath>
#include <string>

#include "ngrq/error.hpp"
#include "ngrq/roots.hpp"

namespace ngrq {

namespace {

void require_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("quotient parameter t must be positive");
}

}  // namespace

double rn_3term(const FiberCoefficients3& k, double t) {
    require_t(t);
    const auto& e = k.exps;
    return (k.a * std::pow(t, e.p - e.q) - k.c * std::pow(t, e.gamma - e.q)) / k.b;
}

double s_max(const FiberCoefficients3& k) {
    const auto& e = k.exps;
    return std::pow((e.p - e.q) * k.a / ((e.gamma - e.q) * k.c), 1.0 / (e.gamma - e.p));
}

QuotientValue lambda_u(const FiberCoefficients3& k) {
    k.validate();
    const double t = s_max(k);
    return {rn_3term(k, t), t, QuotientKind::n_quotient};
}

double re_3term(const FiberCoefficients3& k, double t) {
    require_t(t);
    const auto& e = k.exps;
    return e.q * (k.a * std::pow(t, e.p - e.q) / e.p - k.c * std::pow(t, e.gamma - e.q) / e.gamma) / k.b;
}

double s_e_max(const FiberCoefficients3& k) {
    const auto& e = k.exps;
    return std::pow(e.gamma * (e.p - e.q) * k.a / (e.p * (e.gamma - e.q) * k.c), 1.0 / (e.gamma - e.p));
}

QuotientValue lambda_e_u(const FiberCoefficients3& k) {
    k.validate();
    const double t = s_e_max(k);
    return {re_3term(k, t), t, QuotientKind::e_quotient};
}

double lambda_ratio(const Exponents3& e) {
    e.validate();
    return e.q * std::pow(e.gamma, (e.p - e.q) / (e.gamma - e.p)) / std::pow(e.p, (e.gamma - e.q) / (e.gamma - e.p));
}

double lambda_ratio_printed(const Exponents3& e) {
    e.validate();
    return e.q * std::pow(e.p, (e.p - e.q) / (e.gamma - e.p)) / std::pow(e.p, (e.gamma - e.q) / (e.gamma - e.p));
}

double rn_lambda_4term(const FiberCoefficients4& k, double lambda, double t) {
    require_t(t);
    const auto& e = k.exps;
    return (k.a * std::pow(t, e.p - e.alpha) + lambda * k.b_q * std::pow(t, e.q - e.alpha) -
            k.c * std::pow(t, e.gamma - e.alpha)) /
           k.b_alpha;
}

double re_lambda_4term(const FiberCoefficients4& k, double lambda, double t) {
    require_t(t);
    const auto& e = k.exps;
    return e.alpha *
           (k.a * std::pow(t, e.p - e.alpha) / e.p + lambda * k.b_q * std::pow(t, e.q - e.alpha) / e.q -
            k.c * std::pow(t, e.gamma - e.alpha) / e.gamma) /
           k.b_alpha;
}

double big_lambda_n(const FiberCoefficients4& k, double t) {
    require_t(t);
    const auto& e = k.exps;
    return ((e.p - e.alpha) * k.a * std::pow(t, e.p - e.q) - (e.gamma - e.alpha) * k.c * std::pow(t, e.gamma - e.q)) /
           ((e.alpha - e.q) * k.b_q);
}

double big_lambda_e(const FiberCoefficients4& k, double t) {
    require_t(t);
    const auto& e = k.exps;
    return e.q *
           ((e.p - e.alpha) * k.a * std::pow(t, e.p - e.q) / e.p -
            (e.gamma - e.alpha) * k.c * std::pow(t, e.gamma - e.q) / e.gamma) /
           ((e.alpha - e.q) * k.b_q);
}

double c_n(const Exponents4& e) {
    return (e.p - e.alpha) * (e.p - e.q) / ((e.gamma - e.alpha) * (e.gamma - e.q));
}

double c_e(const Exponents4& e) {
    return e.gamma * (e.p - e.alpha) * (e.p - e.q) / (e.p * (e.gamma - e.alpha) * (e.gamma - e.q));
}

double t_n(const FiberCoefficients4& k) {
    return std::pow(c_n(k.exps) * k.a / k.c, 1.0 / (k.exps.gamma - k.exps.p));
}

double t_e(const FiberCoefficients4& k) {
    return std::pow(c_e(k.exps) * k.a / k.c, 1.0 / (k.exps.gamma - k.exps.p));
}

QuotientValue lambda_n_quotient(const FiberCoefficients4& k) {
    k.validate();
    const double t = t_n(k);
    return {big_lambda_n(k, t), t, QuotientKind::lambda_quotient};
}

QuotientValue lambda_e_quotient(const FiberCoefficients4& k) {
    k.validate();
    const double t = t_e(k);
    return {big_lambda_e(k, t), t, QuotientKind::lambda_quotient};
}

namespace {

double c_n_with(const Exponents4& e, double pq_exponent) {
    const double gp = e.gamma - e.p, gq = e.gamma - e.q, pq = e.p - e.q;
    return std::pow(e.p - e.alpha, gq / gp) * std::pow(pq, pq_exponent) * gp /
           ((e.alpha - e.q) * std::pow(e.gamma - e.alpha, pq / gp) * std::pow(gq, gq / gp));
}

}  // namespace

double c_n_closed(const Exponents4& e) {
    e.validate();
    return c_n_with(e, (e.p - e.q) / (e.gamma - e.p));
}

double c_n_printed(const Exponents4& e) {
    e.validate();
    return c_n_with(e, (e.p - e.q) / (e.gamma - e.q));
}

std::vector<double> lambda_level_roots(const FiberCoefficients4& k, double lambda, Flavor flavor, double tangent_rel) {
    k.validate();
    const QuotientValue peak = flavor == Flavor::n ? lambda_n_quotient(k) : lambda_e_quotient(k);
    const auto g = [&](double t) { return (flavor == Flavor::n ? big_lambda_n(k, t) : big_lambda_e(k, t)) - lambda; };
    if (std::abs(peak.value - lambda) <= tangent_rel * peak.value) return {peak.t};
    if (lambda > peak.value) return {};
    // Lambda -> 0+ as t -> 0, peaks at the realizer, then decreases to -inf.
    std::vector<double> roots;
    if (lambda > 0.0) roots.push_back(root_below(g, peak.t));
    roots.push_back(root_above(g, peak.t));
    return roots;
}

MuPair mu_pm_quotients(const FiberCoefficients4& k, double lambda, Flavor flavor, double tangent_rel) {
    k.validate();
    const QuotientValue peak = flavor == Flavor::n ? lambda_n_quotient(k) : lambda_e_quotient(k);
    if (!(lambda > 0.0) || lambda > peak.value * (1.0 + tangent_rel))
        throw NoRoots("lambda " + std::to_string(lambda) + " outside (0, " + std::to_string(peak.value) + ")");
    const auto roots = lambda_level_roots(k, lambda, flavor, tangent_rel);
    if (roots.size() != 2) throw Degenerate("lambda coincides with the maximum of the lambda-quotient");
    const auto r = [&](double t) {
        return flavor == Flavor::n ? rn_lambda_4term(k, lambda, t) : re_lambda_4term(k, lambda, t);
    };
    return {{r(roots[0]), roots[0], QuotientKind::mu_plus}, {r(roots[1]), roots[1], QuotientKind::mu_minus}};
}

const char* flavor_name(Flavor f) { return f == Flavor::n ? "n" : "e"; }

const char* quotient_kind_name(QuotientKind k) {
    switch (k) {
    case QuotientKind::n_quotient: return "n-quotient";
    case QuotientKind::e_quotient: return "e-quotient";
    case QuotientKind::lambda_quotient: return "lambda-quotient";
    case QuotientKind::mu_plus: return "mu-plus";
    case QuotientKind::mu_minus: return "mu-minus";
    case QuotientKind::energy_level: return "energy-level";
    }
    return "?";
}

}  // namespace ngrq
