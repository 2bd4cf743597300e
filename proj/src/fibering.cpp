#include "ngrq/fibering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ngrq/error.hpp"
#include "ngrq/quotients.hpp"
#include "ngrq/roots.hpp"

namespace ngrq {

namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw InvalidInput(std::string("fiber coefficient ") + name + " must be positive and finite");
}

void require_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("fiber parameter t must be positive");
}

Curvature classify(double ddphi, double scale, double rel) {
    if (std::abs(ddphi) < rel * scale) return Curvature::zero;
    return ddphi > 0.0 ? Curvature::positive : Curvature::negative;
}

}  // namespace

void FiberCoefficients3::validate() const {
    exps.validate();
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(c, "c");
}

FiberCoefficients3 FiberCoefficients3::scaled(double t) const {
    require_t(t);
    return {a * std::pow(t, exps.p), b * std::pow(t, exps.q), c * std::pow(t, exps.gamma), exps};
}

void FiberCoefficients4::validate() const {
    exps.validate();
    require_positive(a, "a");
    require_positive(b_q, "b_q");
    require_positive(b_alpha, "b_alpha");
    require_positive(c, "c");
}

FiberCoefficients4 FiberCoefficients4::scaled(double t) const {
    require_t(t);
    return {a * std::pow(t, exps.p), b_q * std::pow(t, exps.q), b_alpha * std::pow(t, exps.alpha),
            c * std::pow(t, exps.gamma), exps};
}

FiberCoefficients3 fiber_coefficients(const DiscreteFunction& u, const Exponents3& e) {
    e.validate();
    return {gradient_integral(u, e.p), lebesgue_integral(u, e.q), lebesgue_integral(u, e.gamma), e};
}

FiberCoefficients4 fiber_coefficients(const DiscreteFunction& u, const Exponents4& e) {
    e.validate();
    return {gradient_integral(u, e.p), lebesgue_integral(u, e.q), lebesgue_integral(u, e.alpha),
            lebesgue_integral(u, e.gamma), e};
}

FiberValue phi_fiber(const FiberCoefficients3& k, double lambda, double t) {
    require_t(t);
    const auto& e = k.exps;
    const double tp = std::pow(t, e.p), tq = std::pow(t, e.q), tg = std::pow(t, e.gamma);
    FiberValue v;
    v.phi = k.a * tp / e.p - lambda * k.b * tq / e.q - k.c * tg / e.gamma;
    v.dphi = (k.a * tp - lambda * k.b * tq - k.c * tg) / t;
    v.ddphi = ((e.p - 1) * k.a * tp - lambda * (e.q - 1) * k.b * tq - (e.gamma - 1) * k.c * tg) / (t * t);
    return v;
}

FiberValue phi_fiber(const FiberCoefficients4& k, double lambda, double mu, double t) {
    require_t(t);
    const auto& e = k.exps;
    const double tp = std::pow(t, e.p), tq = std::pow(t, e.q), ta = std::pow(t, e.alpha), tg = std::pow(t, e.gamma);
    FiberValue v;
    v.phi = k.a * tp / e.p + lambda * k.b_q * tq / e.q - mu * k.b_alpha * ta / e.alpha - k.c * tg / e.gamma;
    v.dphi = (k.a * tp + lambda * k.b_q * tq - mu * k.b_alpha * ta - k.c * tg) / t;
    v.ddphi = ((e.p - 1) * k.a * tp + lambda * (e.q - 1) * k.b_q * tq - mu * (e.alpha - 1) * k.b_alpha * ta -
               (e.gamma - 1) * k.c * tg) /
              (t * t);
    return v;
}

double curvature_scale(const FiberCoefficients3& k, double lambda, double t) {
    const auto& e = k.exps;
    return ((e.p - 1) * k.a * std::pow(t, e.p) + std::abs(lambda) * (e.q - 1) * k.b * std::pow(t, e.q) +
            (e.gamma - 1) * k.c * std::pow(t, e.gamma)) /
           (t * t);
}

double curvature_scale(const FiberCoefficients4& k, double lambda, double mu, double t) {
    const auto& e = k.exps;
    return ((e.p - 1) * k.a * std::pow(t, e.p) + std::abs(lambda) * (e.q - 1) * k.b_q * std::pow(t, e.q) +
            std::abs(mu) * (e.alpha - 1) * k.b_alpha * std::pow(t, e.alpha) +
            (e.gamma - 1) * k.c * std::pow(t, e.gamma)) /
           (t * t);
}

void FiberScanOptions::validate() const {
    if (!(t_min > 0.0) || !(t_max > t_min)) throw InvalidInput("fiber scan window needs 0 < t_min < t_max");
    if (brackets < 2) throw InvalidInput("fiber scan needs at least 2 brackets");
    if (!(tol_root > 0.0) || !(degenerate_rel > 0.0) || !(tangent_rel > 0.0))
        throw InvalidInput("fiber tolerances must be positive");
}

namespace {

template <class Coeffs, class Phi, class Scale>
CriticalPointSet collect(const ScanResult& scan, const Coeffs& k, Phi&& phi, Scale&& scale, const FiberScanOptions& opt) {
    CriticalPointSet out;
    out.brackets = scan.brackets;
    for (const auto& [t, tangent] : scan.roots) {
        const FiberValue v = phi(t);
        if (!tangent) {
            const double norm = std::abs(v.dphi) / (k.a * std::pow(t, k.exps.p - 1.0));
            if (!(norm < opt.tol_root))
                throw Error("fiber root at t=" + std::to_string(t) + " misses tolerance (" + std::to_string(norm) + ")");
        }
        CriticalPoint cp{t, tangent ? Curvature::zero : classify(v.ddphi, scale(t), opt.degenerate_rel), v.ddphi};
        out.points.push_back(cp);
    }
    return out;
}

}  // namespace

CriticalPointSet critical_points_3term(const FiberCoefficients3& k, double lambda, const FiberScanOptions& opt) {
    k.validate();
    opt.validate();
    if (!std::isfinite(lambda)) throw InvalidInput("lambda must be finite");
    // Phi'(t) = b t^{q-1} (R^n(t) - lambda); R^n rises then falls with peak at s_max.
    const QuotientValue peak = lambda_u(k);
    const auto g = [&](double t) { return rn_3term(k, t) - lambda; };
    const auto grid = geometric_grid(opt.t_min, opt.t_max, opt.brackets);
    const auto scan = scan_roots(g, grid, {peak.t}, {opt.tangent_rel * peak.value});
    auto out = collect(scan, k, [&](double t) { return phi_fiber(k, lambda, t); },
                       [&](double t) { return curvature_scale(k, lambda, t); }, opt);
    if (out.points.size() > 2) throw Error("three-term fiber returned more than two critical points");
    return out;
}

CriticalPointSet critical_points_4term(const FiberCoefficients4& k, double lambda, double mu, const FiberScanOptions& opt) {
    k.validate();
    opt.validate();
    if (!std::isfinite(lambda) || !std::isfinite(mu)) throw InvalidInput("lambda and mu must be finite");
    // Phi'(s) = b_alpha s^{alpha-1} (R^n_lambda(s) - mu); R^n_lambda is monotone between
    // the roots of Lambda^n(s) = lambda.
    const auto breaks = lambda_level_roots(k, lambda, Flavor::n, opt.tangent_rel);
    std::vector<double> tol;
    for (double b : breaks) tol.push_back(opt.tangent_rel * std::max(std::abs(mu), std::abs(rn_lambda_4term(k, lambda, b))));
    // a tangent level of Lambda^n is an inflection of R^n_lambda, not an extremum
    const bool inflection = breaks.size() == 1 && lambda > 0.0;
    const auto g = [&](double t) { return rn_lambda_4term(k, lambda, t) - mu; };
    const auto grid = geometric_grid(opt.t_min, opt.t_max, opt.brackets);
    const auto scan = inflection ? scan_roots(g, grid, {}, {}) : scan_roots(g, grid, breaks, tol);
    auto out = collect(scan, k, [&](double t) { return phi_fiber(k, lambda, mu, t); },
                       [&](double t) { return curvature_scale(k, lambda, mu, t); }, opt);
    if (out.points.size() > 3) throw Error("four-term fiber returned more than three critical points");
    return out;
}

const char* curvature_name(Curvature c) {
    switch (c) {
    case Curvature::negative: return "negative";
    case Curvature::zero: return "zero";
    case Curvature::positive: return "positive";
    }
    return "?";
}

}  // namespace ngrq
