#pragma once

#include <utility>
#include <vector>

#include "ngrq/fibering.hpp"

namespace ngrq {

enum class QuotientKind { n_quotient, e_quotient, lambda_quotient, mu_plus, mu_minus, energy_level };

struct QuotientValue {
    double value = 0.0;
    double t = 0.0;  // fibering point realizing the value
    QuotientKind kind = QuotientKind::n_quotient;
};

// Convex-concave family.
// (a t^p - c t^gamma) / (b t^q); level lambda <=> Phi'(t u) = 0.
double rn_3term(const FiberCoefficients3& k, double t);
double s_max(const FiberCoefficients3& k);
QuotientValue lambda_u(const FiberCoefficients3& k);
// (a t^p/p - c t^gamma/gamma) / (b t^q/q); level lambda <=> Phi(t u) = 0.
double re_3term(const FiberCoefficients3& k, double t);
double s_e_max(const FiberCoefficients3& k);
QuotientValue lambda_e_u(const FiberCoefficients3& k);

// lambda^e(u) / lambda(u): exact value and the constant q p^{(p-q)/(gamma-p)} / p^{(gamma-q)/(gamma-p)}
// as printed in the literature.
double lambda_ratio(const Exponents3& e);
double lambda_ratio_printed(const Exponents3& e);

// Four-term family.
// (a t^p + lambda b_q t^q - c t^gamma) / (b_alpha t^alpha); level mu <=> Phi'(t u) = 0.
double rn_lambda_4term(const FiberCoefficients4& k, double lambda, double t);
// alpha (a t^p/p + lambda b_q t^q/q - c t^gamma/gamma) / (b_alpha t^alpha); level mu <=> Phi(t u) = 0.
double re_lambda_4term(const FiberCoefficients4& k, double lambda, double t);
// ((p-alpha) a t^p - (gamma-alpha) c t^gamma) / ((alpha-q) b_q t^q); level lambda <=> d/dt rn_lambda = 0.
double big_lambda_n(const FiberCoefficients4& k, double t);
// q ((p-alpha) a t^p/p - (gamma-alpha) c t^gamma/gamma) / ((alpha-q) b_q t^q); level lambda <=> d/dt re_lambda = 0.
double big_lambda_e(const FiberCoefficients4& k, double t);
double c_n(const Exponents4& e);
double c_e(const Exponents4& e);
double t_n(const FiberCoefficients4& k);
double t_e(const FiberCoefficients4& k);
QuotientValue lambda_n_quotient(const FiberCoefficients4& k);
QuotientValue lambda_e_quotient(const FiberCoefficients4& k);
// Constant c^n in lambda^n(u) = c^n a^{(gamma-q)/(gamma-p)} / (b_q c^{(p-q)/(gamma-p)}):
// derived value and the printed variant with (p-q)^{(p-q)/(gamma-q)}.
double c_n_closed(const Exponents4& e);
double c_n_printed(const Exponents4& e);

enum class Flavor { n, e };

// Positive roots of Lambda^{flavor}(t u) = lambda, increasing; a single root at
// the maximizer when lambda is within `tangent_rel` of the maximum.
std::vector<double> lambda_level_roots(const FiberCoefficients4& k, double lambda, Flavor flavor,
                                       double tangent_rel = 1e-9);

struct MuPair {
    QuotientValue plus;
    QuotientValue minus;
};
// (mu^+, mu^-) = R_lambda at the two roots t+ < t- of Lambda(t u) = lambda.
// NoRoots when lambda is outside (0, max Lambda); Degenerate at the maximum.
MuPair mu_pm_quotients(const FiberCoefficients4& k, double lambda, Flavor flavor, double tangent_rel = 1e-9);

const char* flavor_name(Flavor f);
const char* quotient_kind_name(QuotientKind k);

}  // namespace ngrq
