#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ngrq/exponents.hpp"
#include "ngrq/gridfield.hpp"
#include "ngrq/quotients.hpp"

namespace ngrq {

// Value and Euclidean gradient (w.r.t. nodal values) of a functional.
// Infeasible points (quotient undefined) carry feasible = false.
struct QuotientEval {
    double value = 0.0;
    std::vector<double> gradient;
    bool feasible = true;
};

using Quotient = std::function<QuotientEval(const DiscreteFunction&)>;

// Quotient that depends on u only through integrals: ints[0] = int |grad u|^grad_exponent,
// ints[1 + k] = int |u|^exponents[k]. `reduce` returns the value and the partials
// with respect to ints (or feasible = false).
struct IntegralReduction {
    double value = 0.0;
    std::vector<double> partials;
    bool feasible = true;
};
Quotient integral_quotient(double grad_exponent, std::vector<double> exponents,
                           std::function<IntegralReduction(const std::vector<double>&)> reduce);

Quotient constant_quotient(double value);
// int |grad u|^2 / int u^2
Quotient dirichlet_quotient();
Quotient lambda_u_quotient(const Exponents3& e);
Quotient lambda_e_u_quotient(const Exponents3& e);
Quotient lambda_n_u_quotient(const Exponents4& e);
Quotient lambda_e4_u_quotient(const Exponents4& e);
enum class MuSign { plus, minus };
// mu^{flavor,sign}_lambda(u); infeasible when lambda is not below the lambda-quotient of u.
Quotient mu_u_quotient(const Exponents4& e, double lambda, MuSign sign, Flavor flavor);

struct DescentOptions {
    int starts = 6;
    int max_iterations = 4000;
    double tol_grad = 1e-7;
    double armijo = 1e-4;
    double shrink = 0.5;
    double normalization_exponent = 2.0;  // iterates keep int |u|^r = 1
    std::uint64_t seed = 0;
    int threads = 0;         // 0: NEHARI_RQ_THREADS or hardware
    bool positive = true;    // project onto u >= 0
    bool check_homogeneity = true;
    // > 0: limited-memory quasi-Newton directions with K^{-1} as initial inverse Hessian
    int memory = 0;
    std::vector<DiscreteFunction> warm_starts;  // tried before the generated starts
    // Called on every accepted iterate (possibly from worker threads).
    std::function<void(const DiscreteFunction&, const QuotientEval&)> on_accept;

    void validate() const;
};

struct StartRecord {
    int index = 0;
    std::string kind;
    double value = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;
    bool feasible = false;
    bool converged = false;
    bool monotone = true;
};

struct ExtremalEstimate {
    std::string name;
    double value = 0.0;
    DiscreteFunction minimizer;
    std::vector<StartRecord> starts;
    int best_start = 0;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;

    std::vector<double> per_start_values() const;
};

// Worker count honoring NEHARI_RQ_THREADS.
int thread_count(int requested = 0);

// Uniform double in [0,1) from 53 raw bits; identical across platforms.
double unit_uniform(std::uint64_t bits);

// The fixed start family for a domain: eigenfunction shape, hats at random
// centers, smoothed positive random fields.
std::vector<std::pair<std::string, DiscreteFunction>> start_functions(const Domain& domain, int count, std::uint64_t seed);

// Scale-invariant stationarity measure: sup |g/w| * sup|u| / max(|Q|, 1e-300), with
// components held at the positivity bound excluded when the gradient pushes outward.
double normalized_gradient(const DiscreteFunction& u, const QuotientEval& q, bool positive);

// Multi-start projected, H1-preconditioned gradient descent with Armijo backtracking.
ExtremalEstimate minimize_quotient(const Quotient& quotient, const Domain& domain, const DescentOptions& opt);

ExtremalEstimate lambda_star(const Domain& domain, const Exponents3& e, DescentOptions opt = {});
ExtremalEstimate lambda_n_star(const Domain& domain, const Exponents4& e, DescentOptions opt = {});
ExtremalEstimate lambda_e_star(const Domain& domain, const Exponents4& e, DescentOptions opt = {});
// lambda_bound: the matching lambda-extremal estimate (computed when absent).
ExtremalEstimate mu_extremal(const Domain& domain, const Exponents4& e, double lambda, MuSign sign, Flavor flavor,
                             DescentOptions opt = {}, std::optional<double> lambda_bound = std::nullopt);

// Max component-wise relative gap between the quotient gradient and central
// differences with step h; components below 1e-6 of the largest are compared
// against that floor.
double gradient_check(const Quotient& quotient, const DiscreteFunction& u, double h);

}  // namespace ngrq
