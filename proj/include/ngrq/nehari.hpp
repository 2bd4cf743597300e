#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ngrq/extremal.hpp"
#include "ngrq/fibering.hpp"

namespace ngrq {

// plus/minus: the two Nehari components of the convex-concave problem;
// rn1/rn2: the middle and outer fibering points of the four-term problem.
enum class Branch { plus, minus, rn1, rn2 };

const char* branch_name(Branch b);
Branch parse_branch(const std::string& name);

struct NehariOptions {
    DescentOptions descent;
    double tol_res = 1e-6;
    double tol_fiber = 1e-9;
    double degenerate_rel = 1e-8;
    FiberScanOptions fiber;

    NehariOptions() { descent.tol_grad = 1e-10; }
};

struct NehariProjection {
    double t = 0.0;
    DiscreteFunction u;
    bool degenerate = false;
};

// t^{+-}_lambda(u) u. ProjectionNonexistent when lambda > lambda(u); the
// tangent case lambda = lambda(u) is returned with degenerate = true.
NehariProjection project_to_nehari(const DiscreteFunction& u, double lambda, Branch branch, const Exponents3& e,
                                   const FiberScanOptions& opt = {});

struct NehariSolution {
    DiscreteFunction u;
    ProblemParams params;
    Branch branch = Branch::plus;
    double energy = 0.0;
    double dphi = 0.0;   // fiber derivative at t = 1, relative to int |grad u|^p
    double phi2 = 0.0;   // fiber second derivative at t = 1
    double residual = 0.0;
    double lambda_quotient = 0.0;  // lambda(u) (three-term) or lambda^n(u) (four-term)
    bool admissible = false;
    bool degenerate = false;
    bool converged = false;
    int iterations = 0;
    std::vector<StartRecord> starts;
    int coercivity_violations = 0;

    double lambda() const;
    double mu() const;  // NaN for the three-term family
};

// Evaluation of a solution candidate: energy, fiber data, residual, admissibility.
NehariSolution assess(const DiscreteFunction& w, const ProblemParams& params, Branch branch, const NehariOptions& opt);

// Minimize Phi_lambda(t^{+-}(u) u) over normalized nonnegative u.
NehariSolution solve_M(double lambda, Branch branch, const Domain& domain, const Exponents3& e,
                       const NehariOptions& opt = {});

// Lower bound on Phi over the Nehari set: (gamma-p)/(p gamma) |u|^p - lambda (gamma-q)/(q gamma) C |u|^q,
// |u| = (int |grad u|^p)^{1/p}. Interval and rectangle domains only.
double coercivity_constant(const Domain& domain, const Exponents3& e);
double coercivity_bound(double grad_p, double lambda, double C, const Exponents3& e);

// Estimated extremal values bounding the four-term parameter windows at a fixed lambda.
struct FourTermWindow {
    double lambda = 0.0;
    double lambda_e = 0.0;
    double lambda_n = 0.0;
    double mu_n_plus = 0.0;
    double mu_e_plus = 0.0;
    double mu_e_minus = 0.0;
    double mu_n_minus = 0.0;
    std::vector<DiscreteFunction> seeds;  // minimizers, reused as warm starts
};

FourTermWindow estimate_window(double lambda, const Domain& domain, const Exponents4& e, const DescentOptions& opt = {});
// Same, reusing known lambda-extremal estimates.
FourTermWindow estimate_window(double lambda, const Domain& domain, const Exponents4& e, const ExtremalEstimate& lambda_e,
                               const ExtremalEstimate& lambda_n, const DescentOptions& opt = {});

// rn1: minimize Phi(s^1(u) u); rn2: minimize Phi(s^2(u) u) subject to Phi(s^2(u) u) < 0.
NehariSolution solve_three_term(double lambda, double mu, Branch branch, const Domain& domain, const Exponents4& e,
                                const FourTermWindow& window, const NehariOptions& opt = {});

struct BranchRow {
    double lambda = 0.0;
    double mu = 0.0;
    double energy = 0.0;
    double norm_gamma = 0.0;
    double residual = 0.0;
    bool admissible = false;
    double phi2 = 0.0;
    bool attempted = false;
};

struct BranchDiagram {
    std::vector<BranchRow> rows;
    std::vector<BranchRow> bisection;   // probes between the last admissible and first failed grid value
    std::optional<double> lambda_f;     // largest admissible lambda found
    std::optional<double> lambda_fail;  // smallest failed lambda above it
    std::optional<DiscreteFunction> last_solution;
};

struct ContinuationOptions {
    NehariOptions nehari;
    int fresh_starts = 2;        // generated starts added to the warm start at each row
    int max_bisections = 20;
    double bracket_rel = 1e-3;   // stop bisecting when width < bracket_rel * lambda
};

BranchDiagram continue_branch(const std::vector<double>& lambda_grid, Branch branch, const Domain& domain,
                              const Exponents3& e, const ContinuationOptions& opt = {});

struct VerifyReport {
    std::vector<std::pair<std::string, bool>> checks;
    bool ok() const;
};

VerifyReport verify(const NehariSolution& s, const NehariOptions& opt = {});

}  // namespace ngrq
