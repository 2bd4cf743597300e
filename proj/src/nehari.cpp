#include "ngrq/nehari.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "ngrq/error.hpp"
#include "ngrq/quotients.hpp"
#include "ngrq/roots.hpp"

namespace ngrq {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double tangent_rel = 1e-9;

// t^{+-}_lambda for coefficients k, without a scan window; nullopt when the
// requested point does not exist.
std::optional<double> fiber_point_3(const FiberCoefficients3& k, double lambda, Branch branch) {
    const QuotientValue peak = lambda_u(k);
    const auto g = [&](double t) { return rn_3term(k, t) - lambda; };
    if (branch == Branch::plus) {
        if (!(lambda > 0.0) || !(lambda < peak.value * (1.0 - tangent_rel))) return std::nullopt;
        return root_below(g, peak.t);
    }
    if (!(lambda < peak.value * (1.0 - tangent_rel))) return std::nullopt;
    return root_above(g, peak.t);
}

// s^1 or s^2 of the four-term fiber; nullopt when absent (or Phi >= 0 for rn2).
std::optional<double> fiber_point_4(const FiberCoefficients4& k, double lambda, double mu, Branch branch) {
    if (!(lambda < lambda_n_quotient(k).value * (1.0 - tangent_rel))) return std::nullopt;
    const MuPair pair = mu_pm_quotients(k, lambda, Flavor::n);
    const auto g = [&](double t) { return rn_lambda_4term(k, lambda, t) - mu; };
    if (!(mu < pair.minus.value)) return std::nullopt;
    if (branch == Branch::rn1) {
        if (!(mu > pair.plus.value)) return std::nullopt;
        return bisect_log(g, pair.plus.t, pair.minus.t);
    }
    const double s = root_above(g, pair.minus.t);
    if (!(phi_fiber(k, lambda, mu, s).phi < 0.0)) return std::nullopt;
    return s;
}

double lambda_of(const ProblemParams& p) {
    if (const auto* c = std::get_if<ConvexConcaveProblem>(&p)) return c->lambda;
    if (const auto* f = std::get_if<FourTermProblem>(&p)) return f->lambda;
    return nan;
}

}  // namespace

const char* branch_name(Branch b) {
    switch (b) {
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
    case Branch::rn1: return "rn1";
    case Branch::rn2: return "rn2";
    }
    return "?";
}

Branch parse_branch(const std::string& name) {
    if (name == "plus") return Branch::plus;
    if (name == "minus") return Branch::minus;
    if (name == "rn1") return Branch::rn1;
    if (name == "rn2") return Branch::rn2;
    throw InvalidInput("unknown branch '" + name + "'");
}

double NehariSolution::lambda() const { return lambda_of(params); }

double NehariSolution::mu() const {
    if (const auto* f = std::get_if<FourTermProblem>(&params)) return f->mu;
    return nan;
}

NehariProjection project_to_nehari(const DiscreteFunction& u, double lambda, Branch branch, const Exponents3& e,
                                   const FiberScanOptions& opt) {
    if (branch != Branch::plus && branch != Branch::minus) throw InvalidInput("three-term projection needs branch plus or minus");
    if (u.sup_norm() == 0.0) throw InvalidInput("cannot project the zero function");
    const auto k = fiber_coefficients(u, e);
    // rescale so that s_max = 1 sits in the middle of the scan window
    const double s = s_max(k);
    const auto set = critical_points_3term(k.scaled(s), lambda, opt);
    if (set.points.empty())
        throw ProjectionNonexistent("lambda " + std::to_string(lambda) + " exceeds lambda(u) = " + std::to_string(lambda_u(k).value));
    if (set.points.size() == 1 && set.points[0].curvature == Curvature::zero)
        return {set.points[0].t * s, u.scaled(set.points[0].t * s), true};
    double t = 0.0;
    if (set.points.size() == 2) {
        t = set.points[branch == Branch::plus ? 0 : 1].t * s;
    } else {
        // one regular root: the other one left the window, or lambda <= 0
        const auto direct = fiber_point_3(k, lambda, branch);
        if (!direct) throw ProjectionNonexistent("no " + std::string(branch_name(branch)) + " fibering point for lambda " + std::to_string(lambda));
        t = *direct;
    }
    return {t, u.scaled(t), false};
}

double coercivity_constant(const Domain& d, const Exponents3& e) {
    if (d.kind() == DomainKind::radial) throw InvalidInput("coercivity constant is defined for interval and rectangle domains");
    const double L = d.extent(0);
    // int |u|^p <= L (L/2)^{p-1} int |d_x u|^p, then Hoelder from L^p to L^q
    return std::pow(d.measure(), 1.0 - e.q / e.p) * std::pow(L * std::pow(L / 2.0, e.p - 1.0), e.q / e.p);
}

double coercivity_bound(double grad_p, double lambda, double C, const Exponents3& e) {
    return (e.gamma - e.p) / (e.p * e.gamma) * grad_p -
           lambda * (e.gamma - e.q) / (e.q * e.gamma) * C * std::pow(grad_p, e.q / e.p);
}

NehariSolution assess(const DiscreteFunction& w, const ProblemParams& params, Branch branch, const NehariOptions& opt) {
    NehariSolution s;
    s.u = w;
    s.params = params;
    s.branch = branch;
    s.residual = residual(w, params);
    if (w.sup_norm() == 0.0) {
        s.energy = 0.0;
        s.dphi = s.phi2 = s.lambda_quotient = nan;
        s.admissible = false;
        return s;
    }
    if (const auto* c = std::get_if<ConvexConcaveProblem>(&params)) {
        const Exponents3 e{c->q, c->p, c->gamma};
        const auto k = fiber_coefficients(w, e);
        const FiberValue fv = phi_fiber(k, c->lambda, 1.0);
        s.energy = fv.phi;
        s.dphi = fv.dphi / k.a;
        s.phi2 = fv.ddphi;
        s.degenerate = std::abs(fv.ddphi) < opt.degenerate_rel * curvature_scale(k, c->lambda, 1.0);
        s.lambda_quotient = lambda_u(k).value;
        const bool sign_ok = branch == Branch::plus ? s.phi2 > 0.0 : s.phi2 < 0.0;
        s.admissible = c->lambda < s.lambda_quotient && s.residual < opt.tol_res && !s.degenerate &&
                       std::abs(s.dphi) < opt.tol_fiber && sign_ok;
    } else if (const auto* f = std::get_if<FourTermProblem>(&params)) {
        const Exponents4 e{f->q, f->alpha, f->p, f->gamma};
        const auto k = fiber_coefficients(w, e);
        const FiberValue fv = phi_fiber(k, f->lambda, f->mu, 1.0);
        s.energy = fv.phi;
        s.dphi = fv.dphi / k.a;
        s.phi2 = fv.ddphi;
        s.degenerate = std::abs(fv.ddphi) < opt.degenerate_rel * curvature_scale(k, f->lambda, f->mu, 1.0);
        s.lambda_quotient = lambda_n_quotient(k).value;
        bool window = f->lambda > 0.0 && f->lambda < s.lambda_quotient;
        if (window) {
            const MuPair pair = mu_pm_quotients(k, f->lambda, Flavor::n);
            window = f->mu < pair.minus.value &&
                     (branch == Branch::rn1 ? f->mu > pair.plus.value : re_lambda_4term(k, f->lambda, 1.0) < f->mu);
        }
        const bool sign_ok = branch == Branch::rn1 ? s.phi2 > 0.0 : s.phi2 < 0.0;
        s.admissible = window && s.residual < opt.tol_res && !s.degenerate && std::abs(s.dphi) < opt.tol_fiber && sign_ok;
    } else {
        throw InvalidInput("Nehari assessment covers the convex-concave and four-term families");
    }
    return s;
}

NehariSolution solve_M(double lambda, Branch branch, const Domain& domain, const Exponents3& e, const NehariOptions& opt) {
    e.validate();
    if (branch != Branch::plus && branch != Branch::minus) throw InvalidInput("solve_M needs branch plus or minus");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw PreconditionViolated("solve_M needs lambda > 0");
    const Quotient F = integral_quotient(e.p, {e.q, e.gamma}, [e, lambda, branch](const std::vector<double>& I) {
        const FiberCoefficients3 k{I[0], I[1], I[2], e};
        const auto t = fiber_point_3(k, lambda, branch);
        if (!t) return IntegralReduction{0.0, {}, false};
        const double tp = std::pow(*t, e.p), tq = std::pow(*t, e.q), tg = std::pow(*t, e.gamma);
        return IntegralReduction{phi_fiber(k, lambda, *t).phi, {tp / e.p, -lambda * tq / e.q, -tg / e.gamma}, true};
    });

    DescentOptions dopt = opt.descent;
    dopt.normalization_exponent = e.gamma;
    std::atomic<int> violations{0};
    const bool guard = domain.kind() != DomainKind::radial;
    const double C = guard ? coercivity_constant(domain, e) : 0.0;
    if (guard) {
        auto chained = dopt.on_accept;
        dopt.on_accept = [&, chained](const DiscreteFunction& u, const QuotientEval& q) {
            if (chained) chained(u, q);
            const auto k = fiber_coefficients(u, e);
            const auto t = fiber_point_3(k, lambda, branch);
            if (!t) return;
            const double a = k.a * std::pow(*t, e.p);
            const double bound = coercivity_bound(a, lambda, C, e);
            if (q.value < bound - 1e-12 * (std::abs(bound) + std::abs(q.value))) ++violations;
        };
    }
    const ExtremalEstimate est = minimize_quotient(F, domain, dopt);
    const auto k = fiber_coefficients(est.minimizer, e);
    const auto t = fiber_point_3(k, lambda, branch);
    if (!t) throw Infeasible("best iterate has no fibering point");
    NehariSolution s = assess(est.minimizer.scaled(*t), ConvexConcaveProblem{e.q, e.p, e.gamma, lambda}, branch, opt);
    s.converged = est.converged;
    s.iterations = est.iterations;
    s.starts = est.starts;
    s.coercivity_violations = violations.load();
    return s;
}

FourTermWindow estimate_window(double lambda, const Domain& domain, const Exponents4& e, const ExtremalEstimate& le,
                               const ExtremalEstimate& ln, const DescentOptions& opt) {
    if (!(lambda > 0.0 && lambda < le.value))
        throw PreconditionViolated("window needs lambda in (0, lambda^e estimate = " + std::to_string(le.value) + ")");
    FourTermWindow w;
    w.lambda = lambda;
    w.lambda_e = le.value;
    w.lambda_n = ln.value;
    const auto np = mu_extremal(domain, e, lambda, MuSign::plus, Flavor::n, opt, ln.value);
    const auto ep = mu_extremal(domain, e, lambda, MuSign::plus, Flavor::e, opt, le.value);
    const auto em = mu_extremal(domain, e, lambda, MuSign::minus, Flavor::e, opt, le.value);
    const auto nm = mu_extremal(domain, e, lambda, MuSign::minus, Flavor::n, opt, ln.value);
    w.mu_n_plus = np.value;
    w.mu_e_plus = ep.value;
    w.mu_e_minus = em.value;
    w.mu_n_minus = nm.value;
    w.seeds = {np.minimizer, ep.minimizer, em.minimizer, nm.minimizer};
    return w;
}

FourTermWindow estimate_window(double lambda, const Domain& domain, const Exponents4& e, const DescentOptions& opt) {
    return estimate_window(lambda, domain, e, lambda_e_star(domain, e, opt), lambda_n_star(domain, e, opt), opt);
}

NehariSolution solve_three_term(double lambda, double mu, Branch branch, const Domain& domain, const Exponents4& e,
                                const FourTermWindow& window, const NehariOptions& opt) {
    e.validate();
    if (branch != Branch::rn1 && branch != Branch::rn2) throw InvalidInput("solve_three_term needs branch rn1 or rn2");
    if (std::abs(window.lambda - lambda) > 1e-12 * std::abs(lambda))
        throw PreconditionViolated("window was estimated at a different lambda");
    const auto fmt = [](double x) { return std::to_string(x); };
    if (branch == Branch::rn1) {
        if (!(lambda > 0.0 && lambda < window.lambda_e))
            throw PreconditionViolated("rn1 needs lambda in (0, " + fmt(window.lambda_e) + ")");
        if (!(mu > window.mu_e_plus && mu < window.mu_n_minus))
            throw PreconditionViolated("rn1 needs mu in (" + fmt(window.mu_e_plus) + ", " + fmt(window.mu_n_minus) + ")");
    } else {
        if (!(lambda > 0.0 && lambda < window.lambda_n))
            throw PreconditionViolated("rn2 needs lambda in (0, " + fmt(window.lambda_n) + ")");
        if (!(mu > window.mu_e_minus && mu < window.mu_n_minus))
            throw PreconditionViolated("rn2 needs mu in (" + fmt(window.mu_e_minus) + ", " + fmt(window.mu_n_minus) + ")");
    }
    const Quotient F = integral_quotient(e.p, {e.q, e.alpha, e.gamma}, [e, lambda, mu, branch](const std::vector<double>& I) {
        const FiberCoefficients4 k{I[0], I[1], I[2], I[3], e};
        const auto s = fiber_point_4(k, lambda, mu, branch);
        if (!s) return IntegralReduction{0.0, {}, false};
        const double sp = std::pow(*s, e.p), sq = std::pow(*s, e.q), sa = std::pow(*s, e.alpha), sg = std::pow(*s, e.gamma);
        return IntegralReduction{phi_fiber(k, lambda, mu, *s).phi,
                                 {sp / e.p, lambda * sq / e.q, -mu * sa / e.alpha, -sg / e.gamma}, true};
    });
    DescentOptions dopt = opt.descent;
    dopt.normalization_exponent = e.gamma;
    for (const auto& seed : window.seeds)
        if (seed.domain() == domain) dopt.warm_starts.push_back(seed);
    ExtremalEstimate est;
    try {
        est = minimize_quotient(F, domain, dopt);
    } catch (const Infeasible&) {
        throw Infeasible(std::string(branch_name(branch)) + ": constraint unsatisfiable at every start");
    }
    const auto k = fiber_coefficients(est.minimizer, e);
    const auto s = fiber_point_4(k, lambda, mu, branch);
    if (!s) throw Infeasible("best iterate has no fibering point");
    NehariSolution sol = assess(est.minimizer.scaled(*s), FourTermProblem{e.q, e.alpha, e.p, e.gamma, lambda, mu}, branch, opt);
    sol.converged = est.converged;
    sol.iterations = est.iterations;
    sol.starts = est.starts;
    return sol;
}

BranchDiagram continue_branch(const std::vector<double>& grid, Branch branch, const Domain& domain, const Exponents3& e,
                              const ContinuationOptions& opt) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw InvalidInput("lambda grid must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidInput("lambda grid must be strictly increasing");
    }
    BranchDiagram diagram;
    const auto row_of = [](const NehariSolution& s, double lambda) {
        return BranchRow{lambda, nan, s.energy, std::pow(lebesgue_integral(s.u, std::get<ConvexConcaveProblem>(s.params).gamma),
                                                         1.0 / std::get<ConvexConcaveProblem>(s.params).gamma),
                         s.residual, s.admissible, s.phi2, true};
    };
    std::optional<DiscreteFunction> warm;
    const auto attempt = [&](double lambda) -> std::optional<NehariSolution> {
        NehariOptions nopt = opt.nehari;
        if (warm) {
            nopt.descent.warm_starts = {*warm};
            nopt.descent.starts = std::max(1, opt.fresh_starts);
        }
        try {
            return solve_M(lambda, branch, domain, e, nopt);
        } catch (const Infeasible&) {
            return std::nullopt;
        }
    };
    std::optional<std::size_t> failed;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (failed) {
            diagram.rows.push_back(BranchRow{grid[i], nan, nan, nan, nan, false, nan, false});
            continue;
        }
        const auto sol = attempt(grid[i]);
        if (sol) diagram.rows.push_back(row_of(*sol, grid[i]));
        else diagram.rows.push_back(BranchRow{grid[i], nan, nan, nan, nan, false, nan, true});
        if (sol && sol->admissible) {
            warm = sol->u;
            diagram.lambda_f = grid[i];
            diagram.last_solution = sol->u;
        } else {
            failed = i;
        }
    }
    if (failed && diagram.lambda_f) {
        double lo = *diagram.lambda_f, hi = grid[*failed];
        for (int it = 0; it < opt.max_bisections && hi - lo >= opt.bracket_rel * lo; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto sol = attempt(mid);
            if (sol) diagram.bisection.push_back(row_of(*sol, mid));
            else diagram.bisection.push_back(BranchRow{mid, nan, nan, nan, nan, false, nan, true});
            if (sol && sol->admissible) {
                lo = mid;
                warm = sol->u;
                diagram.last_solution = sol->u;
            } else {
                hi = mid;
            }
        }
        diagram.lambda_f = lo;
        diagram.lambda_fail = hi;
    } else if (failed) {
        diagram.lambda_fail = grid[*failed];
    }
    return diagram;
}

bool VerifyReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

VerifyReport verify(const NehariSolution& s, const NehariOptions& opt) {
    VerifyReport r;
    const bool nonzero = s.u.sup_norm() > 0.0;
    r.checks.emplace_back("nonzero", nonzero);
    if (!nonzero) {
        r.checks.emplace_back("nehari_membership", false);
        return r;
    }
    const NehariSolution fresh = assess(s.u, s.params, s.branch, opt);
    r.checks.emplace_back("nehari_membership", std::abs(fresh.dphi) < opt.tol_fiber);
    r.checks.emplace_back("residual", fresh.residual < opt.tol_res);
    const bool positive_branch = s.branch == Branch::plus || s.branch == Branch::rn1;
    r.checks.emplace_back("curvature_sign", !fresh.degenerate && (positive_branch ? fresh.phi2 > 0.0 : fresh.phi2 < 0.0));
    r.checks.emplace_back("admissible", fresh.admissible);
    return r;
}

}  // namespace ngrq
