#include "ngrq/extremal.hpp"

#include <algorithm>
#include <deque>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "ngrq/error.hpp"

namespace ngrq {

Quotient integral_quotient(double grad_exponent, std::vector<double> exponents,
                           std::function<IntegralReduction(const std::vector<double>&)> reduce) {
    return [grad_exponent, exponents = std::move(exponents), reduce = std::move(reduce)](const DiscreteFunction& u) {
        std::vector<double> ints;
        ints.reserve(exponents.size() + 1);
        ints.push_back(gradient_integral(u, grad_exponent));
        for (double r : exponents) ints.push_back(lebesgue_integral(u, r));
        QuotientEval out;
        for (double v : ints)
            if (!(v > 0.0)) {
                out.feasible = false;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
        const IntegralReduction red = reduce(ints);
        out.feasible = red.feasible && std::isfinite(red.value);
        out.value = out.feasible ? red.value : std::numeric_limits<double>::infinity();
        if (!out.feasible) return out;
        out.gradient.assign(u.size(), 0.0);
        auto add = [&](const std::vector<double>& d, double w) {
            if (w == 0.0) return;
            for (std::size_t i = 0; i < d.size(); ++i) out.gradient[i] += w * d[i];
        };
        add(gradient_integral_derivative(u, grad_exponent), red.partials[0]);
        for (std::size_t k = 0; k < exponents.size(); ++k)
            add(lebesgue_integral_derivative(u, exponents[k]), red.partials[k + 1]);
        return out;
    };
}

Quotient constant_quotient(double value) {
    return [value](const DiscreteFunction& u) { return QuotientEval{value, std::vector<double>(u.size(), 0.0), true}; };
}

Quotient dirichlet_quotient() {
    return integral_quotient(2.0, {2.0}, [](const std::vector<double>& I) {
        const double v = I[0] / I[1];
        return IntegralReduction{v, {1.0 / I[1], -v / I[1]}, true};
    });
}

namespace {

// value * prod I_k^{e_k}: partials value * e_k / I_k
IntegralReduction power_product(double value, const std::vector<double>& I, const std::vector<double>& powers) {
    IntegralReduction r{value, {}, true};
    for (std::size_t k = 0; k < I.size(); ++k) r.partials.push_back(value * powers[k] / I[k]);
    return r;
}

}  // namespace

Quotient lambda_u_quotient(const Exponents3& e) {
    e.validate();
    const std::vector<double> powers{(e.gamma - e.q) / (e.gamma - e.p), -1.0, -(e.p - e.q) / (e.gamma - e.p)};
    return integral_quotient(e.p, {e.q, e.gamma}, [e, powers](const std::vector<double>& I) {
        return power_product(lambda_u(FiberCoefficients3{I[0], I[1], I[2], e}).value, I, powers);
    });
}

Quotient lambda_e_u_quotient(const Exponents3& e) {
    e.validate();
    const std::vector<double> powers{(e.gamma - e.q) / (e.gamma - e.p), -1.0, -(e.p - e.q) / (e.gamma - e.p)};
    return integral_quotient(e.p, {e.q, e.gamma}, [e, powers](const std::vector<double>& I) {
        return power_product(lambda_e_u(FiberCoefficients3{I[0], I[1], I[2], e}).value, I, powers);
    });
}

namespace {

Quotient four_term_lambda(const Exponents4& e, Flavor flavor) {
    e.validate();
    const std::vector<double> powers{(e.gamma - e.q) / (e.gamma - e.p), -1.0, 0.0, -(e.p - e.q) / (e.gamma - e.p)};
    return integral_quotient(e.p, {e.q, e.alpha, e.gamma}, [e, powers, flavor](const std::vector<double>& I) {
        const FiberCoefficients4 k{I[0], I[1], I[2], I[3], e};
        const double v = flavor == Flavor::n ? lambda_n_quotient(k).value : lambda_e_quotient(k).value;
        return power_product(v, I, powers);
    });
}

}  // namespace

Quotient lambda_n_u_quotient(const Exponents4& e) { return four_term_lambda(e, Flavor::n); }
Quotient lambda_e4_u_quotient(const Exponents4& e) { return four_term_lambda(e, Flavor::e); }

Quotient mu_u_quotient(const Exponents4& e, double lambda, MuSign sign, Flavor flavor) {
    e.validate();
    if (!(lambda > 0.0)) throw PreconditionViolated("mu quotients need lambda > 0");
    return integral_quotient(e.p, {e.q, e.alpha, e.gamma}, [e, lambda, sign, flavor](const std::vector<double>& I) {
        const FiberCoefficients4 k{I[0], I[1], I[2], I[3], e};
        const double peak = flavor == Flavor::n ? lambda_n_quotient(k).value : lambda_e_quotient(k).value;
        if (!(lambda < peak * (1.0 - 1e-9))) return IntegralReduction{0.0, {}, false};
        const MuPair pair = mu_pm_quotients(k, lambda, flavor);
        const QuotientValue& qv = sign == MuSign::plus ? pair.plus : pair.minus;
        const double t = qv.t;
        // envelope: t is stationary for R_lambda(t u), so differentiate at fixed t
        IntegralReduction r{qv.value, {}, true};
        if (flavor == Flavor::n) {
            r.partials = {std::pow(t, e.p - e.alpha) / k.b_alpha, lambda * std::pow(t, e.q - e.alpha) / k.b_alpha,
                          -qv.value / k.b_alpha, -std::pow(t, e.gamma - e.alpha) / k.b_alpha};
        } else {
            r.partials = {e.alpha * std::pow(t, e.p - e.alpha) / (e.p * k.b_alpha),
                          e.alpha * lambda * std::pow(t, e.q - e.alpha) / (e.q * k.b_alpha), -qv.value / k.b_alpha,
                          -e.alpha * std::pow(t, e.gamma - e.alpha) / (e.gamma * k.b_alpha)};
        }
        return r;
    });
}

void DescentOptions::validate() const {
    if (starts < 1) throw InvalidInput("descent needs at least one start");
    if (max_iterations < 1) throw InvalidInput("max_iterations must be positive");
    if (!(tol_grad > 0.0)) throw InvalidInput("tol_grad must be positive");
    if (!(armijo > 0.0 && armijo < 1.0)) throw InvalidInput("armijo constant must lie in (0,1)");
    if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidInput("shrink factor must lie in (0,1)");
    if (!(normalization_exponent > 1.0)) throw InvalidInput("normalization exponent must exceed 1");
    if (memory < 0) throw InvalidInput("memory must be nonnegative");
}

std::vector<double> ExtremalEstimate::per_start_values() const {
    std::vector<double> v;
    for (const auto& s : starts) v.push_back(s.value);
    return v;
}

int thread_count(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NEHARI_RQ_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(n, 1);
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<std::pair<std::string, DiscreteFunction>> start_functions(const Domain& d, int count, std::uint64_t seed) {
    std::vector<std::pair<std::string, DiscreteFunction>> out;
    const std::size_t n = d.interior_size();
    const double pi = std::numbers::pi;
    auto eval = [&](auto&& f) {
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = f(d.coordinates(k));
        return DiscreteFunction(d, std::move(v));
    };
    std::mt19937_64 rng(seed);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng()); };
    std::optional<StiffnessSolver> smoother;

    for (int i = 0; i < count; ++i) {
        if (i == 0) {
            out.emplace_back("eigenfunction", eval([&](const std::vector<double>& x) {
                switch (d.kind()) {
                case DomainKind::interval: return std::sin(pi * x[0] / d.extent());
                case DomainKind::rectangle: return std::sin(pi * x[0] / d.extent(0)) * std::sin(pi * x[1] / d.extent(1));
                case DomainKind::radial: {
                    const double z = pi * x[0] / d.extent();
                    return z == 0.0 ? 1.0 : std::sin(z) / z;
                }
                }
                return 0.0;
            }));
        } else if (i % 2 == 1) {
            const double cx = uni(0.15, 0.85), cy = uni(0.15, 0.85);
            out.emplace_back("hat", eval([&](const std::vector<double>& x) {
                switch (d.kind()) {
                case DomainKind::interval: {
                    const double L = d.extent(), c = cx * L;
                    return x[0] < c ? x[0] / c : (L - x[0]) / (L - c);
                }
                case DomainKind::rectangle: {
                    const double Lx = d.extent(0), Ly = d.extent(1), a = cx * Lx, b = cy * Ly;
                    return std::min({x[0] / a, (Lx - x[0]) / (Lx - a), x[1] / b, (Ly - x[1]) / (Ly - b)});
                }
                case DomainKind::radial: {
                    const double r0 = (0.1 + 0.7 * cx) * d.extent();
                    return std::max(0.0, 1.0 - x[0] / r0);
                }
                }
                return 0.0;
            }));
        } else {
            if (!smoother) smoother.emplace(d);
            std::vector<double> rhs(n);
            for (double& v : rhs) v = uni(0.2, 1.8);
            // K^{-1} of a positive load is positive and vanishes on the boundary
            out.emplace_back("random", DiscreteFunction(d, smoother->solve(rhs)));
        }
    }
    return out;
}

double normalized_gradient(const DiscreteFunction& u, const QuotientEval& q, bool positive) {
    if (!q.feasible) return std::numeric_limits<double>::infinity();
    const auto w = u.domain().node_weights();
    double gmax = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (positive && u[k] <= 0.0 && q.gradient[k] > 0.0) continue;
        gmax = std::max(gmax, std::abs(q.gradient[k] / w[k]));
    }
    return gmax * u.sup_norm() / std::max(std::abs(q.value), 1e-300);
}

namespace {

struct StartResult {
    StartRecord record;
    std::optional<DiscreteFunction> u;
};

double norm_r(const DiscreteFunction& u, double r) { return std::pow(lebesgue_integral(u, r), 1.0 / r); }

std::optional<DiscreteFunction> project_normalize(const Domain& d, std::vector<double> v, const DescentOptions& opt) {
    if (opt.positive)
        for (double& x : v) x = std::max(x, 0.0);
    DiscreteFunction f(d, std::move(v));
    const double nrm = norm_r(f, opt.normalization_exponent);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return std::nullopt;
    return f.scaled(1.0 / nrm);
}

StartResult run_start(const Quotient& Q, const StiffnessSolver& K, const DiscreteFunction& u0, const DescentOptions& opt,
                      StartRecord rec) {
    StartResult res{rec, std::nullopt};
    const Domain& d = u0.domain();
    auto start = project_normalize(d, std::vector<double>(u0.values().begin(), u0.values().end()), opt);
    if (!start) return res;
    DiscreteFunction u = *start;
    QuotientEval ev = Q(u);
    if (!ev.feasible) {
        res.record.value = std::numeric_limits<double>::infinity();
        return res;
    }
    if (opt.check_homogeneity) {
        const QuotientEval twice = Q(u.scaled(2.0));
        if (!twice.feasible || std::abs(twice.value - ev.value) > 1e-6 * std::max(std::abs(ev.value), 1e-300))
            throw InvalidQuotient("quotient is not 0-homogeneous: Q(u)=" + std::to_string(ev.value) +
                                  ", Q(2u)=" + std::to_string(twice.value));
    }
    res.record.feasible = true;
    if (opt.on_accept) opt.on_accept(u, ev);
    double gn = normalized_gradient(u, ev, opt.positive);
    double step = -1.0;
    // limited-memory pairs (s, y, 1/(s.y)) for the quasi-Newton direction
    struct Pair {
        std::vector<double> s, y;
        double rho;
    };
    std::deque<Pair> history;
    const auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
        return acc;
    };
    int it = 0;
    for (; it < opt.max_iterations && gn >= opt.tol_grad; ++it) {
        std::vector<double> dir;
        bool quasi_newton = false;
        if (!history.empty()) {
            std::vector<double> q = ev.gradient;
            std::vector<double> alpha(history.size());
            for (std::size_t i = history.size(); i-- > 0;) {
                alpha[i] = history[i].rho * dot(history[i].s, q);
                for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * history[i].y[k];
            }
            const Pair& last = history.back();
            const auto Ky = K.solve(last.y);
            const double gamma = 1.0 / (last.rho * dot(last.y, Ky));
            dir = K.solve(q);
            for (double& x : dir) x *= gamma;
            for (std::size_t i = 0; i < history.size(); ++i) {
                const double beta = history[i].rho * dot(history[i].y, dir);
                for (std::size_t k = 0; k < dir.size(); ++k) dir[k] += (alpha[i] - beta) * history[i].s[k];
            }
            for (double& x : dir) x = -x;
            quasi_newton = dot(dir, ev.gradient) < 0.0;
            if (!quasi_newton) history.clear();
        }
        if (!quasi_newton) {
            dir = K.solve(ev.gradient);
            for (double& x : dir) x = -x;
        }
        double dmax = 0.0;
        for (double x : dir) dmax = std::max(dmax, std::abs(x));
        if (dmax == 0.0) break;
        if (quasi_newton) step = 1.0;
        else if (step <= 0.0) step = 0.1 * u.sup_norm() / dmax;
        const std::vector<double> u_prev(u.values().begin(), u.values().end());
        const std::vector<double> g_prev = ev.gradient;
        double slope0 = 0.0;
        for (std::size_t k = 0; k < dir.size(); ++k) slope0 += ev.gradient[k] * dir[k];
        // predicted decreases below this are lost to rounding in Q; the
        // directional derivative is used instead
        const double resolvable = 1e3 * std::numeric_limits<double>::epsilon() * std::abs(ev.value);
        bool accepted = false;
        for (int ls = 0; ls < 80 && !accepted; ++ls, step *= opt.shrink) {
            auto attempt = [&](double s, bool derivative_test) -> bool {
                std::vector<double> v(u.size());
                for (std::size_t k = 0; k < v.size(); ++k) v[k] = u[k] + s * dir[k];
                if (opt.positive)
                    for (double& x : v) x = std::max(x, 0.0);
                double slope = 0.0;
                for (std::size_t k = 0; k < v.size(); ++k) slope += ev.gradient[k] * (v[k] - u[k]);
                const double scale = norm_r(DiscreteFunction(d, v), opt.normalization_exponent);
                auto trial = project_normalize(d, std::move(v), opt);
                if (!trial) return false;
                QuotientEval te = Q(*trial);
                if (!te.feasible) return false;
                if (!derivative_test) {
                    if (!(te.value <= ev.value + opt.armijo * slope)) return false;
                } else {
                    double slope_s = 0.0;
                    for (std::size_t k = 0; k < dir.size(); ++k) slope_s += te.gradient[k] * dir[k];
                    slope_s /= scale;
                    if (!(std::abs(slope_s) < std::abs(slope0)) ||
                        te.value > ev.value + resolvable)
                        return false;
                }
                if (te.value > ev.value) res.record.monotone = res.record.monotone && derivative_test;
                u = std::move(*trial);
                ev = std::move(te);
                gn = normalized_gradient(u, ev, opt.positive);
                if (opt.on_accept) opt.on_accept(u, ev);
                return true;
            };
            if (-slope0 * step > resolvable) {
                accepted = attempt(step, false);
                continue;
            }
            // secant on the directional derivative between 0 and step
            std::vector<double> v(u.size());
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = u[k] + step * dir[k];
            if (opt.positive)
                for (double& x : v) x = std::max(x, 0.0);
            const DiscreteFunction probe(d, std::move(v));
            const QuotientEval pe = Q(probe);
            if (!pe.feasible) continue;
            double slope_s = 0.0;
            for (std::size_t k = 0; k < dir.size(); ++k) slope_s += pe.gradient[k] * dir[k];
            if (!(slope_s > slope0)) {
                accepted = attempt(step, true);
                continue;
            }
            const double s_star = step * slope0 / (slope0 - slope_s);
            accepted = attempt(s_star, true);
            if (accepted) step = s_star;
        }
        if (!accepted) {
            if (history.empty()) break;
            history.clear();  // retry with the preconditioned gradient
            step = -1.0;
            continue;
        }
        step /= opt.shrink;
        step *= 2.0;
        if (opt.memory > 0) {
            Pair pr{std::vector<double>(u.size()), std::vector<double>(u.size()), 0.0};
            for (std::size_t k = 0; k < u.size(); ++k) {
                pr.s[k] = u[k] - u_prev[k];
                pr.y[k] = ev.gradient[k] - g_prev[k];
            }
            const double sy = dot(pr.s, pr.y);
            if (sy > 1e-12 * std::sqrt(dot(pr.s, pr.s) * dot(pr.y, pr.y))) {
                pr.rho = 1.0 / sy;
                history.push_back(std::move(pr));
                if (static_cast<int>(history.size()) > opt.memory) history.pop_front();
            }
        }
    }
    res.record.value = ev.value;
    res.record.iterations = it;
    res.record.grad_norm = gn;
    res.record.converged = gn < opt.tol_grad;
    res.u = std::move(u);
    return res;
}

}  // namespace

ExtremalEstimate minimize_quotient(const Quotient& quotient, const Domain& domain, const DescentOptions& opt) {
    opt.validate();
    const StiffnessSolver K(domain);
    std::vector<std::pair<std::string, DiscreteFunction>> starts;
    for (const auto& w : opt.warm_starts) {
        if (!(w.domain() == domain)) throw InvalidInput("warm start lives on a different grid");
        starts.emplace_back("warm", w);
    }
    for (auto& s : start_functions(domain, opt.starts, opt.seed)) starts.push_back(std::move(s));

    std::vector<StartResult> results(starts.size());
    const int workers = std::min<int>(thread_count(opt.threads), static_cast<int>(starts.size()));
    auto job = [&](std::size_t i) {
        StartRecord rec;
        rec.index = static_cast<int>(i);
        rec.kind = starts[i].first;
        return run_start(quotient, K, starts[i].second, opt, rec);
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i) results[i] = job(i);
    } else {
        for (std::size_t base = 0; base < starts.size(); base += workers) {
            std::vector<std::future<StartResult>> fut;
            for (std::size_t i = base; i < std::min(starts.size(), base + workers); ++i)
                fut.push_back(std::async(std::launch::async, job, i));
            for (std::size_t j = 0; j < fut.size(); ++j) results[base + j] = fut[j].get();
        }
    }

    int best = -1;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].record.feasible || !results[i].u) continue;
        if (best < 0) {
            best = static_cast<int>(i);
            continue;
        }
        const auto& cur = results[i].record;
        const auto& top = results[best].record;
        // values equal to rounding: prefer a converged start
        const bool tie = std::abs(cur.value - top.value) <= 1e-12 * std::abs(top.value);
        if ((!tie && cur.value < top.value) || (tie && cur.converged && !top.converged)) best = static_cast<int>(i);
    }
    if (best < 0) throw Infeasible("no start produced a feasible iterate");
    ExtremalEstimate est{"", results[best].record.value, *results[best].u, {}, best, results[best].record.iterations,
                         results[best].record.grad_norm, results[best].record.converged};
    for (auto& r : results) est.starts.push_back(r.record);
    return est;
}

ExtremalEstimate lambda_star(const Domain& domain, const Exponents3& e, DescentOptions opt) {
    opt.normalization_exponent = e.gamma;
    auto est = minimize_quotient(lambda_u_quotient(e), domain, opt);
    est.name = "lambda_star";
    return est;
}

ExtremalEstimate lambda_n_star(const Domain& domain, const Exponents4& e, DescentOptions opt) {
    opt.normalization_exponent = e.gamma;
    auto est = minimize_quotient(lambda_n_u_quotient(e), domain, opt);
    est.name = "lambda_n_star";
    return est;
}

ExtremalEstimate lambda_e_star(const Domain& domain, const Exponents4& e, DescentOptions opt) {
    opt.normalization_exponent = e.gamma;
    auto est = minimize_quotient(lambda_e4_u_quotient(e), domain, opt);
    est.name = "lambda_e_star";
    return est;
}

ExtremalEstimate mu_extremal(const Domain& domain, const Exponents4& e, double lambda, MuSign sign, Flavor flavor,
                             DescentOptions opt, std::optional<double> lambda_bound) {
    if (!lambda_bound) lambda_bound = (flavor == Flavor::n ? lambda_n_star(domain, e, opt) : lambda_e_star(domain, e, opt)).value;
    if (!(lambda > 0.0 && lambda < *lambda_bound))
        throw PreconditionViolated("lambda " + std::to_string(lambda) + " outside (0, " + std::to_string(*lambda_bound) + ")");
    opt.normalization_exponent = e.gamma;
    auto est = minimize_quotient(mu_u_quotient(e, lambda, sign, flavor), domain, opt);
    est.name = std::string("mu_") + flavor_name(flavor) + (sign == MuSign::plus ? "_plus" : "_minus");
    return est;
}

double gradient_check(const Quotient& quotient, const DiscreteFunction& u, double h) {
    if (!(h > 0.0)) throw InvalidInput("finite-difference step must be positive");
    if (u.sup_norm() == 0.0) throw InvalidInput("gradient check needs a nonzero function");
    const QuotientEval base = quotient(u);
    if (!base.feasible) throw InvalidInput("gradient check at an infeasible point");
    std::vector<double> fd(u.size());
    std::vector<double> v(u.values().begin(), u.values().end());
    double fmax = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double keep = v[k];
        v[k] = keep + h;
        const double fp = quotient(DiscreteFunction(u.domain(), v)).value;
        v[k] = keep - h;
        const double fm = quotient(DiscreteFunction(u.domain(), v)).value;
        v[k] = keep;
        fd[k] = (fp - fm) / (2.0 * h);
        fmax = std::max({fmax, std::abs(fd[k]), std::abs(base.gradient[k])});
    }
    if (fmax == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double scale = std::max({std::abs(fd[k]), std::abs(base.gradient[k]), 1e-6 * fmax});
        worst = std::max(worst, std::abs(base.gradient[k] - fd[k]) / scale);
    }
    return worst;
}

}  // namespace ngrq
