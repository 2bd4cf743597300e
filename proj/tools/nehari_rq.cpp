// nehari-rq: configuration-driven front end. Exit codes: 0 ok, 1 validation, 2 numerical failure.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ngrq/checks.hpp"
#include "ngrq/config.hpp"
#include "ngrq/error.hpp"
#include "ngrq/extremal.hpp"
#include "ngrq/fibering.hpp"
#include "ngrq/io.hpp"
#include "ngrq/nehari.hpp"
#include "ngrq/quotients.hpp"
#include "ngrq/zeromass.hpp"

namespace fs = std::filesystem;
using namespace ngrq;

namespace {

constexpr int exit_ok = 0, exit_validation = 1, exit_numerical = 2;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    int refine = 1;
};

struct Context {
    ExperimentConfig cfg;
    fs::path out;
    int refine = 1;
    Domain domain;

    fs::path file(const std::string& name) const { return out / name; }
    void write(const std::string& name, const std::string& content) const { write_atomic(file(name), content); }
    void write_json(const std::string& name, const Json& j) const { write(name, to_json_text(j) + "\n"); }

    Json header(const std::string& command) const {
        Json j;
        j["command"] = command;
        j["seed"] = cfg.solver.seed;
        j["grid_refine"] = refine;
        j["config"] = cfg.to_json();
        return j;
    }
};

Context make_context(const Globals& g, std::optional<Family> family_override = std::nullopt) {
    Context c;
    c.cfg = g.config_path.empty() ? default_config(family_override.value_or(Family::convex_concave)) : load_config(g.config_path);
    if (g.seed) c.cfg.solver.seed = *g.seed;
    if (!g.out.empty()) c.cfg.output_dir = g.out;
    if (g.refine < 1) throw ValidationError("grid_refine", "must be >= 1");
    c.cfg.validate();
    c.refine = g.refine;
    c.out = c.cfg.output_dir;
    c.domain = c.cfg.domain.build(g.refine);
    fs::create_directories(c.out);
    return c;
}

const char* kind_name(DomainKind k) {
    switch (k) {
    case DomainKind::interval: return "interval";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::radial: return "radial";
    }
    return "?";
}

Json grid_json(const Domain& d) {
    Json j;
    j["kind"] = kind_name(d.kind());
    j["extent"] = d.extent(0);
    j["nodes"] = d.nodes(0);
    if (d.kind() == DomainKind::rectangle) {
        j["extent_y"] = d.extent(1);
        j["nodes_y"] = d.nodes(1);
    }
    if (d.kind() == DomainKind::radial) j["dimension"] = d.dimension();
    j["unknowns"] = d.interior_size();
    return j;
}

Json estimate_json(const ExtremalEstimate& e, const Domain& d) {
    Json j;
    j["name"] = e.name;
    j["value"] = e.value;
    j["grid"] = grid_json(d);
    Json starts = Json::array();
    for (const auto& s : e.starts)
        starts.push_back({{"index", s.index},
                          {"kind", s.kind},
                          {"value", s.value},
                          {"iterations", s.iterations},
                          {"grad_norm", s.grad_norm},
                          {"feasible", s.feasible},
                          {"converged", s.converged},
                          {"monotone", s.monotone}});
    j["starts"] = starts;
    j["per_start_values"] = e.per_start_values();
    j["diagnostics"] = {{"best_start", e.best_start},
                        {"iterations", e.iterations},
                        {"grad_norm", e.grad_norm},
                        {"converged", e.converged}};
    return j;
}

Json solution_json(const NehariSolution& s, const NehariOptions& opt) {
    Json j;
    j["branch"] = branch_name(s.branch);
    j["lambda"] = s.lambda();
    j["mu"] = s.mu();
    j["energy"] = s.energy;
    j["dphi"] = s.dphi;
    j["phi2"] = s.phi2;
    j["residual"] = s.residual;
    j["lambda_quotient"] = s.lambda_quotient;
    j["admissible"] = s.admissible;
    j["degenerate"] = s.degenerate;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    j["coercivity_violations"] = s.coercivity_violations;
    Json v;
    for (const auto& [name, ok] : verify(s, opt).checks) v[name] = ok;
    j["verify"] = v;
    return j;
}

Json quotient_json(const QuotientValue& q) {
    return {{"kind", quotient_kind_name(q.kind)}, {"value", q.value}, {"realizer_t", q.t}};
}

// The function every single-function subcommand works with: the first start
// of the descent family (eigenfunction shape), normalized to sup 1.
DiscreteFunction reference_function(const Context& c) {
    auto u = start_functions(c.domain, 1, c.cfg.solver.seed).front().second;
    return u.scaled(1.0 / u.sup_norm());
}

double fiber_lambda_3(const Context& c, const FiberCoefficients3& k) {
    return c.cfg.lambda ? *c.cfg.lambda : c.cfg.lambda_fraction * lambda_u(k).value;
}

double fiber_lambda_4(const Context& c, const FiberCoefficients4& k) {
    return c.cfg.lambda ? *c.cfg.lambda : c.cfg.lambda_fraction * lambda_e_quotient(k).value;
}

FiberCoefficients3 configured(FiberCoefficients3 k, const ExperimentConfig& cfg) {
    k.a *= cfg.a;
    k.b *= cfg.b;
    k.c *= cfg.c;
    return k;
}

FiberCoefficients4 configured(FiberCoefficients4 k, const ExperimentConfig& cfg) {
    k.a *= cfg.a;
    k.b_q *= cfg.b;
    k.b_alpha *= cfg.b_alpha;
    k.c *= cfg.c;
    return k;
}

std::vector<double> log_samples(double lo, double hi, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return t;
}

Json points_json(const CriticalPointSet& set) {
    Json pts = Json::array();
    for (const auto& p : set.points) pts.push_back({{"t", p.t}, {"curvature", curvature_name(p.curvature)}, {"ddphi", p.ddphi}});
    return pts;
}

int run_fiber(const Context& c) {
    Json j = c.header("fiber");
    const auto u = reference_function(c);
    const auto ts = log_samples(c.cfg.fiber.t_min, c.cfg.fiber.t_max, c.cfg.profile_points);
    std::vector<FiberSample> rows;
    std::string summary;
    switch (c.cfg.family) {
    case Family::convex_concave: {
        const auto k = configured(fiber_coefficients(u, c.cfg.e3), c.cfg);
        const double lambda = fiber_lambda_3(c, k);
        const auto set = critical_points_3term(k, lambda, c.cfg.fiber);
        j["coefficients"] = {{"a", k.a}, {"b", k.b}, {"c", k.c}};
        j["lambda"] = lambda;
        j["lambda_u"] = lambda_u(k).value;
        j["critical_points"] = points_json(set);
        for (double t : ts) {
            const auto f = phi_fiber(k, lambda, t);
            rows.push_back({t, f.phi, f.dphi, f.ddphi});
        }
        summary = "fiber: lambda " + format_double(lambda) + ", " + std::to_string(set.points.size()) + " critical point(s)";
        break;
    }
    case Family::four_term: {
        const auto k = configured(fiber_coefficients(u, c.cfg.e4), c.cfg);
        const double lambda = fiber_lambda_4(c, k);
        double mu = 0.0;
        if (c.cfg.mu) mu = *c.cfg.mu;
        else {
            const double lo = mu_pm_quotients(k, lambda, Flavor::e).minus.value, hi = mu_pm_quotients(k, lambda, Flavor::n).minus.value;
            mu = lo + c.cfg.mu_position * (hi - lo);
        }
        const auto set = critical_points_4term(k, lambda, mu, c.cfg.fiber);
        j["coefficients"] = {{"a", k.a}, {"b_q", k.b_q}, {"b_alpha", k.b_alpha}, {"c", k.c}};
        j["lambda"] = lambda;
        j["mu"] = mu;
        j["critical_points"] = points_json(set);
        for (double t : ts) {
            const auto f = phi_fiber(k, lambda, mu, t);
            rows.push_back({t, f.phi, f.dphi, f.ddphi});
        }
        summary = "fiber: lambda " + format_double(lambda) + ", mu " + format_double(mu) + ", " +
                  std::to_string(set.points.size()) + " critical point(s)";
        break;
    }
    case Family::zero_mass: {
        // energy-level fiber t -> M^E(t u); phi = M^E, dphi its t-derivative
        const auto z = c.cfg.zero_mass(c.refine);
        const auto I = zero_mass_integrals(u, z.p, z.q);
        j["integrals"] = {{"T", I.T}, {"A", I.A}, {"B", I.B}};
        for (double t : ts) {
            const double h = 1e-5 * t;
            const double dd = (ME_fiber_derivative(I, t + h, z) - ME_fiber_derivative(I, t - h, z)) / (2 * h);
            rows.push_back({t, ME_fiber(I, t, z), ME_fiber_derivative(I, t, z), dd});
        }
        if (z.q < z.p) {
            const auto m = mu_E(I, z);
            j["t_E"] = m.t;
            j["mu_E"] = m.value;
            summary = "fiber: M^E minimized at t_E " + format_double(m.t);
        } else {
            j["t_E"] = nullptr;
            j["mu_E"] = nullptr;
            summary = "fiber: M^E increasing along the fiber (p < q)";
        }
        break;
    }
    }
    c.write("fiber.csv", fiber_csv(rows));
    c.write_json("fiber.json", j);
    std::cout << summary << " -> " << c.file("fiber.json").string() << "\n";
    return exit_ok;
}

int run_quotient(const Context& c, bool profile) {
    Json j = c.header("quotient");
    const auto u = reference_function(c);
    Json qs = Json::array();
    std::string csv;
    const auto ts = log_samples(c.cfg.fiber.t_min, c.cfg.fiber.t_max, c.cfg.profile_points);
    std::string summary;
    switch (c.cfg.family) {
    case Family::convex_concave: {
        const auto k = configured(fiber_coefficients(u, c.cfg.e3), c.cfg);
        j["inputs"] = {{"a", k.a}, {"b", k.b}, {"c", k.c}};
        const auto l = lambda_u(k), le = lambda_e_u(k);
        qs.push_back(quotient_json(l));
        qs.push_back(quotient_json(le));
        csv = "t,r_n,r_e\n";
        for (double t : ts) csv += format_double(t) + "," + format_double(rn_3term(k, t)) + "," + format_double(re_3term(k, t)) + "\n";
        summary = "quotient: lambda(u) " + format_double(l.value) + ", lambda_e(u) " + format_double(le.value);
        break;
    }
    case Family::four_term: {
        const auto k = configured(fiber_coefficients(u, c.cfg.e4), c.cfg);
        j["inputs"] = {{"a", k.a}, {"b_q", k.b_q}, {"b_alpha", k.b_alpha}, {"c", k.c}};
        const auto ln = lambda_n_quotient(k), le = lambda_e_quotient(k);
        qs.push_back(quotient_json(ln));
        qs.push_back(quotient_json(le));
        const double lambda = fiber_lambda_4(c, k);
        j["lambda"] = lambda;
        for (auto flavor : {Flavor::n, Flavor::e}) {
            const auto m = mu_pm_quotients(k, lambda, flavor);
            auto jp = quotient_json(m.plus), jm = quotient_json(m.minus);
            jp["flavor"] = flavor_name(flavor);
            jm["flavor"] = flavor_name(flavor);
            qs.push_back(jp);
            qs.push_back(jm);
        }
        csv = "t,r_n_lambda,r_e_lambda,big_lambda_n,big_lambda_e\n";
        for (double t : ts)
            csv += format_double(t) + "," + format_double(rn_lambda_4term(k, lambda, t)) + "," +
                   format_double(re_lambda_4term(k, lambda, t)) + "," + format_double(big_lambda_n(k, t)) + "," +
                   format_double(big_lambda_e(k, t)) + "\n";
        summary = "quotient: lambda_n(u) " + format_double(ln.value) + ", lambda_e(u) " + format_double(le.value);
        break;
    }
    case Family::zero_mass: {
        const auto z = c.cfg.zero_mass(c.refine);
        const auto I = zero_mass_integrals(u, z.p, z.q);
        j["inputs"] = {{"T", I.T}, {"A", I.A}, {"B", I.B}, {"E", z.E}};
        j["sigma_E"] = sigma_E(I.T, z.E, z.N);
        j["M_E"] = ME_quotient(I, z);
        if (z.q < z.p) {
            const auto m = mu_E(I, z);
            qs.push_back(quotient_json(m));
            qs.push_back({{"kind", "mu"}, {"value", mu_functional(I, z)}, {"realizer_t", nullptr}});
            summary = "quotient: mu_E(u) " + format_double(m.value) + ", mu(u) " + format_double(mu_functional(I, z));
        } else {
            summary = "quotient: p < q, M^E(t u) has no minimum along the fiber";
        }
        csv = "t,m_E\n";
        for (double t : ts) csv += format_double(t) + "," + format_double(ME_fiber(I, t, z)) + "\n";
        break;
    }
    }
    j["quotients"] = qs;
    if (profile) c.write("quotient_profile.csv", csv);
    c.write_json("quotient.json", j);
    std::cout << summary << " -> " << c.file("quotient.json").string() << "\n";
    return exit_ok;
}

// lambda of the PDE subcommands: absolute, or a fraction of the relevant extremal estimate.
double pde_lambda(const ExperimentConfig& cfg, double estimate) { return cfg.lambda ? *cfg.lambda : cfg.lambda_fraction * estimate; }

int run_extremal(const Context& c, bool dump) {
    Json j = c.header("extremal");
    Json ests = Json::array();
    bool converged = true;
    std::optional<std::pair<std::string, DiscreteFunction>> first;
    const auto add = [&](const ExtremalEstimate& e) {
        ests.push_back(estimate_json(e, c.domain));
        converged = converged && e.converged;
        if (!first) first.emplace(e.name, e.minimizer);
        std::cout << "extremal: " << e.name << " = " << format_double(e.value) << (e.converged ? "" : " (not converged)") << "\n";
    };
    const auto opt = c.cfg.descent();
    switch (c.cfg.family) {
    case Family::convex_concave:
        add(lambda_star(c.domain, c.cfg.e3, opt));
        break;
    case Family::four_term: {
        const auto le = lambda_e_star(c.domain, c.cfg.e4, opt);
        const auto ln = lambda_n_star(c.domain, c.cfg.e4, opt);
        add(le);
        add(ln);
        const double lambda = pde_lambda(c.cfg, le.value);
        j["lambda"] = lambda;
        for (auto flavor : {Flavor::n, Flavor::e})
            for (auto sign : {MuSign::plus, MuSign::minus})
                add(mu_extremal(c.domain, c.cfg.e4, lambda, sign, flavor, opt, flavor == Flavor::n ? ln.value : le.value));
        break;
    }
    case Family::zero_mass: {
        const auto z = c.cfg.zero_mass(c.refine);
        if (!(z.q < z.p)) throw ValidationError("exponents.q", "mu(u) is minimized only for q < p");
        add(solve_prescribed_energy(z, opt).estimate);
        break;
    }
    }
    j["estimates"] = ests;
    if (dump && first) c.write("extremal_minimizer.csv", function_csv(first->second));
    c.write_json("extremal.json", j);
    std::cout << "extremal: -> " << c.file("extremal.json").string() << "\n";
    return converged ? exit_ok : exit_numerical;
}

Json zero_mass_json(const PrescribedEnergySolution& s) {
    Json j;
    j["mu_bar"] = s.mu_bar;
    j["mu_hat"] = s.mu_hat;
    j["E"] = s.E;
    j["energy_achieved"] = s.energy_achieved;
    j["checks"] = {{"sigma", s.sigma_check}, {"t", s.t_check}};
    j["residual"] = s.residual;
    j["sigma"] = s.sigma;
    j["t"] = s.t;
    j["outer_mass_fraction"] = s.outer_mass_fraction;
    j["truncation_warning"] = s.truncation_warning;
    j["converged"] = s.converged;
    return j;
}

int run_zero_mass(const Context& c, const std::string& command) {
    if (c.cfg.family != Family::zero_mass) throw ValidationError("problem.family", "zero-mass requires family = zero-mass");
    Json j = c.header(command);
    const auto z = c.cfg.zero_mass(c.refine);
    if (z.p < z.q) {
        const auto cert = nonexistence_certificate(z, c.cfg.solver.seed);
        j["nonexistence_certificate"] = {{"issued", cert.issued},
                                         {"sobolev_gap", cert.sobolev_gap},
                                         {"order_gap", cert.order_gap},
                                         {"samples", cert.samples},
                                         {"grid_points", cert.grid_points},
                                         {"t_min", cert.t_min},
                                         {"t_max", cert.t_max},
                                         {"sign_changes", cert.sign_changes},
                                         {"min_scaled_derivative", cert.min_scaled_derivative}};
        j["solution"] = nullptr;
        c.write_json("zero_mass.json", j);
        std::cout << command << ": p < q, no prescribed-energy solution; nonexistence certificate "
                  << (cert.issued ? "issued" : "NOT issued") << " -> " << c.file("zero_mass.json").string() << "\n";
        return cert.issued ? exit_ok : exit_numerical;
    }
    const auto s = solve_prescribed_energy(z, c.cfg.descent());
    j["solution"] = zero_mass_json(s);
    c.write("zero_mass_profile.csv", radial_profile_csv(s.u));
    c.write_json("zero_mass.json", j);
    std::cout << command << ": mu_bar " << format_double(s.mu_bar) << ", mu_hat " << format_double(s.mu_hat) << ", residual "
              << format_double(s.residual) << (s.truncation_warning ? " [truncation warning]" : "") << " -> "
              << c.file("zero_mass.json").string() << "\n";
    if (s.truncation_warning) std::cerr << "warning: more than 1% of int |u|^q lies in the outer 10% of the radius\n";
    return s.converged ? exit_ok : exit_numerical;
}

int run_ground_state(const Context& c) {
    if (c.cfg.family == Family::zero_mass) return run_zero_mass(c, "ground-state");
    Json j = c.header("ground-state");
    const auto opt = c.cfg.nehari();
    Json sols = Json::array();
    bool ok = true;
    const auto record = [&](const NehariSolution& s) {
        sols.push_back(solution_json(s, opt));
        c.write(std::string("ground_state_") + branch_name(s.branch) + ".csv", function_csv(s.u));
        const bool good = s.converged && verify(s, opt).ok();
        ok = ok && good;
        std::cout << "ground-state: " << branch_name(s.branch) << " energy " << format_double(s.energy) << ", residual "
                  << format_double(s.residual) << (good ? "" : " [not verified]") << "\n";
    };
    if (c.cfg.family == Family::convex_concave) {
        double lambda = 0.0;
        if (c.cfg.lambda) lambda = *c.cfg.lambda;
        else {
            const auto star = lambda_star(c.domain, c.cfg.e3, c.cfg.descent());
            j["lambda_star"] = star.value;
            lambda = c.cfg.lambda_fraction * star.value;
        }
        j["lambda"] = lambda;
        record(solve_M(lambda, Branch::plus, c.domain, c.cfg.e3, opt));
        record(solve_M(lambda, Branch::minus, c.domain, c.cfg.e3, opt));
    } else {
        const auto d = c.cfg.descent();
        const auto le = lambda_e_star(c.domain, c.cfg.e4, d);
        const auto ln = lambda_n_star(c.domain, c.cfg.e4, d);
        const double lambda = pde_lambda(c.cfg, le.value);
        const auto w = estimate_window(lambda, c.domain, c.cfg.e4, le, ln, d);
        const double mu = c.cfg.mu ? *c.cfg.mu : w.mu_e_minus + c.cfg.mu_position * (w.mu_n_minus - w.mu_e_minus);
        j["lambda"] = lambda;
        j["mu"] = mu;
        j["window"] = {{"lambda_e", w.lambda_e},   {"lambda_n", w.lambda_n},     {"mu_n_plus", w.mu_n_plus},
                       {"mu_e_plus", w.mu_e_plus}, {"mu_e_minus", w.mu_e_minus}, {"mu_n_minus", w.mu_n_minus}};
        record(solve_three_term(lambda, mu, Branch::rn1, c.domain, c.cfg.e4, w, opt));
        record(solve_three_term(lambda, mu, Branch::rn2, c.domain, c.cfg.e4, w, opt));
    }
    j["solutions"] = sols;
    c.write_json("ground_state.json", j);
    std::cout << "ground-state: -> " << c.file("ground_state.json").string() << "\n";
    return ok ? exit_ok : exit_numerical;
}

int run_branch(const Context& c, const std::string& which) {
    if (c.cfg.family != Family::convex_concave) throw ValidationError("problem.family", "branch continuation needs family = convex-concave");
    const Branch b = parse_branch(which);
    if (b != Branch::plus && b != Branch::minus) throw ValidationError("branch", "expected plus or minus");
    Json j = c.header("branch");
    std::vector<double> grid = c.cfg.lambda_grid;
    if (grid.empty()) {
        const auto star = lambda_star(c.domain, c.cfg.e3, c.cfg.descent());
        j["lambda_star"] = star.value;
        const int n = c.cfg.lambda_grid_count;
        for (int i = 1; i <= n; ++i) grid.push_back(star.value * c.cfg.lambda_grid_max_fraction * i / n);
    }
    const auto diagram = continue_branch(grid, b, c.domain, c.cfg.e3, c.cfg.continuation());
    j["branch"] = branch_name(b);
    j["lambda_grid"] = grid;
    j["lambda_f"] = diagram.lambda_f ? Json(*diagram.lambda_f) : Json(nullptr);
    j["lambda_fail"] = diagram.lambda_fail ? Json(*diagram.lambda_fail) : Json(nullptr);
    Json att = Json::array();
    for (const auto& r : diagram.rows) att.push_back(r.attempted);
    j["attempted"] = att;
    j["bisection_probes"] = diagram.bisection.size();
    c.write("branch.csv", branch_csv(diagram.rows));
    c.write("branch_bisection.csv", branch_csv(diagram.bisection));
    if (diagram.last_solution) c.write("branch_last_solution.csv", function_csv(*diagram.last_solution));
    c.write_json("branch.json", j);
    std::cout << "branch: " << branch_name(b) << ", lambda_f "
              << (diagram.lambda_f ? format_double(*diagram.lambda_f) : std::string("none")) << " -> "
              << c.file("branch.json").string() << "\n";
    return diagram.lambda_f ? exit_ok : exit_numerical;
}

int run_check(const Globals& g, const std::string& family_name_arg) {
    CheckOptions opt;
    opt.family = parse_family(family_name_arg);
    if (g.seed) opt.seed = *g.seed;
    if (g.refine < 1) throw ValidationError("grid_refine", "must be >= 1");
    opt.refine = g.refine;
    Json j;
    j["command"] = "check";
    j["family"] = std::string(family_name(*opt.family));
    j["seed"] = opt.seed;
    j["grid_refine"] = opt.refine;
    Json crit = Json::array();
    bool all = true;
    for (int id = 1; id <= criterion_count; ++id) {
        if (!criterion_applies(id, *opt.family)) continue;
        const auto r = run_criterion(id, opt);
        all = all && r.pass();
        crit.push_back(r.to_json());
        std::printf("%s criterion %d: %s (%.2f s)\n", r.pass() ? "PASS" : "FAIL", id, r.title.c_str(), r.seconds);
        for (const auto& l : r.lines)
            if (!l.pass) std::printf("    [FAIL] %s: %s\n", l.name.c_str(), l.detail.c_str());
        std::fflush(stdout);
    }
    j["criteria"] = crit;
    j["pass"] = all;
    if (!g.out.empty()) {
        fs::create_directories(g.out);
        write_atomic(fs::path(g.out) / "check.json", to_json_text(j) + "\n");
    }
    return all ? exit_ok : exit_numerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nehari manifold and Rayleigh quotient experiments"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config_path, "INI configuration file")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Override solver.seed");
    app.add_option("--out", g.out, "Override output.dir");
    app.add_option("--grid-refine", g.refine, "Multiply (nodes - 1) on every axis");
    app.fallthrough();

    auto* fiber = app.add_subcommand("fiber", "Fibering map of the reference function: critical points and t-profile");
    auto* quotient = app.add_subcommand("quotient", "Nonlinear Rayleigh quotients of the reference function");
    bool profile = false;
    quotient->add_flag("--profile", profile, "Also write quotient_profile.csv");
    auto* extremal = app.add_subcommand("extremal", "Extremal values by multi-start descent");
    bool dump = false;
    extremal->add_flag("--dump-minimizer", dump, "Write the first estimate's minimizer as CSV");
    auto* ground = app.add_subcommand("ground-state", "Two Nehari solutions (or the zero-mass solution)");
    auto* branch = app.add_subcommand("branch", "Continuation of a solution branch in lambda");
    std::string which = "plus";
    branch->add_option("--branch", which, "plus or minus");
    auto* zero = app.add_subcommand("zero-mass", "Prescribed-energy solution or nonexistence certificate");
    auto* check = app.add_subcommand("check", "Acceptance criteria for one family");
    std::string family;
    check->add_option("--family", family, "convex-concave, four-term or zero-mass")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_validation;
    }
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        if (check->parsed()) return run_check(g, family);
        const Context c = make_context(g, zero->parsed() ? std::optional<Family>(Family::zero_mass) : std::nullopt);
        if (fiber->parsed()) return run_fiber(c);
        if (quotient->parsed()) return run_quotient(c, profile);
        if (extremal->parsed()) return run_extremal(c, dump);
        if (ground->parsed()) return run_ground_state(c);
        if (branch->parsed()) return run_branch(c, which);
        if (zero->parsed()) return run_zero_mass(c, "zero-mass");
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_validation;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_validation;
}
