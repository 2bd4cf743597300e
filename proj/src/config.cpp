#include "ngrq/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ngrq/error.hpp"

namespace ngrq {

namespace pt = boost::property_tree;

namespace {

double parse_real(const std::string& field, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ValidationError(field, "expected a number, got '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw ValidationError(field, "expected a finite number, got '" + text + "'");
    return v;
}

long long parse_integer(const std::string& field, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ValidationError(field, "expected an integer, got '" + text + "'");
    }
    if (used != text.size()) throw ValidationError(field, "expected an integer, got '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ValidationError(field, "empty list entry");
        out.push_back(parse_real(field, item.substr(b, e - b + 1)));
    }
    return out;
}

DomainKind parse_kind(const std::string& text) {
    if (text == "interval") return DomainKind::interval;
    if (text == "rectangle") return DomainKind::rectangle;
    if (text == "radial") return DomainKind::radial;
    throw ValidationError("domain.kind", "expected interval, rectangle or radial, got '" + text + "'");
}

const char* kind_name(DomainKind k) {
    switch (k) {
    case DomainKind::interval: return "interval";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::radial: return "radial";
    }
    return "?";
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"problem", {"family"}},
        {"exponents", {"q", "alpha", "p", "gamma"}},
        {"domain", {"kind", "length", "length_x", "length_y", "radius", "nodes", "nodes_x", "nodes_y", "dimension"}},
        {"coefficients", {"a", "b", "b_alpha", "c"}},
        {"parameters",
         {"lambda", "lambda_fraction", "mu", "mu_position", "lambda_grid", "lambda_grid_count", "lambda_grid_max_fraction",
          "energy"}},
        {"solver",
         {"starts", "seed", "max_iterations", "tol_grad", "tol_res", "tol_fiber", "threads", "fresh_starts", "max_bisections"}},
        {"fiber", {"t_min", "t_max", "brackets", "profile_points"}},
        {"output", {"dir"}},
    };
    return s;
}

}  // namespace

Domain DomainSpec::build(int refine) const {
    if (refine < 1) throw ValidationError("grid_refine", "must be >= 1");
    Domain d = [&] {
        switch (kind) {
        case DomainKind::interval: return Domain::interval(length_x, nodes_x);
        case DomainKind::rectangle: return Domain::rectangle(length_x, length_y, nodes_x, nodes_y);
        case DomainKind::radial: return Domain::radial(length_x, nodes_x, dimension);
        }
        throw ValidationError("domain.kind", "unknown domain kind");
    }();
    return d.refined(refine);
}

void ExperimentConfig::validate() const {
    const auto positive = [](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be positive");
    };
    switch (family) {
    case Family::convex_concave:
        if (!(e3.q > 1.0)) throw ValidationError("exponents.q", "must exceed 1");
        if (!(e3.q < e3.p)) throw ValidationError("exponents.q", "ordering 1 < q < p < gamma violated (q >= p)");
        if (!(e3.p < e3.gamma)) throw ValidationError("exponents.gamma", "ordering 1 < q < p < gamma violated (gamma <= p)");
        break;
    case Family::four_term:
        if (!(e4.q > 1.0)) throw ValidationError("exponents.q", "must exceed 1");
        if (!(e4.q < e4.alpha)) throw ValidationError("exponents.q", "ordering 1 < q < alpha < p < gamma violated (q >= alpha)");
        if (!(e4.alpha < e4.p)) throw ValidationError("exponents.alpha", "ordering 1 < q < alpha < p < gamma violated (alpha >= p)");
        if (!(e4.p < e4.gamma)) throw ValidationError("exponents.gamma", "ordering 1 < q < alpha < p < gamma violated (gamma <= p)");
        break;
    case Family::zero_mass:
        if (domain.kind != DomainKind::radial) throw ValidationError("domain.kind", "zero-mass family needs a radial domain");
        zero_mass().validate();
        break;
    }
    positive("domain.length_x", domain.length_x);
    positive("domain.length_y", domain.length_y);
    if (domain.nodes_x < 3) throw ValidationError("domain.nodes_x", "needs at least 3 nodes");
    if (domain.kind == DomainKind::rectangle && domain.nodes_y < 3) throw ValidationError("domain.nodes_y", "needs at least 3 nodes");
    if (domain.kind == DomainKind::radial && domain.dimension < 3) throw ValidationError("domain.dimension", "radial domains need N >= 3");

    if (solver.starts < 1) throw ValidationError("solver.starts", "must be at least 1");
    if (solver.max_iterations < 1) throw ValidationError("solver.max_iterations", "must be at least 1");
    positive("solver.tol_grad", solver.tol_grad);
    positive("solver.tol_res", solver.tol_res);
    positive("solver.tol_fiber", solver.tol_fiber);
    if (solver.threads < 0) throw ValidationError("solver.threads", "must be nonnegative");
    if (solver.fresh_starts < 0) throw ValidationError("solver.fresh_starts", "must be nonnegative");
    if (solver.max_bisections < 0) throw ValidationError("solver.max_bisections", "must be nonnegative");

    positive("fiber.t_min", fiber.t_min);
    if (!(fiber.t_max > fiber.t_min)) throw ValidationError("fiber.t_max", "must exceed t_min");
    if (fiber.brackets < 2) throw ValidationError("fiber.brackets", "must be at least 2");
    if (profile_points < 2) throw ValidationError("fiber.profile_points", "must be at least 2");

    positive("coefficients.a", a);
    positive("coefficients.b", b);
    positive("coefficients.b_alpha", b_alpha);
    positive("coefficients.c", c);

    if (lambda && !std::isfinite(*lambda)) throw ValidationError("parameters.lambda", "must be finite");
    positive("parameters.lambda_fraction", lambda_fraction);
    if (mu && !std::isfinite(*mu)) throw ValidationError("parameters.mu", "must be finite");
    if (!(mu_position > 0.0 && mu_position < 1.0)) throw ValidationError("parameters.mu_position", "must lie in (0, 1)");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0)) throw ValidationError("parameters.lambda_grid", "values must be positive");
        if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
            throw ValidationError("parameters.lambda_grid", "values must be strictly increasing");
    }
    if (lambda_grid_count < 1) throw ValidationError("parameters.lambda_grid_count", "must be at least 1");
    positive("parameters.lambda_grid_max_fraction", lambda_grid_max_fraction);
    positive("parameters.energy", energy);
    if (output_dir.empty()) throw ValidationError("output.dir", "must not be empty");
}

DescentOptions ExperimentConfig::descent() const {
    DescentOptions o;
    o.starts = solver.starts;
    o.seed = solver.seed;
    o.max_iterations = solver.max_iterations;
    o.tol_grad = solver.tol_grad;
    o.threads = solver.threads;
    return o;
}

NehariOptions ExperimentConfig::nehari() const {
    NehariOptions o;
    o.descent = descent();
    // the Nehari solves need a tighter stationarity target than the extremal default
    o.descent.tol_grad = std::min(solver.tol_grad, 1e-10);
    o.tol_res = solver.tol_res;
    o.tol_fiber = solver.tol_fiber;
    o.fiber = fiber;
    return o;
}

ContinuationOptions ExperimentConfig::continuation() const {
    ContinuationOptions o;
    o.nehari = nehari();
    o.fresh_starts = solver.fresh_starts;
    o.max_bisections = solver.max_bisections;
    return o;
}

ZeroMassParams ExperimentConfig::zero_mass(int refine) const {
    ZeroMassParams z;
    z.N = domain.dimension;
    z.p = e3.p;
    z.q = e3.q;
    z.E = energy;
    z.R = domain.length_x;
    z.nodes = (domain.nodes_x - 1) * refine + 1;
    return z;
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["family"] = std::string(family_name(family));
    Json e;
    if (family == Family::four_term) {
        e["q"] = e4.q;
        e["alpha"] = e4.alpha;
        e["p"] = e4.p;
        e["gamma"] = e4.gamma;
    } else if (family == Family::convex_concave) {
        e["q"] = e3.q;
        e["p"] = e3.p;
        e["gamma"] = e3.gamma;
    } else {
        e["q"] = e3.q;
        e["p"] = e3.p;
    }
    j["exponents"] = e;
    Json d;
    d["kind"] = kind_name(domain.kind);
    d["length_x"] = domain.length_x;
    if (domain.kind == DomainKind::rectangle) {
        d["length_y"] = domain.length_y;
        d["nodes_y"] = domain.nodes_y;
    }
    d["nodes_x"] = domain.nodes_x;
    if (domain.kind == DomainKind::radial) d["dimension"] = domain.dimension;
    j["domain"] = d;
    j["solver"] = {{"starts", solver.starts},       {"seed", solver.seed},         {"max_iterations", solver.max_iterations},
                   {"tol_grad", solver.tol_grad},   {"tol_res", solver.tol_res},   {"tol_fiber", solver.tol_fiber},
                   {"fresh_starts", solver.fresh_starts}, {"max_bisections", solver.max_bisections}};
    j["fiber"] = {{"t_min", fiber.t_min}, {"t_max", fiber.t_max}, {"brackets", fiber.brackets}, {"profile_points", profile_points}};
    j["coefficients"] = {{"a", a}, {"b", b}, {"b_alpha", b_alpha}, {"c", c}};
    Json p;
    if (lambda) p["lambda"] = *lambda;
    else p["lambda_fraction"] = lambda_fraction;
    if (mu) p["mu"] = *mu;
    else p["mu_position"] = mu_position;
    if (!lambda_grid.empty()) p["lambda_grid"] = lambda_grid;
    else {
        p["lambda_grid_count"] = lambda_grid_count;
        p["lambda_grid_max_fraction"] = lambda_grid_max_fraction;
    }
    if (family == Family::zero_mass) p["energy"] = energy;
    j["parameters"] = p;
    return j;
}

ExperimentConfig default_config(Family family) {
    ExperimentConfig c;
    c.family = family;
    if (family == Family::zero_mass) {
        c.e3 = Exponents3{3.0, 4.0, 0.0};
        c.domain.kind = DomainKind::radial;
        c.domain.length_x = 30.0;
        c.domain.nodes_x = 600;
        c.domain.dimension = 3;
    }
    return c;
}

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError("config", std::string("malformed INI: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) throw ValidationError(section, "unknown section");
        if (body.empty() && !body.data().empty()) throw ValidationError(section, "key outside a section");
        for (const auto& [key, value] : body)
            if (!it->second.count(key)) throw ValidationError(section + "." + key, "unknown key");
    }
    const auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
        return std::nullopt;
    };

    Family family = Family::convex_concave;
    if (auto f = get("problem.family")) {
        try {
            family = parse_family(*f);
        } catch (const Error&) {
            throw ValidationError("problem.family", "expected convex-concave, four-term or zero-mass, got '" + *f + "'");
        }
    }
    ExperimentConfig c = default_config(family);
    const auto real = [&](const std::string& path, double& dst) {
        if (auto v = get(path)) dst = parse_real(path, *v);
    };
    const auto integer = [&](const std::string& path, int& dst) {
        if (auto v = get(path)) {
            const long long x = parse_integer(path, *v);
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) throw ValidationError(path, "out of range");
            dst = static_cast<int>(x);
        }
    };

    if (family == Family::four_term) {
        real("exponents.q", c.e4.q);
        real("exponents.alpha", c.e4.alpha);
        real("exponents.p", c.e4.p);
        real("exponents.gamma", c.e4.gamma);
    } else {
        if (family == Family::zero_mass && get("exponents.gamma")) throw ValidationError("exponents.gamma", "not used by the zero-mass family");
        if (get("exponents.alpha")) throw ValidationError("exponents.alpha", "only used by the four-term family");
        real("exponents.q", c.e3.q);
        real("exponents.p", c.e3.p);
        real("exponents.gamma", c.e3.gamma);
    }

    if (auto k = get("domain.kind")) c.domain.kind = parse_kind(*k);
    real("domain.length", c.domain.length_x);
    real("domain.radius", c.domain.length_x);
    real("domain.length_x", c.domain.length_x);
    real("domain.length_y", c.domain.length_y);
    integer("domain.nodes", c.domain.nodes_x);
    if (get("domain.nodes")) c.domain.nodes_y = c.domain.nodes_x;
    integer("domain.nodes_x", c.domain.nodes_x);
    integer("domain.nodes_y", c.domain.nodes_y);
    integer("domain.dimension", c.domain.dimension);

    real("coefficients.a", c.a);
    real("coefficients.b", c.b);
    real("coefficients.b_alpha", c.b_alpha);
    real("coefficients.c", c.c);

    if (auto v = get("parameters.lambda")) c.lambda = parse_real("parameters.lambda", *v);
    real("parameters.lambda_fraction", c.lambda_fraction);
    if (auto v = get("parameters.mu")) c.mu = parse_real("parameters.mu", *v);
    real("parameters.mu_position", c.mu_position);
    if (auto v = get("parameters.lambda_grid")) c.lambda_grid = parse_list("parameters.lambda_grid", *v);
    integer("parameters.lambda_grid_count", c.lambda_grid_count);
    real("parameters.lambda_grid_max_fraction", c.lambda_grid_max_fraction);
    real("parameters.energy", c.energy);

    integer("solver.starts", c.solver.starts);
    if (auto v = get("solver.seed")) {
        const long long s = parse_integer("solver.seed", *v);
        if (s < 0) throw ValidationError("solver.seed", "must be nonnegative");
        c.solver.seed = static_cast<std::uint64_t>(s);
    }
    integer("solver.max_iterations", c.solver.max_iterations);
    real("solver.tol_grad", c.solver.tol_grad);
    real("solver.tol_res", c.solver.tol_res);
    real("solver.tol_fiber", c.solver.tol_fiber);
    integer("solver.threads", c.solver.threads);
    integer("solver.fresh_starts", c.solver.fresh_starts);
    integer("solver.max_bisections", c.solver.max_bisections);

    real("fiber.t_min", c.fiber.t_min);
    real("fiber.t_max", c.fiber.t_max);
    integer("fiber.brackets", c.fiber.brackets);
    integer("fiber.profile_points", c.profile_points);

    if (auto v = get("output.dir")) c.output_dir = *v;
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("config", "cannot open " + path.string());
    return parse_config(f);
}

}  // namespace ngrq
