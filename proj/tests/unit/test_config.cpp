#include <sstream>

#include "doctest.h"
#include "ngrq/config.hpp"
#include "ngrq/error.hpp"

using namespace ngrq;

namespace {
ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string failing_field(const std::string& text) {
    try {
        parse(text);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}
}  // namespace

TEST_CASE("empty config gives the convex-concave worked example") {
    const auto c = parse("");
    CHECK(c.family == Family::convex_concave);
    CHECK(c.e3.q == 1.5);
    CHECK(c.e3.p == 2.0);
    CHECK(c.e3.gamma == 3.0);
    CHECK(c.domain.nodes_x == 101);
    CHECK(c.domain.build().interior_size() == 99);
    CHECK(c.domain.build(2).interior_size() == 199);
}

TEST_CASE("zero-mass defaults") {
    const auto c = parse("[problem]\nfamily = zero-mass\n");
    const auto z = c.zero_mass();
    CHECK(z.N == 3);
    CHECK(z.q == 3.0);
    CHECK(z.p == 4.0);
    CHECK(z.R == 30.0);
    CHECK(z.nodes == 600);
    CHECK(c.zero_mass(2).nodes == 1199);
}

TEST_CASE("full four-term config") {
    const auto c = parse(R"(
[problem]
family = four-term
[exponents]
q = 1.2
alpha = 1.6
p = 2
gamma = 3.5
[domain]
kind = rectangle
length_x = 2
length_y = 1
nodes = 21
[parameters]
lambda = 0.3
mu = 14
lambda_grid = 0.1, 0.2, 0.4
[solver]
starts = 3
seed = 42
[output]
dir = results
)");
    CHECK(c.family == Family::four_term);
    CHECK(c.e4.alpha == 1.6);
    CHECK(c.e4.gamma == 3.5);
    CHECK(c.domain.kind == DomainKind::rectangle);
    CHECK(c.domain.nodes_y == 21);
    CHECK(*c.lambda == 0.3);
    CHECK(*c.mu == 14.0);
    CHECK(c.lambda_grid.size() == 3);
    CHECK(c.solver.seed == 42);
    CHECK(c.descent().starts == 3);
    CHECK(c.output_dir == "results");
}

TEST_CASE("validation names the offending field") {
    CHECK(failing_field("[exponents]\nq = 2.5\n") == "exponents.q");
    CHECK(failing_field("[exponents]\ngamma = 1.8\n") == "exponents.gamma");
    CHECK(failing_field("[exponents]\nq = 0.9\n") == "exponents.q");
    CHECK(failing_field("[problem]\nfamily = four-term\n[exponents]\nalpha = 2.5\n") == "exponents.alpha");
    CHECK(failing_field("[problem]\nfamily = zero-mass\n[exponents]\nq = 5\np = 4\n") == "");  // p < q is allowed (certificate)
    CHECK(failing_field("[problem]\nfamily = zero-mass\n[exponents]\np = 6\n") == "p");
    CHECK(failing_field("[problem]\nfamily = zero-mass\n[parameters]\nenergy = -1\n") == "E");
    CHECK(failing_field("[problem]\nfamily = zero-mass\n[domain]\nkind = interval\n") == "domain.kind");
    CHECK(failing_field("[problem]\nfamily = spiral\n") == "problem.family");
    CHECK(failing_field("[domain]\nnodes = 2\n") == "domain.nodes_x");
    CHECK(failing_field("[domain]\nkind = disk\n") == "domain.kind");
    CHECK(failing_field("[solver]\nstarts = 0\n") == "solver.starts");
    CHECK(failing_field("[solver]\nseed = -4\n") == "solver.seed");
    CHECK(failing_field("[solver]\ntol_grad = abc\n") == "solver.tol_grad");
    CHECK(failing_field("[solver]\nstarts = 2.5\n") == "solver.starts");
    CHECK(failing_field("[parameters]\nlambda_grid = 1, 0.5\n") == "parameters.lambda_grid");
    CHECK(failing_field("[parameters]\nmu_position = 1\n") == "parameters.mu_position");
    CHECK(failing_field("[fiber]\nt_min = 2\nt_max = 1\n") == "fiber.t_max");
}

TEST_CASE("unknown keys and sections are rejected") {
    CHECK(failing_field("[solver]\nstartz = 3\n") == "solver.startz");
    CHECK(failing_field("[extra]\nx = 1\n") == "extra");
    CHECK(failing_field("[exponents\nq = 1\n") == "config");
}

TEST_CASE("config echo is ordered and complete") {
    const auto j = parse("").to_json();
    CHECK(j["family"] == "convex-concave");
    CHECK(j.begin().key() == "family");
    CHECK(j["exponents"]["gamma"].get<double>() == 3.0);
    CHECK(j["parameters"].contains("lambda_fraction"));
}

TEST_CASE("shipped configs parse") {
    const std::filesystem::path dir = NGRQ_SOURCE_DIR "/configs";
    int seen = 0;
    for (const auto& f : std::filesystem::directory_iterator(dir)) {
        if (f.path().extension() != ".ini") continue;
        CHECK_NOTHROW(load_config(f.path()));
        ++seen;
    }
    CHECK(seen == 3);
    CHECK(load_config(dir / "zero_mass.ini").zero_mass().nodes == 600);
    CHECK(load_config(dir / "four_term.ini").family == Family::four_term);
}
