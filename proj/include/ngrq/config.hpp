#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ngrq/exponents.hpp"
#include "ngrq/extremal.hpp"
#include "ngrq/fibering.hpp"
#include "ngrq/gridfield.hpp"
#include "ngrq/io.hpp"
#include "ngrq/nehari.hpp"
#include "ngrq/zeromass.hpp"

namespace ngrq {

struct DomainSpec {
    DomainKind kind = DomainKind::interval;
    double length_x = 1.0;  // interval length, rectangle side, or ball radius
    double length_y = 1.0;
    int nodes_x = 101;
    int nodes_y = 101;
    int dimension = 3;  // radial only

    // (nodes - 1) multiplied by refine on every axis.
    Domain build(int refine = 1) const;
};

struct SolverSpec {
    int starts = 6;
    std::uint64_t seed = 0;
    int max_iterations = 4000;
    double tol_grad = 1e-7;
    double tol_res = 1e-6;
    double tol_fiber = 1e-9;
    int threads = 0;
    int fresh_starts = 2;
    int max_bisections = 20;
};

// One experiment. See README for the INI schema; every key is optional and
// defaults to the worked example of the chosen family.
struct ExperimentConfig {
    Family family = Family::convex_concave;
    Exponents3 e3{1.5, 2.0, 3.0};
    Exponents4 e4{1.2, 1.5, 2.0, 3.0};
    DomainSpec domain;
    SolverSpec solver;
    FiberScanOptions fiber;
    int profile_points = 400;

    // fibering coefficients (fiber, quotient): a |grad u|^p, b the lambda term,
    // b_alpha the mu term, c the gamma term
    double a = 1.0, b = 1.0, b_alpha = 1.0, c = 1.0;

    // absolute values win over fractions of the estimated thresholds
    std::optional<double> lambda;
    double lambda_fraction = 0.5;
    std::optional<double> mu;
    double mu_position = 0.5;  // position inside (mu^{e,-}, mu^{n,-})
    std::vector<double> lambda_grid;
    int lambda_grid_count = 20;
    double lambda_grid_max_fraction = 1.2;

    double energy = 1.0;  // zero-mass prescribed energy E

    std::string output_dir = "out";

    // Field-level ValidationError.
    void validate() const;

    DescentOptions descent() const;
    NehariOptions nehari() const;
    ContinuationOptions continuation() const;
    ZeroMassParams zero_mass(int refine = 1) const;
    // Echo of the effective configuration.
    Json to_json() const;
};

ExperimentConfig default_config(Family family);
// INI text; unknown sections or keys are ValidationErrors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ngrq
