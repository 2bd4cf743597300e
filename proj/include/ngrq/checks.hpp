#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ngrq/gridfield.hpp"
#include "ngrq/io.hpp"

namespace ngrq {

// Acceptance suite: eleven numbered criteria, each made of named sub-checks
// tagged by problem family.
struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CriterionReport {
    int id = 0;
    std::string title;
    double limit_seconds = 0.0;
    double seconds = 0.0;
    std::vector<CheckLine> lines;  // the last line is the runtime limit
    bool pass() const;
    // Pass/fail and sub-checks; the wall time is left out so reports are reproducible.
    Json to_json() const;
};

struct CheckOptions {
    std::optional<Family> family;  // restrict to the sub-checks of one family
    std::uint64_t seed = 0;        // offsets every random sample
    int refine = 1;                // multiplies (nodes - 1) of the PDE grids
};

constexpr int criterion_count = 11;
const char* criterion_title(int id);
double criterion_limit_seconds(int id);
bool criterion_applies(int id, Family family);
// InvalidInput for ids outside 1..criterion_count.
CriterionReport run_criterion(int id, const CheckOptions& opt = {});

}  // namespace ngrq
