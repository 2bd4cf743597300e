#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace ngrq {

// n + 1 log-spaced points spanning [lo, hi], endpoints exact.
std::vector<double> geometric_grid(double lo, double hi, int n);

// Bisection in log t on a bracket with g(lo), g(hi) of opposite sign (or one
// of them zero). Stops when the bracket is at machine resolution.
double bisect_log(const std::function<double(double)>& g, double lo, double hi);

// Root of g on (0, anchor] or [anchor, inf) for g changing sign once on that
// side. The bracket is grown geometrically away from anchor; throws NoRoots
// when no sign change appears within `decades` powers of ten.
double root_below(const std::function<double(double)>& g, double anchor, double decades = 40.0);
double root_above(const std::function<double(double)>& g, double anchor, double decades = 40.0);

// Sign-change roots of g on a sorted grid. Nodes flagged in `tangent` whose
// |g| is at most tangent_tol[i] are returned as tangency roots; intervals
// touching them are not scanned. Returns (t, is_tangent) and the brackets used.
struct ScanResult {
    std::vector<std::pair<double, bool>> roots;
    std::vector<std::pair<double, double>> brackets;
};
ScanResult scan_roots(const std::function<double(double)>& g, const std::vector<double>& grid,
                      const std::vector<double>& tangent_points, const std::vector<double>& tangent_tol);

}  // namespace ngrq
