#include "ngrq/roots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ngrq/error.hpp"

namespace ngrq {

std::vector<double> geometric_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 1) throw InvalidInput("geometric grid needs 0 < lo < hi and n >= 1");
    std::vector<double> t(n + 1);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i <= n; ++i) t[i] = std::exp(llo + (lhi - llo) * i / n);
    t.front() = lo;
    t.back() = hi;
    return t;
}

double bisect_log(const std::function<double(double)>& g, double lo, double hi) {
    double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0.0) == (ghi > 0.0)) throw NoRoots("bracket does not change sign");
    for (int it = 0; it < 400; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    // pick the endpoint with the smaller |g|
    return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

namespace {

double grow(const std::function<double(double)>& g, double anchor, bool upward, double decades) {
    const double g0 = g(anchor);
    if (g0 == 0.0) return anchor;
    const double factor = upward ? 2.0 : 0.5;
    const int steps = static_cast<int>(std::ceil(decades * std::log2(10.0)));
    double prev = anchor;
    for (int i = 0; i < steps; ++i) {
        const double next = prev * factor;
        const double gn = g(next);
        if (gn == 0.0) return next;
        if ((gn > 0.0) != (g0 > 0.0)) return upward ? bisect_log(g, prev, next) : bisect_log(g, next, prev);
        prev = next;
    }
    throw NoRoots("no sign change within " + std::to_string(decades) + " decades");
}

}  // namespace

double root_below(const std::function<double(double)>& g, double anchor, double decades) {
    return grow(g, anchor, false, decades);
}

double root_above(const std::function<double(double)>& g, double anchor, double decades) {
    return grow(g, anchor, true, decades);
}

ScanResult scan_roots(const std::function<double(double)>& g, const std::vector<double>& grid,
                      const std::vector<double>& tangent_points, const std::vector<double>& tangent_tol) {
    struct Node {
        double t;
        double value;
        bool tangent;
        double tol = 0.0;
    };
    std::vector<Node> nodes;
    nodes.reserve(grid.size() + tangent_points.size());
    // breakpoints first so that stable_sort keeps them ahead of equal grid nodes
    for (std::size_t i = 0; i < tangent_points.size(); ++i) {
        const double t = tangent_points[i];
        if (t < grid.front() || t > grid.back()) continue;
        const double v = g(t);
        nodes.push_back({t, v, std::abs(v) <= tangent_tol[i], tangent_tol[i]});
    }
    for (double t : grid) nodes.push_back({t, g(t), false});
    std::stable_sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) { return x.t < y.t; });
    // Grid nodes next to a tangency whose level is inside its band are rounding
    // noise of the same double root; drop them so they cannot open a bracket.
    std::vector<bool> absorbed(nodes.size(), false);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].tangent) continue;
        for (std::size_t j = i; j-- > 0 && !nodes[j].tangent && std::abs(nodes[j].value) <= nodes[i].tol;) absorbed[j] = true;
        for (std::size_t j = i + 1; j < nodes.size() && !nodes[j].tangent && std::abs(nodes[j].value) <= nodes[i].tol; ++j)
            absorbed[j] = true;
    }
    {
        std::vector<Node> kept;
        kept.reserve(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (!absorbed[i]) kept.push_back(nodes[i]);
        nodes = std::move(kept);
    }

    ScanResult out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& l = nodes[i];
        if (i > 0 && l.t == nodes[i - 1].t) continue;
        if (l.tangent || l.value == 0.0) {
            out.roots.emplace_back(l.t, l.tangent);
            continue;
        }
        if (i + 1 == nodes.size()) break;
        const Node& r = nodes[i + 1];
        if (r.tangent || r.value == 0.0 || (l.value > 0.0) == (r.value > 0.0)) continue;
        out.brackets.emplace_back(l.t, r.t);
        out.roots.emplace_back(bisect_log(g, l.t, r.t), false);
    }
    return out;
}

}  // namespace ngrq
