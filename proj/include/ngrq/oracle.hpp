#pragma once

// Independent numerical oracles: dense scans and finite differences. Used by
// the tests and the acceptance checks to cross-check closed forms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace ngrq::oracle {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return t;
}

inline double central_difference(const std::function<double(double)>& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Argmax over a dense log grid, refined by bisecting the sign of a central
// difference quotient.
inline double argmax(const std::function<double(double)>& f, double lo, double hi, int n = 10000) {
    const auto t = log_grid(lo, hi, n);
    int best = 0;
    for (int i = 1; i < n; ++i)
        if (f(t[i]) > f(t[best])) best = i;
    double a = t[best > 0 ? best - 1 : 0], b = t[best + 1 < n ? best + 1 : n - 1];
    const auto slope = [&](double x) { return central_difference(f, x, 1e-5 * x); };
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double m = 0.5 * (a + b);
        (slope(m) > 0.0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}

inline double argmin(const std::function<double(double)>& f, double lo, double hi, int n = 10000) {
    return argmax([&](double x) { return -f(x); }, lo, hi, n);
}

inline double max_value(const std::function<double(double)>& f, double lo, double hi, int n = 10000) {
    return f(argmax(f, lo, hi, n));
}

// Number of strict sign changes of f along a dense log grid.
inline int sign_changes(const std::function<double(double)>& f, double lo, double hi, int n = 10000) {
    const auto t = log_grid(lo, hi, n);
    int count = 0;
    double prev = f(t[0]);
    for (int i = 1; i < n; ++i) {
        const double cur = f(t[i]);
        if (cur != 0.0 && prev != 0.0 && (cur > 0.0) != (prev > 0.0)) ++count;
        if (cur != 0.0) prev = cur;
    }
    return count;
}

inline double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

}  // namespace ngrq::oracle
