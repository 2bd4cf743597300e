#pragma once

#include <string>

namespace ngrq {

// Exponents of the convex-concave problem, 1 < q < p < gamma.
struct Exponents3 {
    double q = 0.0;
    double p = 0.0;
    double gamma = 0.0;

    // Throws InvalidInput when the strict ordering fails.
    void validate() const;
};

// Exponents of the four-term problem, 1 < q < alpha < p < gamma.
struct Exponents4 {
    double q = 0.0;
    double alpha = 0.0;
    double p = 0.0;
    double gamma = 0.0;

    void validate() const;
};

// Critical Sobolev exponent p* = pN/(N-p) (infinite when p >= N).
double sobolev_exponent(double p, int dimension);

}  // namespace ngrq
