#include "ngrq/exponents.hpp"

#include <cmath>
#include <limits>

#include "ngrq/error.hpp"

namespace ngrq {

namespace {

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) throw InvalidInput(std::string("exponent ") + name + " is not finite");
}

}  // namespace

void Exponents3::validate() const {
    require_finite(q, "q");
    require_finite(p, "p");
    require_finite(gamma, "gamma");
    if (!(1.0 < q && q < p && p < gamma))
        throw InvalidInput("exponents must satisfy 1 < q < p < gamma");
}

void Exponents4::validate() const {
    require_finite(q, "q");
    require_finite(alpha, "alpha");
    require_finite(p, "p");
    require_finite(gamma, "gamma");
    if (!(1.0 < q && q < alpha && alpha < p && p < gamma))
        throw InvalidInput("exponents must satisfy 1 < q < alpha < p < gamma");
}

double sobolev_exponent(double p, int dimension) {
    if (p >= dimension) return std::numeric_limits<double>::infinity();
    return p * dimension / (dimension - p);
}

}  // namespace ngrq
