#pragma once

#include <utility>
#include <vector>

#include "ngrq/exponents.hpp"
#include "ngrq/gridfield.hpp"

namespace ngrq {

// Integrals that reduce t -> Phi(t u) to a scalar map:
// a = int |grad u|^p, b = int |u|^q, c = int |u|^gamma.
struct FiberCoefficients3 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    Exponents3 exps;

    void validate() const;
    // Coefficients of t u.
    FiberCoefficients3 scaled(double t) const;
};

// Four-term variant with b_alpha = int |u|^alpha.
struct FiberCoefficients4 {
    double a = 0.0;
    double b_q = 0.0;
    double b_alpha = 0.0;
    double c = 0.0;
    Exponents4 exps;

    void validate() const;
    FiberCoefficients4 scaled(double t) const;
};

FiberCoefficients3 fiber_coefficients(const DiscreteFunction& u, const Exponents3& exps);
FiberCoefficients4 fiber_coefficients(const DiscreteFunction& u, const Exponents4& exps);

struct FiberValue {
    double phi = 0.0;
    double dphi = 0.0;
    double ddphi = 0.0;
};

// a t^p/p - lambda b t^q/q - c t^gamma/gamma
FiberValue phi_fiber(const FiberCoefficients3& k, double lambda, double t);
// a t^p/p + lambda b_q t^q/q - mu b_alpha t^alpha/alpha - c t^gamma/gamma
FiberValue phi_fiber(const FiberCoefficients4& k, double lambda, double mu, double t);

// Sum of the magnitudes of the terms of Phi'' at t; reference size for the
// degenerate band.
double curvature_scale(const FiberCoefficients3& k, double lambda, double t);
double curvature_scale(const FiberCoefficients4& k, double lambda, double mu, double t);

enum class Curvature { negative, zero, positive };

struct CriticalPoint {
    double t = 0.0;
    Curvature curvature = Curvature::zero;
    double ddphi = 0.0;
};

struct CriticalPointSet {
    std::vector<CriticalPoint> points;  // increasing t
    std::vector<std::pair<double, double>> brackets;
};

struct FiberScanOptions {
    double t_min = 1e-4;
    double t_max = 1e3;
    int brackets = 512;
    double tol_root = 1e-10;        // |Phi'| / (a t^{p-1})
    double degenerate_rel = 1e-8;   // |Phi''| / curvature_scale
    double tangent_rel = 1e-9;      // level within this of a local extremum counts as tangency

    void validate() const;
};

// Positive critical points of t -> Phi(t u): none, one degenerate, or t+ < t-.
CriticalPointSet critical_points_3term(const FiberCoefficients3& k, double lambda,
                                       const FiberScanOptions& opt = {});
// Up to three critical points s0 < s1 < s2 inside [t_min, t_max].
CriticalPointSet critical_points_4term(const FiberCoefficients4& k, double lambda, double mu,
                                       const FiberScanOptions& opt = {});

const char* curvature_name(Curvature c);

}  // namespace ngrq
