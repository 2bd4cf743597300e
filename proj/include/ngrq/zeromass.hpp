#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ngrq/extremal.hpp"
#include "ngrq/gridfield.hpp"
#include "ngrq/quotients.hpp"

namespace ngrq {

// -Delta u - mu |u|^{p-2} u + |u|^{q-2} u = 0 in R^N, truncated to the ball of
// radius R with zero Dirichlet data. E is the prescribed energy.
struct ZeroMassParams {
    int N = 3;
    double p = 4.0;
    double q = 3.0;
    double E = 1.0;
    double R = 30.0;
    int nodes = 600;

    // 2* = 2N/(N-2)
    double critical() const;
    // ValidationError naming the offending field. Does not require q < p.
    void validate() const;
};

// T = int |grad u|^2, A = int |u|^p, B = int |u|^q.
struct ZeroMassIntegrals {
    double T = 0.0;
    double A = 0.0;
    double B = 0.0;
};

ZeroMassIntegrals zero_mass_integrals(const DiscreteFunction& u, double p, double q);
// Integrals of t u_sigma from those of u: (sigma^{N-2} t^2 T, sigma^N t^p A, sigma^N t^q B).
ZeroMassIntegrals transform(const ZeroMassIntegrals& I, double t, double sigma, const ZeroMassParams& z);

double sigma_E(double T, double E, int N);
// R^E(u) = (T/2 + B/q - E) / (A/p)
double R_E(const ZeroMassIntegrals& I, const ZeroMassParams& z);
// R^E(u_sigma) from the integrals of u.
double R_E_dilated(const ZeroMassIntegrals& I, double sigma, const ZeroMassParams& z);

double c_N_E(int N, double E);
double c_pqNE(const ZeroMassParams& z);
// Energy-free constant c(p,q,N).
double c_pqN(double p, double q, int N);
// C_{p,q,N,E} = c(p,q,N) / E^{2(p-q)/((2*-q)(N-2))}
double C_pqNE(const ZeroMassParams& z);

double ME_quotient(const ZeroMassIntegrals& I, const ZeroMassParams& z);
// t -> M^E(t u) and its t-derivative.
double ME_fiber(const ZeroMassIntegrals& I, double t, const ZeroMassParams& z);
double ME_fiber_derivative(const ZeroMassIntegrals& I, double t, const ZeroMassParams& z);

// Minimum of t -> M^E(t u) and its realizer t^E; requires 2 < q < p < 2*.
QuotientValue mu_E(const ZeroMassIntegrals& I, const ZeroMassParams& z);
// The same value from the product formula C B^{..} T^{..} / A.
double mu_E_closed(const ZeroMassIntegrals& I, const ZeroMassParams& z);

// beta = 2q(2*-p)/(2*(p-q)), rho = 2p(2*-q)/(2*(p-q))
double mu_beta(const ZeroMassParams& z);
double mu_rho(const ZeroMassParams& z);
// mu(u) = |u|_q^beta |grad u|_2^2 / |u|_p^rho
double mu_functional(const ZeroMassIntegrals& I, const ZeroMassParams& z);
// mu^E = C_{p,q,N,E} mu^{p/rho} and its inverse.
double mu_E_from_mu(double mu, const ZeroMassParams& z);
double mu_from_mu_E(double mu_E, const ZeroMassParams& z);
// The relation as printed, mu = E^{2(p-q)/((2*-q)(N-2))} / c^{rho/p} * mu^E; kept for reporting.
double mu_from_mu_E_printed(double mu_E, const ZeroMassParams& z);

// mu(u) as a descent quotient (0-homogeneous in amplitude and dilation).
Quotient mu_quotient(const ZeroMassParams& z);

struct NonexistenceCertificate {
    bool issued = false;
    double sobolev_gap = 0.0;  // 2* - p
    double order_gap = 0.0;    // q - p
    int samples = 0;
    int grid_points = 0;
    double t_min = 1e-4;
    double t_max = 1e3;
    int sign_changes = 0;
    double min_scaled_derivative = 0.0;  // min over samples and grid of t dM/dt / M
};

// For p < q: d/dt M^E(t u) > 0 on a log grid for `samples` random radial u.
NonexistenceCertificate nonexistence_certificate(const ZeroMassParams& z, std::uint64_t seed = 0, int samples = 20,
                                                 int grid_points = 10000);

struct PrescribedEnergySolution {
    DiscreteFunction u;        // on the rescaled radial grid
    double mu_bar = 0.0;       // min of mu(u) on the grid
    double mu_hat = 0.0;       // C_{p,q,N,E} mu_bar^{p/rho}
    double E = 0.0;
    double energy_achieved = 0.0;
    double sigma_check = 0.0;  // sigma^E(u), should be 1
    double t_check = 0.0;      // t^E(u), should be 1
    double residual = 0.0;
    double sigma = 0.0;        // dilation applied to the grid minimizer
    double t = 0.0;            // amplitude applied after dilation
    double outer_mass_fraction = 0.0;  // share of int |u|^q in the outer 10% of the radius
    bool truncation_warning = false;
    bool converged = false;
    ExtremalEstimate estimate;
};

// Refuses p >= q with PreconditionViolated (p < q is covered by nonexistence_certificate).
PrescribedEnergySolution solve_prescribed_energy(const ZeroMassParams& z, const DescentOptions& opt = {});

// Share of int |u|^q carried by r > (1 - band) R.
double outer_mass_fraction(const DiscreteFunction& u, double q, double band = 0.1);

}  // namespace ngrq
