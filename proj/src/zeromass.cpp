#include "ngrq/zeromass.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ngrq/error.hpp"
#include "ngrq/exponents.hpp"

namespace ngrq {

namespace {

void require_positive(const ZeroMassIntegrals& I) {
    if (!(I.T > 0.0) || !(I.A > 0.0) || !(I.B > 0.0) || !std::isfinite(I.T) || !std::isfinite(I.A) || !std::isfinite(I.B))
        throw InvalidInput("zero-mass integrals T, A, B must be positive and finite");
}

void require_existence_order(const ZeroMassParams& z) {
    if (!(2.0 < z.q && z.q < z.p && z.p < z.critical()))
        throw PreconditionViolated("prescribed-energy reduction needs 2 < q < p < 2*; for p < q see nonexistence_certificate");
}

}  // namespace

double ZeroMassParams::critical() const { return sobolev_exponent(2.0, N); }

void ZeroMassParams::validate() const {
    if (N < 3) throw ValidationError("N", "dimension must be at least 3");
    const double crit = critical();
    if (!(p > 2.0 && p < crit)) throw ValidationError("p", "must lie in (2, 2*) = (2, " + std::to_string(crit) + ")");
    if (!(q > 2.0 && q < crit)) throw ValidationError("q", "must lie in (2, 2*) = (2, " + std::to_string(crit) + ")");
    if (p == q) throw ValidationError("q", "must differ from p");
    if (!(E > 0.0) || !std::isfinite(E)) throw ValidationError("E", "prescribed energy must be positive");
    if (!(R > 0.0) || !std::isfinite(R)) throw ValidationError("R", "truncation radius must be positive");
    if (nodes < 3) throw ValidationError("nodes", "radial grid needs at least 3 nodes");
}

ZeroMassIntegrals zero_mass_integrals(const DiscreteFunction& u, double p, double q) {
    return {gradient_integral(u, 2.0), lebesgue_integral(u, p), lebesgue_integral(u, q)};
}

ZeroMassIntegrals transform(const ZeroMassIntegrals& I, double t, double sigma, const ZeroMassParams& z) {
    const double sN = std::pow(sigma, z.N);
    return {std::pow(sigma, z.N - 2) * t * t * I.T, sN * std::pow(t, z.p) * I.A, sN * std::pow(t, z.q) * I.B};
}

double sigma_E(double T, double E, int N) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("sigma_E needs T > 0");
    if (!(E > 0.0)) throw InvalidInput("sigma_E needs E > 0");
    if (N < 3) throw InvalidInput("sigma_E needs N >= 3");
    return std::pow(N * E / T, 1.0 / (N - 2));
}

double R_E(const ZeroMassIntegrals& I, const ZeroMassParams& z) {
    require_positive(I);
    return (0.5 * I.T + I.B / z.q - z.E) / (I.A / z.p);
}

double R_E_dilated(const ZeroMassIntegrals& I, double sigma, const ZeroMassParams& z) {
    require_positive(I);
    return (std::pow(sigma, -2.0) * 0.5 * I.T + I.B / z.q - std::pow(sigma, -z.N) * z.E) / (I.A / z.p);
}

double c_N_E(int N, double E) {
    if (N < 3 || !(E > 0.0)) throw InvalidInput("c_N^E needs N >= 3 and E > 0");
    const double n = N;
    return (n - 2.0) / (std::pow(n, n / (n - 2.0)) * std::pow(E, 2.0 / (n - 2.0)));
}

double c_pqNE(const ZeroMassParams& z) {
    return c_N_E(z.N, z.E) * z.q * (z.critical() - z.p) / (2.0 * (z.p - z.q));
}

double c_pqN(double p, double q, int N) {
    const double n = N, s = sobolev_exponent(2.0, N);
    const double base = (n - 2.0) / std::pow(n, n / (n - 2.0)) * q * (s - p) / (2.0 * (p - q));
    return std::pow(base, (p - q) / (s - q)) * p * (s - q) / (q * (s - p));
}

double C_pqNE(const ZeroMassParams& z) {
    const double s = z.critical();
    return c_pqN(z.p, z.q, z.N) / std::pow(z.E, 2.0 * (z.p - z.q) / ((s - z.q) * (z.N - 2)));
}

double ME_quotient(const ZeroMassIntegrals& I, const ZeroMassParams& z) { return ME_fiber(I, 1.0, z); }

double ME_fiber(const ZeroMassIntegrals& I, double t, const ZeroMassParams& z) {
    require_positive(I);
    if (!(t > 0.0)) throw InvalidInput("fiber parameter must be positive");
    const double s = z.critical(), n = z.N;
    return (0.5 * c_N_E(z.N, z.E) * std::pow(t, s - z.p) * std::pow(I.T, n / (n - 2.0)) + std::pow(t, z.q - z.p) * I.B / z.q) /
           (I.A / z.p);
}

double ME_fiber_derivative(const ZeroMassIntegrals& I, double t, const ZeroMassParams& z) {
    require_positive(I);
    if (!(t > 0.0)) throw InvalidInput("fiber parameter must be positive");
    const double s = z.critical(), n = z.N;
    return (0.5 * c_N_E(z.N, z.E) * (s - z.p) * std::pow(t, s - z.p - 1.0) * std::pow(I.T, n / (n - 2.0)) +
            (z.q - z.p) / z.q * std::pow(t, z.q - z.p - 1.0) * I.B) /
           (I.A / z.p);
}

QuotientValue mu_E(const ZeroMassIntegrals& I, const ZeroMassParams& z) {
    require_existence_order(z);
    require_positive(I);
    const double n = z.N;
    const double t = std::pow(I.B / (c_pqNE(z) * std::pow(I.T, n / (n - 2.0))), 1.0 / (z.critical() - z.q));
    return {ME_fiber(I, t, z), t, QuotientKind::energy_level};
}

double mu_E_closed(const ZeroMassIntegrals& I, const ZeroMassParams& z) {
    require_existence_order(z);
    require_positive(I);
    const double s = z.critical();
    return C_pqNE(z) * std::pow(I.B, (s - z.p) / (s - z.q)) * std::pow(I.T, s * (z.p - z.q) / (2.0 * (s - z.q))) / I.A;
}

double mu_beta(const ZeroMassParams& z) {
    const double s = z.critical();
    return 2.0 * z.q * (s - z.p) / (s * (z.p - z.q));
}

double mu_rho(const ZeroMassParams& z) {
    const double s = z.critical();
    return 2.0 * z.p * (s - z.q) / (s * (z.p - z.q));
}

double mu_functional(const ZeroMassIntegrals& I, const ZeroMassParams& z) {
    require_existence_order(z);
    require_positive(I);
    return std::pow(I.B, mu_beta(z) / z.q) * I.T / std::pow(I.A, mu_rho(z) / z.p);
}

double mu_E_from_mu(double mu, const ZeroMassParams& z) { return C_pqNE(z) * std::pow(mu, z.p / mu_rho(z)); }

double mu_from_mu_E(double mu_E, const ZeroMassParams& z) { return std::pow(mu_E / C_pqNE(z), mu_rho(z) / z.p); }

double mu_from_mu_E_printed(double mu_E, const ZeroMassParams& z) {
    const double s = z.critical();
    return std::pow(z.E, 2.0 * (z.p - z.q) / ((s - z.q) * (z.N - 2))) / std::pow(c_pqN(z.p, z.q, z.N), mu_rho(z) / z.p) * mu_E;
}

Quotient mu_quotient(const ZeroMassParams& z) {
    require_existence_order(z);
    const double bq = mu_beta(z) / z.q, rp = mu_rho(z) / z.p;
    return integral_quotient(2.0, {z.p, z.q}, [bq, rp](const std::vector<double>& I) {
        const double T = I[0], A = I[1], B = I[2];
        if (!(T > 0.0 && A > 0.0 && B > 0.0)) return IntegralReduction{0.0, {}, false};
        const double v = std::pow(B, bq) * T / std::pow(A, rp);
        return IntegralReduction{v, {v / T, -rp * v / A, bq * v / B}, true};
    });
}

NonexistenceCertificate nonexistence_certificate(const ZeroMassParams& z, std::uint64_t seed, int samples, int grid_points) {
    z.validate();
    if (!(z.p < z.q)) throw PreconditionViolated("nonexistence certificate applies to p < q");
    if (samples < 1 || grid_points < 2) throw InvalidInput("certificate needs samples >= 1 and grid_points >= 2");
    NonexistenceCertificate c;
    c.sobolev_gap = z.critical() - z.p;
    c.order_gap = z.q - z.p;
    c.samples = samples;
    c.grid_points = grid_points;
    c.min_scaled_derivative = std::numeric_limits<double>::infinity();
    const Domain d = Domain::radial(z.R, std::min(z.nodes, 400), z.N);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        // random positive radial profile: gaussian plus a tent
        const double a = 0.2 + unit_uniform(rng()), w = 0.05 + 0.5 * unit_uniform(rng());
        const double b = unit_uniform(rng()), c0 = 0.1 + 0.8 * unit_uniform(rng());
        std::vector<double> v(d.interior_size());
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double r = d.coordinates(k)[0] / z.R;
            v[k] = a * std::exp(-(r / w) * (r / w)) + b * std::max(0.0, 1.0 - r / c0);
        }
        const auto I = zero_mass_integrals(DiscreteFunction(d, std::move(v)), z.p, z.q);
        double prev = 0.0;
        for (int i = 0; i < grid_points; ++i) {
            const double t = c.t_min * std::pow(c.t_max / c.t_min, static_cast<double>(i) / (grid_points - 1));
            const double scaled = t * ME_fiber_derivative(I, t, z) / ME_fiber(I, t, z);
            c.min_scaled_derivative = std::min(c.min_scaled_derivative, scaled);
            if (i > 0 && (scaled > 0.0) != (prev > 0.0)) ++c.sign_changes;
            prev = scaled;
        }
    }
    c.issued = c.sobolev_gap > 0.0 && c.order_gap > 0.0 && c.sign_changes == 0 && c.min_scaled_derivative > 0.0;
    return c;
}

double outer_mass_fraction(const DiscreteFunction& u, double q, double band) {
    const Domain& d = u.domain();
    const auto w = d.node_weights();
    const double cut = (1.0 - band) * d.extent(0);
    double total = 0.0, outer = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double m = w[k] * std::pow(std::abs(u[k]), q);
        total += m;
        if (d.coordinates(k)[0] > cut) outer += m;
    }
    return total > 0.0 ? outer / total : 0.0;
}

PrescribedEnergySolution solve_prescribed_energy(const ZeroMassParams& z, const DescentOptions& opt) {
    z.validate();
    require_existence_order(z);
    const Domain d = Domain::radial(z.R, z.nodes, z.N);
    DescentOptions dopt = opt;
    dopt.normalization_exponent = z.q;
    if (dopt.memory == 0) dopt.memory = 8;
    PrescribedEnergySolution s;
    s.estimate = minimize_quotient(mu_quotient(z), d, dopt);
    s.estimate.name = "mu_bar";
    s.mu_bar = s.estimate.value;
    s.converged = s.estimate.converged;
    s.E = z.E;

    // amplitude first (t^E is dilation invariant), then stretch the grid so sigma^E = 1
    const DiscreteFunction& u = s.estimate.minimizer;
    s.t = mu_E(zero_mass_integrals(u, z.p, z.q), z).t;
    const DiscreteFunction w = u.scaled(s.t);
    s.sigma = sigma_E(gradient_integral(w, 2.0), z.E, z.N);
    s.u = w.rehomed(d.scaled(s.sigma));

    const auto I = zero_mass_integrals(s.u, z.p, z.q);
    s.sigma_check = sigma_E(I.T, z.E, z.N);
    s.t_check = mu_E(I, z).t;
    s.mu_hat = mu_E_from_mu(s.mu_bar, z);
    s.energy_achieved = 0.5 * I.T - s.mu_hat * I.A / z.p + I.B / z.q;
    s.residual = residual(s.u, ZeroMassProblem{z.p, z.q, s.mu_hat});
    s.outer_mass_fraction = outer_mass_fraction(s.u, z.q);
    s.truncation_warning = s.outer_mass_fraction >= 0.01;
    return s;
}

}  // namespace ngrq
