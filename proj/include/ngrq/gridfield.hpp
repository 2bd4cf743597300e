#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ngrq {

enum class DomainKind { interval, rectangle, radial };

// Uniform grid on an interval (0, L), a rectangle (0, Lx) x (0, Ly), or a ball
// of radius R in R^N described by its radial coordinate. Zero Dirichlet data
// is imposed on the boundary (x = 0, L; the rectangle's edges; r = R). The
// radial origin is an ordinary unknown.
class Domain {
public:
    static Domain interval(double length, int nodes);
    static Domain rectangle(double length_x, double length_y, int nodes_x, int nodes_y);
    static Domain radial(double radius, int nodes, int dimension);

    DomainKind kind() const noexcept { return kind_; }
    // Spatial dimension N of the underlying problem.
    int dimension() const noexcept { return dimension_; }
    // Number of grid axes (2 for rectangles, 1 otherwise).
    int axes() const noexcept { return kind_ == DomainKind::rectangle ? 2 : 1; }
    double extent(int axis = 0) const { return extent_.at(axis); }
    int nodes(int axis = 0) const { return nodes_.at(axis); }
    double spacing(int axis = 0) const { return extent_.at(axis) / (nodes_.at(axis) - 1); }
    std::size_t interior_size() const noexcept;

    // Lebesgue measure of the domain (ball volume for radial kind).
    double measure() const;
    // Coordinates of the k-th unknown (x; x,y; or r).
    std::vector<double> coordinates(std::size_t k) const;
    // Quadrature mass attached to each unknown; sums to the domain measure up
    // to boundary cells.
    std::vector<double> node_weights() const;
    // Same grid with every length multiplied by sigma (radial kind only).
    Domain scaled(double sigma) const;
    // Same geometry with (nodes - 1) multiplied by factor on every axis.
    Domain refined(int factor) const;

    bool operator==(const Domain&) const = default;

private:
    DomainKind kind_ = DomainKind::interval;
    int dimension_ = 1;
    std::array<double, 2> extent_{1.0, 1.0};
    std::array<int, 2> nodes_{3, 1};
};

// Surface area of the unit sphere in R^N.
double unit_sphere_area(int dimension);

// Nodal values of a function on the unknowns of a Domain.
class DiscreteFunction {
public:
    // Zero function on the smallest interval grid.
    DiscreteFunction() : values_(1, 0.0) {}
    DiscreteFunction(Domain domain, std::vector<double> values);
    static DiscreteFunction zero(const Domain& domain);

    const Domain& domain() const noexcept { return domain_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    DiscreteFunction scaled(double factor) const;
    double sup_norm() const;
    // Same nodal values carried on a different grid with the same node layout.
    DiscreteFunction rehomed(const Domain& domain) const;

private:
    Domain domain_;
    std::vector<double> values_;
};

// Discrete integrals of a function: grad_p = int |grad u|^p and
// lebesgue[r] = int |u|^r (radial kind includes the r^{N-1} surface weight).
struct IntegralBundle {
    double grad_exponent = 2.0;
    double grad_p = 0.0;
    std::map<double, double> lebesgue;

    double at(double exponent) const;
};

// Cell-midpoint quadrature with forward-difference gradients.
IntegralBundle integrate(const DiscreteFunction& u, std::span<const double> exponents,
                         double grad_exponent);
double gradient_integral(const DiscreteFunction& u, double exponent);
double lebesgue_integral(const DiscreteFunction& u, double exponent);
// Derivatives of the two integrals with respect to the nodal values.
std::vector<double> gradient_integral_derivative(const DiscreteFunction& u, double exponent);
std::vector<double> lebesgue_integral_derivative(const DiscreteFunction& u, double exponent);

// x -> u(x / sigma) on a radial grid, by linear interpolation.
DiscreteFunction dilate(const DiscreteFunction& u, double sigma);

// Energy of the form  w_grad * int |grad u|^p + sum_k w_k * int |u|^{r_k}.
struct PowerTerm {
    double exponent = 2.0;
    double weight = 0.0;
};

struct EnergyForm {
    double grad_exponent = 2.0;
    double grad_weight = 0.5;
    std::vector<PowerTerm> terms;
};

double energy(const DiscreteFunction& u, const EnergyForm& form);
std::vector<double> energy_derivative(const DiscreteFunction& u, const EnergyForm& form);
// Discrete Euler-Lagrange residual: energy derivative divided by the node
// weights, i.e. the finite-difference strong form at each unknown.
std::vector<double> residual_field(const DiscreteFunction& u, const EnergyForm& form);
// Sup-norm of residual_field.
double residual(const DiscreteFunction& u, const EnergyForm& form);

enum class Family { convex_concave, four_term, zero_mass };

// Accepts "convex-concave", "four-term", "zero-mass"; InvalidInput otherwise.
Family parse_family(std::string_view name);
std::string_view family_name(Family family);

// -Delta_p u = lambda |u|^{q-2} u + |u|^{gamma-2} u
struct ConvexConcaveProblem {
    double q, p, gamma, lambda;
};
// -Delta_p u = |u|^{gamma-2} u + mu |u|^{alpha-2} u - lambda |u|^{q-2} u
struct FourTermProblem {
    double q, alpha, p, gamma, lambda, mu;
};
// -Delta u - mu |u|^{p-2} u + |u|^{q-2} u = 0
struct ZeroMassProblem {
    double p, q, mu;
};
using ProblemParams = std::variant<ConvexConcaveProblem, FourTermProblem, ZeroMassProblem>;

EnergyForm energy_form(const ProblemParams& params);
double residual(const DiscreteFunction& u, const ProblemParams& params);

// Symmetric positive definite discrete Laplacian (p = 2 stiffness of the
// quadrature above), used as a metric for preconditioned descent.
class StiffnessSolver {
public:
    explicit StiffnessSolver(const Domain& domain);
    ~StiffnessSolver();
    StiffnessSolver(StiffnessSolver&&) noexcept;
    StiffnessSolver& operator=(StiffnessSolver&&) noexcept;

    std::vector<double> solve(std::span<const double> rhs) const;
    // x^T K x
    double energy_norm_squared(std::span<const double> x) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ngrq
