#include "ngrq/gridfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "ngrq/error.hpp"

namespace ngrq {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// |x|^r and its derivative r |x|^{r-2} x, safe at x = 0 for r > 1.
double abs_pow(double x, double r) { return x == 0.0 ? 0.0 : std::pow(std::abs(x), r); }
double abs_pow_derivative(double x, double r) {
    if (x == 0.0) return 0.0;
    return r * std::copysign(std::pow(std::abs(x), r - 1.0), x);
}

// Line grids (interval and radial) share one cell loop; only the cell weights
// and the boundary layout differ.
struct LineGrid {
    int nodes;
    double h;
    bool left_dirichlet;  // false for the radial origin
    int dimension;        // N for radial grids
    bool radial;
    double omega;

    double cell_weight(int c) const {
        if (!radial) return h;
        // exact shell volume, so the cells tile the ball
        return omega * (ipow((c + 1) * h, dimension) - ipow(c * h, dimension)) / dimension;
    }
    int first_unknown() const { return left_dirichlet ? 1 : 0; }

    // Quadrature points of cell c for the Lebesgue integrals: visit(weight, xi)
    // with the value (1 - xi) u_c + xi u_{c+1}. Interval cells use the midpoint;
    // radial cells use 4-point Gauss-Legendre on the r^{N-1} weight, which
    // integrates the piecewise-linear interpolant exactly for integer exponents
    // in N = 3 (a midpoint value rewards collapse onto the origin).
    template <class Visit>
    void for_each_point(int c, Visit&& visit) const {
        if (!radial) {
            visit(h, 0.5);
            return;
        }
        static constexpr double xi[4] = {0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
                                         0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
        static constexpr double wt[4] = {0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461,
                                         0.5 * 0.6521451548625461, 0.5 * 0.3478548451374538};
        for (int j = 0; j < 4; ++j) visit(omega * ipow((c + xi[j]) * h, dimension - 1) * h * wt[j], xi[j]);
    }
};

LineGrid line_grid(const Domain& d) {
    const bool radial = d.kind() == DomainKind::radial;
    return LineGrid{d.nodes(), d.spacing(), !radial, d.dimension(), radial,
                    radial ? unit_sphere_area(d.dimension()) : 1.0};
}

std::vector<double> pad_line(const LineGrid& g, std::span<const double> values) {
    std::vector<double> full(g.nodes, 0.0);
    std::copy(values.begin(), values.end(), full.begin() + g.first_unknown());
    return full;
}

std::vector<double> extract_line(const LineGrid& g, const std::vector<double>& full) {
    const int first = g.first_unknown();
    return {full.begin() + first, full.begin() + (g.nodes - 1)};
}

struct RectGrid {
    int nx, ny;
    double hx, hy;
    int index(int i, int j) const { return j * nx + i; }
};

RectGrid rect_grid(const Domain& d) {
    return RectGrid{d.nodes(0), d.nodes(1), d.spacing(0), d.spacing(1)};
}

std::vector<double> pad_rect(const RectGrid& g, std::span<const double> values) {
    std::vector<double> full(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
    std::size_t k = 0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) full[g.index(i, j)] = values[k++];
    return full;
}

std::vector<double> extract_rect(const RectGrid& g, const std::vector<double>& full) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(g.nx - 2) * (g.ny - 2));
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) out.push_back(full[g.index(i, j)]);
    return out;
}

// Visits every quadrature point with (weight, value); used by the Lebesgue integrals.
template <class Visit>
void for_each_cell_mid(const DiscreteFunction& u, Visit&& visit) {
    const Domain& d = u.domain();
    if (d.kind() == DomainKind::rectangle) {
        const RectGrid g = rect_grid(d);
        const auto full = pad_rect(g, u.values());
        const double w = g.hx * g.hy;
        for (int j = 0; j < g.ny - 1; ++j)
            for (int i = 0; i < g.nx - 1; ++i) {
                const double m = 0.25 * (full[g.index(i, j)] + full[g.index(i + 1, j)] +
                                         full[g.index(i, j + 1)] + full[g.index(i + 1, j + 1)]);
                visit(w, m);
            }
        return;
    }
    const LineGrid g = line_grid(d);
    const auto full = pad_line(g, u.values());
    for (int c = 0; c < g.nodes - 1; ++c)
        g.for_each_point(c, [&](double w, double xi) { visit(w, (1.0 - xi) * full[c] + xi * full[c + 1]); });
}

}  // namespace

double unit_sphere_area(int dimension) {
    const double n = dimension;
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

Domain Domain::interval(double length, int nodes) {
    if (!(length > 0.0) || !std::isfinite(length)) throw InvalidInput("interval length must be positive");
    if (nodes < 3) throw InvalidInput("interval needs at least 3 nodes");
    Domain d;
    d.kind_ = DomainKind::interval;
    d.dimension_ = 1;
    d.extent_ = {length, 0.0};
    d.nodes_ = {nodes, 1};
    return d;
}

Domain Domain::rectangle(double length_x, double length_y, int nodes_x, int nodes_y) {
    if (!(length_x > 0.0) || !(length_y > 0.0) || !std::isfinite(length_x) || !std::isfinite(length_y))
        throw InvalidInput("rectangle sides must be positive");
    if (nodes_x < 3 || nodes_y < 3) throw InvalidInput("rectangle needs at least 3 nodes per axis");
    Domain d;
    d.kind_ = DomainKind::rectangle;
    d.dimension_ = 2;
    d.extent_ = {length_x, length_y};
    d.nodes_ = {nodes_x, nodes_y};
    return d;
}

Domain Domain::radial(double radius, int nodes, int dimension) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("radius must be positive");
    if (nodes < 3) throw InvalidInput("radial grid needs at least 3 nodes");
    if (dimension < 3) throw InvalidInput("radial domains require dimension N >= 3");
    Domain d;
    d.kind_ = DomainKind::radial;
    d.dimension_ = dimension;
    d.extent_ = {radius, 0.0};
    d.nodes_ = {nodes, 1};
    return d;
}

std::size_t Domain::interior_size() const noexcept {
    switch (kind_) {
    case DomainKind::interval: return static_cast<std::size_t>(nodes_[0] - 2);
    case DomainKind::rectangle: return static_cast<std::size_t>(nodes_[0] - 2) * (nodes_[1] - 2);
    case DomainKind::radial: return static_cast<std::size_t>(nodes_[0] - 1);
    }
    return 0;
}

double Domain::measure() const {
    switch (kind_) {
    case DomainKind::interval: return extent_[0];
    case DomainKind::rectangle: return extent_[0] * extent_[1];
    case DomainKind::radial: return unit_sphere_area(dimension_) * ipow(extent_[0], dimension_) / dimension_;
    }
    return 0.0;
}

std::vector<double> Domain::coordinates(std::size_t k) const {
    switch (kind_) {
    case DomainKind::interval: return {(static_cast<double>(k) + 1.0) * spacing()};
    case DomainKind::radial: return {static_cast<double>(k) * spacing()};
    case DomainKind::rectangle: {
        const auto row = static_cast<std::size_t>(nodes_[0] - 2);
        return {(static_cast<double>(k % row) + 1.0) * spacing(0),
                (static_cast<double>(k / row) + 1.0) * spacing(1)};
    }
    }
    return {};
}

std::vector<double> Domain::node_weights() const {
    if (kind_ == DomainKind::rectangle)
        return std::vector<double>(interior_size(), spacing(0) * spacing(1));
    const LineGrid g = line_grid(*this);
    std::vector<double> full(g.nodes, 0.0);
    for (int c = 0; c < g.nodes - 1; ++c) {
        const double w = 0.5 * g.cell_weight(c);
        full[c] += w;
        full[c + 1] += w;
    }
    return extract_line(g, full);
}

Domain Domain::scaled(double sigma) const {
    if (kind_ != DomainKind::radial) throw InvalidInput("only radial domains can be rescaled");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("scale factor must be positive");
    return radial(extent_[0] * sigma, nodes_[0], dimension_);
}

Domain Domain::refined(int factor) const {
    if (factor < 1) throw InvalidInput("refinement factor must be >= 1");
    Domain d = *this;
    d.nodes_[0] = (nodes_[0] - 1) * factor + 1;
    if (kind_ == DomainKind::rectangle) d.nodes_[1] = (nodes_[1] - 1) * factor + 1;
    return d;
}

DiscreteFunction::DiscreteFunction(Domain domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.interior_size())
        throw InvalidInput("value count " + std::to_string(values_.size()) + " does not match " +
                           std::to_string(domain_.interior_size()) + " interior nodes");
    for (double v : values_)
        if (!std::isfinite(v)) throw InvalidInput("non-finite nodal value");
}

DiscreteFunction DiscreteFunction::zero(const Domain& domain) {
    return DiscreteFunction(domain, std::vector<double>(domain.interior_size(), 0.0));
}

DiscreteFunction DiscreteFunction::scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return DiscreteFunction(domain_, std::move(v));
}

double DiscreteFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

DiscreteFunction DiscreteFunction::rehomed(const Domain& domain) const {
    return DiscreteFunction(domain, values_);
}

double IntegralBundle::at(double exponent) const {
    const auto it = lebesgue.find(exponent);
    if (it == lebesgue.end()) throw InvalidInput("exponent " + std::to_string(exponent) + " not integrated");
    return it->second;
}

double gradient_integral(const DiscreteFunction& u, double exponent) {
    if (!(exponent > 1.0)) throw InvalidInput("gradient exponent must exceed 1");
    const Domain& d = u.domain();
    double sum = 0.0;
    if (d.kind() == DomainKind::rectangle) {
        const RectGrid g = rect_grid(d);
        const auto full = pad_rect(g, u.values());
        const double w = g.hx * g.hy;
        for (int j = 0; j < g.ny - 1; ++j)
            for (int i = 0; i < g.nx - 1; ++i) {
                const double gx = (full[g.index(i + 1, j)] - full[g.index(i, j)]) / g.hx;
                const double gy = (full[g.index(i, j + 1)] - full[g.index(i, j)]) / g.hy;
                const double s = gx * gx + gy * gy;
                if (s > 0.0) sum += w * std::pow(s, 0.5 * exponent);
            }
        return sum;
    }
    const LineGrid g = line_grid(d);
    const auto full = pad_line(g, u.values());
    for (int c = 0; c < g.nodes - 1; ++c)
        sum += g.cell_weight(c) * abs_pow((full[c + 1] - full[c]) / g.h, exponent);
    return sum;
}

double lebesgue_integral(const DiscreteFunction& u, double exponent) {
    if (!(exponent > 1.0)) throw InvalidInput("Lebesgue exponent must exceed 1");
    double sum = 0.0;
    for_each_cell_mid(u, [&](double w, double m) { sum += w * abs_pow(m, exponent); });
    return sum;
}

IntegralBundle integrate(const DiscreteFunction& u, std::span<const double> exponents,
                         double grad_exponent) {
    IntegralBundle b;
    b.grad_exponent = grad_exponent;
    b.grad_p = gradient_integral(u, grad_exponent);
    for (double r : exponents) b.lebesgue[r] = lebesgue_integral(u, r);
    return b;
}

std::vector<double> gradient_integral_derivative(const DiscreteFunction& u, double exponent) {
    if (!(exponent > 1.0)) throw InvalidInput("gradient exponent must exceed 1");
    const Domain& d = u.domain();
    if (d.kind() == DomainKind::rectangle) {
        const RectGrid g = rect_grid(d);
        const auto full = pad_rect(g, u.values());
        std::vector<double> out(full.size(), 0.0);
        const double w = g.hx * g.hy;
        for (int j = 0; j < g.ny - 1; ++j)
            for (int i = 0; i < g.nx - 1; ++i) {
                const double gx = (full[g.index(i + 1, j)] - full[g.index(i, j)]) / g.hx;
                const double gy = (full[g.index(i, j + 1)] - full[g.index(i, j)]) / g.hy;
                const double s = gx * gx + gy * gy;
                if (s == 0.0) continue;
                const double coeff = w * exponent * std::pow(s, 0.5 * exponent - 1.0);
                out[g.index(i + 1, j)] += coeff * gx / g.hx;
                out[g.index(i, j + 1)] += coeff * gy / g.hy;
                out[g.index(i, j)] -= coeff * (gx / g.hx + gy / g.hy);
            }
        return extract_rect(g, out);
    }
    const LineGrid g = line_grid(d);
    const auto full = pad_line(g, u.values());
    std::vector<double> out(full.size(), 0.0);
    for (int c = 0; c < g.nodes - 1; ++c) {
        const double flux = g.cell_weight(c) * abs_pow_derivative((full[c + 1] - full[c]) / g.h, exponent) / g.h;
        out[c + 1] += flux;
        out[c] -= flux;
    }
    return extract_line(g, out);
}

std::vector<double> lebesgue_integral_derivative(const DiscreteFunction& u, double exponent) {
    if (!(exponent > 1.0)) throw InvalidInput("Lebesgue exponent must exceed 1");
    const Domain& d = u.domain();
    if (d.kind() == DomainKind::rectangle) {
        const RectGrid g = rect_grid(d);
        const auto full = pad_rect(g, u.values());
        std::vector<double> out(full.size(), 0.0);
        const double w = g.hx * g.hy;
        for (int j = 0; j < g.ny - 1; ++j)
            for (int i = 0; i < g.nx - 1; ++i) {
                const int c[4] = {g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)};
                const double m = 0.25 * (full[c[0]] + full[c[1]] + full[c[2]] + full[c[3]]);
                const double dm = 0.25 * w * abs_pow_derivative(m, exponent);
                for (int k : c) out[k] += dm;
            }
        return extract_rect(g, out);
    }
    const LineGrid g = line_grid(d);
    const auto full = pad_line(g, u.values());
    std::vector<double> out(full.size(), 0.0);
    for (int c = 0; c < g.nodes - 1; ++c)
        g.for_each_point(c, [&](double w, double xi) {
            const double dm = w * abs_pow_derivative((1.0 - xi) * full[c] + xi * full[c + 1], exponent);
            out[c] += (1.0 - xi) * dm;
            out[c + 1] += xi * dm;
        });
    return extract_line(g, out);
}

DiscreteFunction dilate(const DiscreteFunction& u, double sigma) {
    const Domain& d = u.domain();
    if (d.kind() != DomainKind::radial) throw InvalidInput("dilate requires a radial domain");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("dilation factor must be positive");
    const LineGrid g = line_grid(d);
    const auto full = pad_line(g, u.values());
    int last = -1;
    for (int i = 0; i < g.nodes; ++i)
        if (full[i] != 0.0) last = i;
    const double radius = d.extent();
    const double support = std::min(radius, (last + 1) * g.h);
    if (last >= 0 && sigma * support > radius * (1.0 + 1e-12))
        throw DomainOverflow("dilation by " + std::to_string(sigma) + " moves support radius " +
                             std::to_string(support) + " past truncation radius " + std::to_string(radius));
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double pos = static_cast<double>(k) / sigma;
        if (pos >= g.nodes - 1) continue;
        const int i = std::min(static_cast<int>(pos), g.nodes - 2);
        const double f = pos - i;
        out[k] = (1.0 - f) * full[i] + f * full[i + 1];
    }
    return DiscreteFunction(d, std::move(out));
}

double energy(const DiscreteFunction& u, const EnergyForm& form) {
    double e = 0.0;
    if (form.grad_weight != 0.0) e += form.grad_weight * gradient_integral(u, form.grad_exponent);
    for (const auto& t : form.terms)
        if (t.weight != 0.0) e += t.weight * lebesgue_integral(u, t.exponent);
    return e;
}

std::vector<double> energy_derivative(const DiscreteFunction& u, const EnergyForm& form) {
    std::vector<double> out(u.size(), 0.0);
    auto accumulate = [&](const std::vector<double>& part, double weight) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += weight * part[k];
    };
    if (form.grad_weight != 0.0)
        accumulate(gradient_integral_derivative(u, form.grad_exponent), form.grad_weight);
    for (const auto& t : form.terms)
        if (t.weight != 0.0) accumulate(lebesgue_integral_derivative(u, t.exponent), t.weight);
    return out;
}

std::vector<double> residual_field(const DiscreteFunction& u, const EnergyForm& form) {
    auto out = energy_derivative(u, form);
    const auto w = u.domain().node_weights();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] /= w[k];
    return out;
}

double residual(const DiscreteFunction& u, const EnergyForm& form) {
    double m = 0.0;
    for (double r : residual_field(u, form)) m = std::max(m, std::abs(r));
    return m;
}

Family parse_family(std::string_view name) {
    if (name == "convex-concave") return Family::convex_concave;
    if (name == "four-term") return Family::four_term;
    if (name == "zero-mass") return Family::zero_mass;
    throw InvalidInput("unknown problem family '" + std::string(name) + "'");
}

std::string_view family_name(Family family) {
    switch (family) {
    case Family::convex_concave: return "convex-concave";
    case Family::four_term: return "four-term";
    case Family::zero_mass: return "zero-mass";
    }
    return "unknown";
}

EnergyForm energy_form(const ProblemParams& params) {
    struct Visitor {
        EnergyForm operator()(const ConvexConcaveProblem& c) const {
            return {c.p, 1.0 / c.p, {{c.q, -c.lambda / c.q}, {c.gamma, -1.0 / c.gamma}}};
        }
        EnergyForm operator()(const FourTermProblem& f) const {
            return {f.p, 1.0 / f.p,
                    {{f.q, f.lambda / f.q}, {f.alpha, -f.mu / f.alpha}, {f.gamma, -1.0 / f.gamma}}};
        }
        EnergyForm operator()(const ZeroMassProblem& z) const {
            return {2.0, 0.5, {{z.p, -z.mu / z.p}, {z.q, 1.0 / z.q}}};
        }
    };
    return std::visit(Visitor{}, params);
}

double residual(const DiscreteFunction& u, const ProblemParams& params) {
    return residual(u, energy_form(params));
}

struct StiffnessSolver::Impl {
    Eigen::SparseMatrix<double> matrix;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
};

StiffnessSolver::StiffnessSolver(const Domain& domain) : impl_(std::make_unique<Impl>()) {
    const auto n = static_cast<Eigen::Index>(domain.interior_size());
    std::vector<Eigen::Triplet<double>> entries;
    // Each cell contributes w * (sum of squared forward differences) / 2.
    auto add_difference = [&](int a, int b, double coeff) {
        if (a >= 0) entries.emplace_back(a, a, coeff);
        if (b >= 0) entries.emplace_back(b, b, coeff);
        if (a >= 0 && b >= 0) {
            entries.emplace_back(a, b, -coeff);
            entries.emplace_back(b, a, -coeff);
        }
    };
    if (domain.kind() == DomainKind::rectangle) {
        const RectGrid g = rect_grid(domain);
        auto unknown = [&](int i, int j) {
            if (i <= 0 || j <= 0 || i >= g.nx - 1 || j >= g.ny - 1) return -1;
            return (j - 1) * (g.nx - 2) + (i - 1);
        };
        const double w = g.hx * g.hy;
        for (int j = 0; j < g.ny - 1; ++j)
            for (int i = 0; i < g.nx - 1; ++i) {
                add_difference(unknown(i, j), unknown(i + 1, j), w / (g.hx * g.hx));
                add_difference(unknown(i, j), unknown(i, j + 1), w / (g.hy * g.hy));
            }
    } else {
        const LineGrid g = line_grid(domain);
        auto unknown = [&](int i) {
            const int k = i - g.first_unknown();
            return (k < 0 || i >= g.nodes - 1) ? -1 : k;
        };
        for (int c = 0; c < g.nodes - 1; ++c)
            add_difference(unknown(c), unknown(c + 1), g.cell_weight(c) / (g.h * g.h));
    }
    impl_->matrix.resize(n, n);
    impl_->matrix.setFromTriplets(entries.begin(), entries.end());
    impl_->factor.compute(impl_->matrix);
    if (impl_->factor.info() != Eigen::Success) throw Error("stiffness factorization failed");
}

StiffnessSolver::~StiffnessSolver() = default;
StiffnessSolver::StiffnessSolver(StiffnessSolver&&) noexcept = default;
StiffnessSolver& StiffnessSolver::operator=(StiffnessSolver&&) noexcept = default;

std::vector<double> StiffnessSolver::solve(std::span<const double> rhs) const {
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::VectorXd x = impl_->factor.solve(b);
    return {x.data(), x.data() + x.size()};
}

double StiffnessSolver::energy_norm_squared(std::span<const double> x) const {
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    return v.dot(impl_->matrix * v);
}

}  // namespace ngrq
