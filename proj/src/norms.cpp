#include "kslab/norms.hpp"

#include "kslab/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

double integrate(const Field& f)
{
    // Periodic trapezoid = plain sum * cell volume. Interval fields store the
    // left boundary node (pinned to 0) and both true boundary values vanish,
    // so the trapezoid rule reduces to the same plain sum.
    double s = 0.0;
    for (double x : f.values()) s += x;
    return s * f.grid().cell_volume();
}

double lp_norm(const Field& f, double p)
{
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double s = 0.0;
    for (double x : f.values()) s += std::pow(std::abs(x), p);
    return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double l2_norm(const Field& f)
{
    double s = 0.0;
    for (double x : f.values()) s += x * x;
    return std::sqrt(s * f.grid().cell_volume());
}

double hminus1_norm(const Field& f)
{
    const Grid& g = f.grid();
    if (g.kind == Grid::Kind::Interval) {
        if (g.bc != BoundaryKind::Navier)
            throw std::invalid_argument("hminus1_norm: Dirichlet intervals unsupported");
        return hminus1_norm(odd_extension(f)) / std::sqrt(2.0);
    }
    // |v|_{-1}^2 = sum_{xi != 0} |vhat(xi)|^2 / |xi|^2 in the quadrature
    // normalisation that matches l2_norm by Parseval.
    auto coeff = to_spectral(f);
    const double nn = double(f.size());
    const double scale = g.volume() / (nn * nn);
    double s = 0.0;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        const double x2 = xi_squared(g, i);
        if (x2 == 0.0) continue;
        s += std::norm(coeff[i]) / x2;
    }
    return std::sqrt(s * scale);
}

double deriv_energy(const Field& f, int order)
{
    const Grid& g = f.grid();
    if (g.kind == Grid::Kind::Interval) {
        if (g.bc == BoundaryKind::Navier) return 0.5 * deriv_energy(odd_extension(f), order);
        Field d = derivative(f, 0, order);
        double s = 0.0;
        for (double x : d.values()) s += x * x;
        return s * g.cell_volume();
    }
    auto coeff = to_spectral(f);
    const double nn = double(f.size());
    const double scale = g.volume() / (nn * nn);
    double s = 0.0;
    for (std::size_t i = 0; i < coeff.size(); ++i)
        s += std::pow(xi_squared(g, i), double(order)) * std::norm(coeff[i]);
    return s * scale;
}

NormReport norms(const Field& f, std::span<const double> ps)
{
    NormReport r;
    r.l2 = l2_norm(f);
    r.linf = f.sup_norm();
    r.mean = integrate(f) / f.grid().volume();
    for (double p : ps) r.lp[p] = lp_norm(f, p);
    const bool navier_interval =
        f.grid().kind == Grid::Kind::Interval && f.grid().bc == BoundaryKind::Navier;
    const double mean_tol = 1e-9 * std::max(1.0, r.linf);
    if (navier_interval || (f.grid().kind == Grid::Kind::Periodic && std::abs(r.mean) <= mean_tol))
        r.hminus1 = hminus1_norm(f);
    return r;
}

InterpolationReport interpolation_check(const Field& v)
{
    const Grid& g = v.grid();
    if (g.kind == Grid::Kind::Periodic) {
        const double mean_tol = 1e-9 * std::max(1.0, v.sup_norm());
        if (std::abs(v.mean()) > mean_tol)
            throw std::invalid_argument("interpolation_check: periodic input must have zero mean");
    }
    InterpolationReport rep;
    const double grad2 = deriv_energy(v, 1);
    const double curv2 = deriv_energy(v, 2);
    double val2 = l2_norm(v);
    val2 *= val2;
    rep.lhs = grad2;
    rep.rhs = std::sqrt(val2) * std::sqrt(curv2);
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-10) + 1e-14;
    rep.sup_sq = v.sup_norm() * v.sup_norm();
    rep.grad_energy = grad2;
    rep.embedding_ratio = grad2 > 0.0 ? rep.sup_sq / grad2 : 0.0;
    return rep;
}

} // namespace kslab
