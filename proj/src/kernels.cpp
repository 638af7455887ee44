#include "kslab/kernels.hpp"

#include "kslab/norms.hpp"
#include "kslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kslab {

namespace {

Grid default_kernel_grid(int m, int dim)
{
    const double R = 40.0 * double(1 << std::max(0, m - 2));
    const int pts = dim == 1 ? 2048 : 512;
    if (dim < 1 || dim > 2) throw std::invalid_argument("fundamental_solution: dim must be 1 or 2");
    std::vector<int> p(std::size_t(dim), pts);
    std::vector<double> e(std::size_t(dim), 2.0 * R);
    return Grid::periodic_centered(p, e);
}

double boundary_sup(const Field& f)
{
    // max |F| over the outermost index-0 shell (the face x_a = -R)
    const Grid& g = f.grid();
    double sup = 0.0;
    const int n0 = g.points[0];
    const int n1 = g.dim > 1 ? g.points[1] : 1;
    if (g.dim == 1) {
        sup = std::abs(f[0]);
    } else {
        for (int j = 0; j < n1; ++j) sup = std::max(sup, std::abs(f[flat_index(g, 0, j)]));
        for (int i = 0; i < n0; ++i) sup = std::max(sup, std::abs(f[flat_index(g, i, 0)]));
    }
    return sup;
}

} // namespace

Kernel fundamental_solution(int m, int dim) { return fundamental_solution(m, dim, default_kernel_grid(m, dim)); }

Kernel fundamental_solution(int m, int dim, const Grid& grid)
{
    if (m < 1) throw std::invalid_argument("fundamental_solution: m must be >= 1");
    if (grid.kind != Grid::Kind::Periodic || grid.dim != dim)
        throw std::invalid_argument("fundamental_solution: centered periodic grid of matching dim required");

    // coefficients of the periodized kernel: hat F(xi) = exp(-|xi|^{2m}),
    // placed as DFT coefficients scaled by the cell volume
    const double hN = grid.cell_volume();
    std::vector<fft::cplx> coeff(grid.size());
    for (std::size_t i = 0; i < coeff.size(); ++i)
        coeff[i] = std::exp(-std::pow(xi_squared(grid, i), double(m))) / hN;
    // re-center: coefficients above assume samples at origin-based coords;
    // the grid origin is -R per axis, so shift the phase accordingly
    {
        const int n0 = grid.points[0];
        const int n1 = grid.dim > 1 ? grid.points[1] : 1;
        const int n2 = grid.dim > 2 ? grid.points[2] : 1;
        std::size_t flat = 0;
        for (int k0 = 0; k0 < n0; ++k0)
            for (int k1 = 0; k1 < n1; ++k1)
                for (int k2 = 0; k2 < n2; ++k2, ++flat) {
                    const int kk[3] = {k0, k1, k2};
                    double phase = 0.0;
                    for (int a = 0; a < grid.dim; ++a)
                        phase += wavenumber(grid, a, kk[a]) * grid.origin[std::size_t(a)];
                    coeff[flat] *= fft::cplx(std::cos(phase), std::sin(phase));
                }
    }

    Kernel k;
    k.m = m;
    k.dim = dim;
    k.profile = from_spectral(std::move(coeff), grid);
    k.mass = integrate(k.profile);

    if (boundary_sup(k.profile) > 1e-14)
        throw std::invalid_argument("fundamental_solution: domain too small, kernel tail exceeds 1e-14 at the boundary");
    return k;
}

double kernel_residual(const Kernel& k)
{
    const Field& F = k.profile;
    const Grid& g = F.grid();
    const double inv2m = 1.0 / double(2 * k.m);

    // -(-Lap)^m F spectrally
    auto coeff = to_spectral(F);
    auto cm = coeff;
    for (std::size_t i = 0; i < cm.size(); ++i)
        cm[i] *= -std::pow(xi_squared(g, i), double(k.m));
    Field diff_term = from_spectral(std::move(cm), g);

    // (1/2m) y . grad F, physical-space product with the centered coordinate
    Field transport = Field::zeros(g);
    for (int a = 0; a < g.dim; ++a) {
        Field da = derivative(F, a, 1);
        if (g.dim == 1) {
            for (int i = 0; i < g.points[0]; ++i)
                transport[std::size_t(i)] += g.coord(0, i) * da[std::size_t(i)];
        } else {
            for (int i = 0; i < g.points[0]; ++i)
                for (int j = 0; j < g.points[1]; ++j) {
                    const std::size_t idx = flat_index(g, i, j);
                    transport[idx] += g.coord(a, a == 0 ? i : j) * da[idx];
                }
        }
    }
    transport *= inv2m;

    double sup = 0.0;
    const double nf = double(g.dim) * inv2m;
    for (std::size_t i = 0; i < F.size(); ++i)
        sup = std::max(sup, std::abs(diff_term[i] + transport[i] + nf * F[i]));
    return sup;
}

DecayFit fit_decay(Kernel& k)
{
    if (k.dim != 1) throw std::invalid_argument("fit_decay: 1d profiles only");
    const Field& F = k.profile;
    const Grid& g = F.grid();
    const double ymax = 0.5 * g.extent[0];
    const double floor = 1e-12;

    // envelope: local maxima of |F| inside the fit window
    std::vector<std::pair<double, double>> pts; // (|y|, ln|F|)
    const int n = g.points[0];
    auto absf = [&](int i) { return std::abs(F[std::size_t(i)]); };
    for (int i = 1; i + 1 < n; ++i) {
        const double y = std::abs(g.coord(0, i));
        if (y < 3.0 || y > 0.8 * ymax) continue;
        if (absf(i) < floor) continue;
        if (absf(i) >= absf(i - 1) && absf(i) > absf(i + 1))
            pts.emplace_back(y, std::log(absf(i)));
    }
    if (pts.size() < 5) {
        // monotone profile (no oscillation): sample the window directly
        pts.clear();
        for (int i = 0; i < n; i += 4) {
            const double y = std::abs(g.coord(0, i));
            if (y < 3.0 || y > 0.8 * ymax) continue;
            if (absf(i) < floor) continue;
            pts.emplace_back(y, std::log(absf(i)));
        }
    }
    if (pts.size() < 5) throw std::invalid_argument("fit_decay: too few envelope peaks");

    // linear LS in (ln D, d) for fixed alpha; scan then golden-refine alpha
    auto sse = [&](double alpha, double* lnD_out = nullptr, double* d_out = nullptr) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double nn = double(pts.size());
        for (auto& [y, lf] : pts) {
            const double x = std::pow(y, alpha);
            sx += x;
            sy += lf;
            sxx += x * x;
            sxy += x * lf;
        }
        const double denom = nn * sxx - sx * sx;
        const double slope = (nn * sxy - sx * sy) / denom; // = -d
        const double icept = (sy - slope * sx) / nn;       // = ln D
        double e = 0.0;
        for (auto& [y, lf] : pts) {
            const double r = lf - (icept + slope * std::pow(y, alpha));
            e += r * r;
        }
        if (lnD_out) *lnD_out = icept;
        if (d_out) *d_out = -slope;
        return e;
    };

    double best_a = 1.0, best_e = std::numeric_limits<double>::infinity();
    for (double a = 1.0; a <= 2.4; a += 0.005) {
        const double e = sse(a);
        if (e < best_e) {
            best_e = e;
            best_a = a;
        }
    }
    double lo = best_a - 0.01, hi = best_a + 0.01;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (sse(m1) < sse(m2)) hi = m2;
        else lo = m1;
    }
    DecayFit fit;
    fit.alpha = 0.5 * (lo + hi);
    double lnD;
    sse(fit.alpha, &lnD, &fit.d);
    fit.D = std::exp(lnD);
    k.decay_fit = fit;
    return fit;
}

Field heat_semigroup_apply(int m, double t, const Field& v)
{
    return heat_propagate(v, m, t);
}

} // namespace kslab
