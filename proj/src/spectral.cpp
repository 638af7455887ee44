#include "kslab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kslab {

namespace {

void require_periodic(const Field& f, const char* what)
{
    if (f.grid().kind != Grid::Kind::Periodic)
        throw std::invalid_argument(std::string(what) + ": periodic grid required");
}

// iterate spectral indices; cb(flat, k0, k1, k2)
template <typename F>
void for_each_mode(const Grid& g, F&& cb)
{
    const int n0 = g.points[0];
    const int n1 = g.dim > 1 ? g.points[1] : 1;
    const int n2 = g.dim > 2 ? g.points[2] : 1;
    std::size_t flat = 0;
    for (int k0 = 0; k0 < n0; ++k0)
        for (int k1 = 0; k1 < n1; ++k1)
            for (int k2 = 0; k2 < n2; ++k2)
                cb(flat++, k0, k1, k2);
}

} // namespace

std::vector<fft::cplx> to_spectral(const Field& f)
{
    require_periodic(f, "to_spectral");
    const Grid& g = f.grid();
    std::vector<fft::cplx> data(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) data[i] = fft::cplx(f[i], 0.0);
    fft::transform_nd(data, g.points.data(), g.dim, false);
    return data;
}

Field from_spectral(std::vector<fft::cplx> coeff, const Grid& g)
{
    fft::transform_nd(coeff, g.points.data(), g.dim, true);
    std::vector<double> v(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) v[i] = coeff[i].real();
    return Field(g, std::move(v));
}

double wavenumber(const Grid& g, int axis, int k)
{
    const int n = g.points[std::size_t(axis)];
    const int kk = (k <= n / 2) ? k : k - n;
    return 2.0 * std::numbers::pi * double(kk) / g.extent[std::size_t(axis)];
}

double xi_squared(const Grid& g, std::size_t flat)
{
    const int n1 = g.dim > 1 ? g.points[1] : 1;
    const int n2 = g.dim > 2 ? g.points[2] : 1;
    const int k2 = int(flat % std::size_t(n2));
    const int k1 = int((flat / std::size_t(n2)) % std::size_t(n1));
    const int k0 = int(flat / (std::size_t(n2) * std::size_t(n1)));
    double s = 0.0;
    double x0 = wavenumber(g, 0, k0);
    s += x0 * x0;
    if (g.dim > 1) {
        double x1 = wavenumber(g, 1, k1);
        s += x1 * x1;
    }
    if (g.dim > 2) {
        double x2 = wavenumber(g, 2, k2);
        s += x2 * x2;
    }
    return s;
}

namespace {

Field derivative_periodic(const Field& f, int axis, int order)
{
    const Grid& g = f.grid();
    auto coeff = to_spectral(f);
    const int n = g.points[std::size_t(axis)];
    for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
        const int k = axis == 0 ? k0 : (axis == 1 ? k1 : k2);
        const double xi = wavenumber(g, axis, k);
        fft::cplx factor;
        // (i xi)^order; odd orders zero the Nyquist mode (no well-defined sign)
        const bool nyquist = (k == n / 2) && (n % 2 == 0);
        switch (order) {
        case 1: factor = nyquist ? fft::cplx(0, 0) : fft::cplx(0, xi); break;
        case 2: factor = fft::cplx(-xi * xi, 0); break;
        case 3: factor = nyquist ? fft::cplx(0, 0) : fft::cplx(0, -xi * xi * xi); break;
        case 4: factor = fft::cplx(xi * xi * xi * xi, 0); break;
        default: throw std::invalid_argument("derivative: order must be in 1..4");
        }
        coeff[flat] *= factor;
    });
    return from_spectral(std::move(coeff), g);
}

// Dirichlet clamped interval: centered second-order differences. Stored nodes
// are x_i = i h, i = 0..n-1; v(0) = v(L) = 0 and Dv = 0 at both ends give the
// ghost rules v[-j] = v[j] and v[n+j] = v[n-j] with v[0] = v[n] = 0.
Field derivative_dirichlet(const Field& f, int order)
{
    const Grid& g = f.grid();
    const int n = g.points[0];
    const double h = g.spacing(0);
    auto at = [&](int i) -> double {
        if (i <= 0) {
            if (i == 0) return 0.0;
            return f[std::size_t(-i)]; // mirror, v(0)=0 handled above
        }
        if (i >= n) {
            if (i == n) return 0.0;
            const int r = 2 * n - i;
            return r >= 0 && r < n ? (r == 0 ? 0.0 : f[std::size_t(r)]) : 0.0;
        }
        return f[std::size_t(i)];
    };
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        switch (order) {
        case 1: d = (at(i + 1) - at(i - 1)) / (2 * h); break;
        case 2: d = (at(i + 1) - 2 * at(i) + at(i - 1)) / (h * h); break;
        case 3: d = (at(i + 2) - 2 * at(i + 1) + 2 * at(i - 1) - at(i - 2)) / (2 * h * h * h); break;
        case 4: d = (at(i + 2) - 4 * at(i + 1) + 6 * at(i) - 4 * at(i - 1) + at(i - 2)) / (h * h * h * h); break;
        default: throw std::invalid_argument("derivative: order must be in 1..4");
        }
        out[std::size_t(i)] = d;
    }
    return Field(g, std::move(out));
}

} // namespace

Field odd_extension(const Field& f)
{
    const Grid& g = f.grid();
    if (g.kind != Grid::Kind::Interval) throw std::invalid_argument("odd_extension: interval grid required");
    const int n = g.points[0];
    Grid ext = Grid::periodic({2 * n}, {2.0 * g.extent[0]});
    std::vector<double> v(std::size_t(2 * n), 0.0);
    v[0] = 0.0;
    for (int j = 1; j < n; ++j) v[std::size_t(j)] = f[std::size_t(j)];
    v[std::size_t(n)] = 0.0;
    for (int j = 1; j < n; ++j) v[std::size_t(2 * n - j)] = -f[std::size_t(j)];
    return Field(ext, std::move(v));
}

Field restrict_odd(const Field& ext, const Grid& interval_grid)
{
    const int n = interval_grid.points[0];
    if (ext.grid().points[0] != 2 * n) throw std::invalid_argument("restrict_odd: size mismatch");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[std::size_t(j)] = ext[std::size_t(j)];
    return Field(interval_grid, std::move(v));
}

Field derivative(const Field& f, int axis, int order)
{
    if (order < 1 || order > 4) throw std::invalid_argument("derivative: order must be in 1..4");
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("derivative: axis out of range");
    if (g.kind == Grid::Kind::Periodic) return derivative_periodic(f, axis, order);
    if (g.bc == BoundaryKind::Navier)
        return restrict_odd(derivative_periodic(odd_extension(f), 0, order), g);
    return derivative_dirichlet(f, order);
}

Field neg_laplacian_power(const Field& f, double l)
{
    require_periodic(f, "neg_laplacian_power");
    const Grid& g = f.grid();
    if (l < 0.0) {
        const double tol = 1e-9 * std::max(1.0, f.sup_norm());
        if (std::abs(f.mean()) > tol)
            throw std::invalid_argument("neg_laplacian_power: nonzero mean with negative power");
    }
    auto coeff = to_spectral(f);
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        const double x2 = xi_squared(g, i);
        coeff[i] *= (x2 == 0.0) ? 0.0 : std::pow(x2, l);
    }
    return from_spectral(std::move(coeff), g);
}

Field dealias(const Field& f)
{
    const Grid& g = f.grid();
    if (g.kind == Grid::Kind::Interval) {
        if (g.bc != BoundaryKind::Navier) return f; // FD scheme: nothing to truncate
        return restrict_odd(dealias(odd_extension(f)), g);
    }
    auto coeff = to_spectral(f);
    for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
        const int kk[3] = {k0, k1, k2};
        for (int a = 0; a < g.dim; ++a) {
            const int n = g.points[std::size_t(a)];
            const int k = kk[a] <= n / 2 ? kk[a] : n - kk[a];
            if (k > n / 3) {
                coeff[flat] = 0.0;
                return;
            }
        }
    });
    return from_spectral(std::move(coeff), g);
}

Field heat_propagate(const Field& f, int m, double t)
{
    require_periodic(f, "heat_propagate");
    if (t < 0.0) throw std::invalid_argument("heat_propagate: t must be nonnegative");
    const Grid& g = f.grid();
    auto coeff = to_spectral(f);
    for (std::size_t i = 0; i < coeff.size(); ++i)
        coeff[i] *= std::exp(-std::pow(xi_squared(g, i), double(m)) * t);
    return from_spectral(std::move(coeff), g);
}

Field spectral_shift(const Field& f, const std::vector<double>& shift)
{
    require_periodic(f, "spectral_shift");
    const Grid& g = f.grid();
    if (int(shift.size()) != g.dim) throw std::invalid_argument("spectral_shift: dim mismatch");
    auto coeff = to_spectral(f);
    for_each_mode(g, [&](std::size_t flat, int k0, int k1, int k2) {
        const int kk[3] = {k0, k1, k2};
        double phase = 0.0;
        for (int a = 0; a < g.dim; ++a) phase += wavenumber(g, a, kk[a]) * shift[std::size_t(a)];
        coeff[flat] *= fft::cplx(std::cos(phase), std::sin(phase));
    });
    return from_spectral(std::move(coeff), g);
}

std::vector<double> eval_fourier_1d(const Field& f, const std::vector<double>& x)
{
    require_periodic(f, "eval_fourier_1d");
    const Grid& g = f.grid();
    if (g.dim != 1) throw std::invalid_argument("eval_fourier_1d: 1d only");
    const int n = g.points[0];
    auto coeff = to_spectral(f);
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double y = x[j] - g.origin[0];
        fft::cplx acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            const double xi = wavenumber(g, 0, k);
            const double w = (k == n / 2) ? 0.5 : 1.0; // split the Nyquist mode symmetrically
            acc += w * coeff[std::size_t(k)] * fft::cplx(std::cos(xi * y), std::sin(xi * y));
            if (k == n / 2) {
                const double xim = -xi;
                acc += 0.5 * coeff[std::size_t(k)] * fft::cplx(std::cos(xim * y), std::sin(xim * y));
            }
        }
        out[j] = acc.real() / double(n);
    }
    return out;
}

Field random_band_limited_field(const Grid& g, std::uint64_t seed, int kband, double amplitude,
                                bool zero_mean, double normalize_l2)
{
    std::mt19937_64 rng(seed);
    auto unif = [&] { return 2.0 * double(rng() >> 11) * 0x1p-53 - 1.0; };

    Field f = Field::zeros(g);
    if (g.kind == Grid::Kind::Interval) {
        for (int k = 1; k <= kband; ++k) {
            const double a = unif();
            for (int i = 0; i < g.points[0]; ++i)
                f[std::size_t(i)] += a * std::sin(k * std::numbers::pi * g.coord(0, i) / g.extent[0]);
        }
    } else {
        std::vector<fft::cplx> c(g.size(), fft::cplx(0, 0));
        const int n0 = g.points[0];
        const int n1 = g.dim > 1 ? g.points[1] : 1;
        const int n2 = g.dim > 2 ? g.points[2] : 1;
        std::size_t flat = 0;
        for (int k0 = 0; k0 < n0; ++k0)
            for (int k1 = 0; k1 < n1; ++k1)
                for (int k2 = 0; k2 < n2; ++k2, ++flat) {
                    const int kk[3] = {k0, k1, k2};
                    bool in_band = true;
                    int ksum = 0;
                    for (int a = 0; a < g.dim; ++a) {
                        const int n = g.points[std::size_t(a)];
                        const int kp = kk[a] <= n / 2 ? kk[a] : n - kk[a];
                        if (kp > kband || kk[a] == n / 2) in_band = false;
                        ksum += kp;
                    }
                    if (!in_band) continue;
                    if (ksum == 0 && zero_mean) continue;
                    c[flat] = fft::cplx(unif(), unif());
                }
        f = from_spectral(std::move(c), g); // real part realises the field
        if (zero_mean) {
            const double mean = f.mean();
            for (std::size_t i = 0; i < f.size(); ++i) f[i] -= mean;
        }
    }
    if (normalize_l2 > 0.0) {
        double s = 0.0;
        for (double x : f.values()) s += x * x;
        const double l2 = std::sqrt(s * g.cell_volume());
        if (l2 > 0.0) f *= normalize_l2 / l2;
    } else {
        const double sup = f.sup_norm();
        if (sup > 0.0) f *= amplitude / sup;
    }
    return f;
}

} // namespace kslab
