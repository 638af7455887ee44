#include "kslab/models.hpp"

#include "kslab/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

const char* family_name(Family f)
{
    switch (f) {
    case Family::KseIbvp: return "kse_ibvp";
    case Family::Mkse: return "mkse";
    case Family::MkseZeroOrder: return "mkse_zero_order";
    case Family::NonDivergent: return "non_divergent";
    case Family::PureDivergent: return "pure_divergent";
    case Family::Dispersion3: return "dispersion3";
    case Family::CahnHilliard: return "cahn_hilliard";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& s)
{
    for (Family f : {Family::KseIbvp, Family::Mkse, Family::MkseZeroOrder, Family::NonDivergent,
                     Family::PureDivergent, Family::Dispersion3, Family::CahnHilliard})
        if (s == family_name(f)) return f;
    return std::nullopt;
}

int ModelSpec::diffusion_order() const
{
    switch (family) {
    case Family::KseIbvp: return 2;
    case Family::Mkse: return 2 * l;
    case Family::CahnHilliard: return 2;
    default: return m;
    }
}

double ModelSpec::drift_coeff(int axis) const
{
    if (drift.empty()) return 1.0;
    return drift[std::size_t(axis)];
}

void ModelSpec::validate(const Grid& g) const
{
    if (!(p > 1.0)) throw std::invalid_argument("model: p must exceed 1");
    if (family == Family::Mkse && l < 1) throw std::invalid_argument("model: l must be >= 1");
    if (family != Family::Mkse && family != Family::KseIbvp && family != Family::CahnHilliard && m < 1)
        throw std::invalid_argument("model: m must be >= 1");
    if (!drift.empty() && int(drift.size()) != g.dim)
        throw std::invalid_argument("model: drift length must equal grid dim");
    if (family == Family::KseIbvp) {
        if (g.kind != Grid::Kind::Interval)
            throw std::invalid_argument("model: kse_ibvp needs an interval grid");
    } else if (g.kind != Grid::Kind::Periodic) {
        throw std::invalid_argument("model: Cauchy-problem families need a periodic grid");
    }
}

namespace {

double sign_power(double v, double p)
{
    // |v|^{p-1} v, sign preserving, 0^p = 0
    if (v == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(v), p), v);
}

double abs_power(double v, double p)
{
    if (v == 0.0) return 0.0;
    return std::pow(std::abs(v), p);
}

// Linear symbol of the family at |xi|^2 = x2.
double linear_symbol(const ModelSpec& spec, double x2)
{
    switch (spec.family) {
    case Family::KseIbvp: return -x2 * x2 + x2;
    case Family::Mkse: {
        const double a = std::pow(x2, double(spec.l));
        return -a * a + a;
    }
    case Family::MkseZeroOrder: return -std::pow(x2, double(spec.m)) + 0.25;
    case Family::NonDivergent:
    case Family::PureDivergent:
    case Family::Dispersion3: return -std::pow(x2, double(spec.m));
    case Family::CahnHilliard: return -x2 * x2;
    }
    return 0.0;
}

// B1(w) = (1/p) sum_k d_k D_k w computed spectrally from physical-space w;
// post != 1 additionally multiplies by |xi|^(2*post_pow) (Dispersion3 and
// Cahn-Hilliard carry an extra -Lap).
Field divergence_form_term(const ModelSpec& spec, const Field& w, bool extra_laplacian)
{
    const Grid& g = w.grid();
    auto coeff = to_spectral(w);
    const int n0 = g.points[0];
    const int n1 = g.dim > 1 ? g.points[1] : 1;
    const int n2 = g.dim > 2 ? g.points[2] : 1;
    std::size_t flat = 0;
    for (int k0 = 0; k0 < n0; ++k0)
        for (int k1 = 0; k1 < n1; ++k1)
            for (int k2 = 0; k2 < n2; ++k2, ++flat) {
                const int kk[3] = {k0, k1, k2};
                double dot = 0.0; // sum_k d_k xi_k, Nyquist dropped for the odd factor
                for (int a = 0; a < g.dim; ++a) {
                    const int n = g.points[std::size_t(a)];
                    if (kk[a] == n / 2) { dot = 0.0; break; }
                    dot += spec.drift_coeff(a) * wavenumber(g, a, kk[a]);
                }
                fft::cplx f(0.0, dot / spec.p);
                if (extra_laplacian) f *= xi_squared(g, flat);
                coeff[flat] *= f;
            }
    return from_spectral(std::move(coeff), g);
}

} // namespace

std::vector<double> linear_symbol_table(const ModelSpec& spec, const Grid& g)
{
    std::vector<double> tab(g.size());
    for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = linear_symbol(spec, xi_squared(g, i));
    return tab;
}

ModelSpec periodic_equivalent(const ModelSpec& spec)
{
    if (spec.family != Family::KseIbvp) return spec;
    ModelSpec eq;
    eq.family = Family::Mkse;
    eq.l = 1;
    eq.p = 2.0;
    eq.drift = {1.0};
    return eq;
}

Field nonlinear_term(const ModelSpec& spec_in, const Field& v)
{
    const ModelSpec spec = periodic_equivalent(spec_in);
    const Grid& g = v.grid();
    const Field vd = dealias(v);
    switch (spec.family) {
    case Family::Mkse:
    case Family::MkseZeroOrder:
    case Family::PureDivergent: {
        Field w = vd;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = abs_power(vd[i], spec.p);
        return dealias(divergence_form_term(spec, w, false));
    }
    case Family::Dispersion3: {
        Field w = vd;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = abs_power(vd[i], spec.p);
        Field nl = dealias(divergence_form_term(spec, w, true));
        nl *= -1.0;
        return nl;
    }
    case Family::NonDivergent: {
        Field w = vd;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = -sign_power(vd[i], spec.p);
        return dealias(w);
    }
    case Family::CahnHilliard: {
        Field w = vd;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = sign_power(vd[i], spec.p);
        auto c = to_spectral(w);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] *= xi_squared(g, i); // -Lap
        return dealias(from_spectral(std::move(c), g));
    }
    case Family::KseIbvp: break; // unreachable after periodic_equivalent
    }
    return Field::zeros(g);
}

namespace {

Field rhs_periodic(const ModelSpec& spec, const Field& v)
{
    const Grid& g = v.grid();
    auto coeff = to_spectral(v);
    for (std::size_t i = 0; i < coeff.size(); ++i)
        coeff[i] *= linear_symbol(spec, xi_squared(g, i));
    return from_spectral(std::move(coeff), g) + nonlinear_term(spec, v);
}

Field rhs_kse_navier(const ModelSpec& spec, const Field& v)
{
    // sine-Galerkin via the odd periodic extension; D(v^2) maps odd to odd
    Field ext = odd_extension(v);
    return restrict_odd(rhs_periodic(periodic_equivalent(spec), ext), v.grid());
}

Field rhs_kse_dirichlet(const ModelSpec&, const Field& v)
{
    Field d4 = derivative(v, 0, 4);
    Field d2 = derivative(v, 0, 2);
    Field w = v;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = v[i] * v[i];
    Field dw = derivative(w, 0, 1);
    Field out = Field::zeros(v.grid());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = -d4[i] - d2[i] + 0.5 * dw[i];
    out[0] = 0.0; // clamped end
    return out;
}

} // namespace

Field rhs(const ModelSpec& spec, const Field& v)
{
    spec.validate(v.grid());
    if (!v.finite()) throw std::invalid_argument("rhs: input contains NaN/Inf");
    if (spec.family == Family::KseIbvp)
        return v.grid().bc == BoundaryKind::Navier ? rhs_kse_navier(spec, v)
                                                   : rhs_kse_dirichlet(spec, v);
    return rhs_periodic(spec, v);
}

Field apply_bcs(const ModelSpec& spec, const Field& v)
{
    const Grid& g = v.grid();
    if (g.kind != Grid::Kind::Interval)
        throw std::invalid_argument("apply_bcs: interval grid required");
    if ((spec.family == Family::KseIbvp ? spec.bc : g.bc) == BoundaryKind::Navier) {
        // sine-series projection: the interior samples already determine the
        // interpolating sine series; only the boundary node moves.
        Field out = restrict_odd(odd_extension(v), g);
        out[0] = 0.0;
        return out;
    }
    Field out = v;
    out[0] = 0.0;
    return out;
}

ExponentReport critical_exponents(int m, int N, std::optional<double> p)
{
    if (m < 1 || N < 1) throw std::invalid_argument("critical_exponents: need m >= 1, N >= 1");
    ExponentReport r;
    r.p0_mkse = 1.0 + 2.0 * double(2 * m - 1) / double(N);
    if (2 * m > 3) r.p0_h1n3 = 1.0 + 2.0 * double(2 * m - 3) / double(N + 2);
    if (N > 2 * m) r.p_sobolev = double(N + 2 * m) / double(N - 2 * m);
    r.p0_burnett = double(N) / double(2 * m - 1);
    if (p) {
        if (!(*p > 1.0)) throw std::invalid_argument("critical_exponents: p must exceed 1");
        if (*p < r.p0_mkse)
            r.gamma0 = double(2 * m - 1) / (2.0 * double(N) * (r.p0_mkse - *p));
    }
    const int crit = 2 * (2 * m - 1);
    if (N < crit)
        r.burnett_range = BurnettRange::Global;
    else if (N == crit)
        r.burnett_range = (m == 1) ? BurnettRange::CriticalIncluded : BurnettRange::CriticalOpen;
    else
        r.burnett_range = BurnettRange::Open;
    return r;
}

} // namespace kslab
