#include "kslab/rescale.hpp"

#include "kslab/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

double ScalingLaw::at(const std::string& key) const
{
    auto it = derived.find(key);
    if (it == derived.end()) throw std::invalid_argument("scaling law: no coefficient " + key);
    return it->second;
}

ScalingLaw scaling_coefficients(ScalingKind kind, int m, int N, double p, double Ck)
{
    if (m < 1 || N < 1) throw std::invalid_argument("scaling: need m >= 1, N >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("scaling: p must exceed 1");
    if (!(Ck > 0.0)) throw std::invalid_argument("scaling: C_k must be positive");
    ScalingLaw law;
    law.kind = kind;
    law.m = m;
    law.N = N;
    law.p = p;
    law.Ck = Ck;
    double nu_exp = 0.0;
    switch (kind) {
    case ScalingKind::CkL2:
        law.derived["a_k"] = std::pow(Ck, -2.0 / N);
        law.derived["mu_k"] = std::pow(Ck, -2.0 * m / N);
        nu_exp = p - 1.0 - 2.0 * (2.0 * m - 1.0) / N;
        law.derived["nu_k"] = std::pow(Ck, nu_exp);
        break;
    case ScalingKind::CkHminus1:
        law.derived["a_k"] = std::pow(Ck, -2.0 / (N + 2.0));
        nu_exp = p - 1.0 - 2.0 * (2.0 * m - 3.0) / (N + 2.0);
        law.derived["nu_k"] = std::pow(Ck, nu_exp);
        break;
    case ScalingKind::CkLp: {
        const double a = std::pow(Ck, -p / N);
        law.derived["a_k"] = a;
        law.derived["b_k"] = std::pow(a, 2.0 * m);
        nu_exp = 1.0 - p * (2.0 * m - 1.0) / N;
        law.derived["nu_k"] = std::pow(Ck, nu_exp);
        break;
    }
    case ScalingKind::TminusT:
        law.derived["alpha"] = (2.0 * m - 1.0) / (2.0 * m * (p - 1.0));
        break;
    case ScalingKind::Leray:
        if (m != 1) throw std::invalid_argument("scaling: the Leray kind is the m = 1 case");
        law.derived["alpha"] = 0.5; // (2m-1)/(2m(p-1)) at m = 1, p = 2
        break;
    }
    if (kind == ScalingKind::CkL2 || kind == ScalingKind::CkHminus1 || kind == ScalingKind::CkLp) {
        law.derived["nu_exponent"] = nu_exp;
        law.criticality = nu_exp < 0.0   ? Criticality::Subcritical
                          : nu_exp > 0.0 ? Criticality::Supercritical
                                         : Criticality::Critical;
    }
    return law;
}

SelfSimilarSlice to_selfsimilar(const Field& v, double T, double t, int m, double p,
                                const std::optional<Grid>& target)
{
    if (!(t >= 0.0) || !(t < T)) throw std::invalid_argument("to_selfsimilar: need 0 <= t < T");
    const Grid& g = v.grid();
    if (g.kind != Grid::Kind::Periodic) throw std::invalid_argument("to_selfsimilar: periodic grid required");
    const double alpha = (2.0 * m - 1.0) / (2.0 * m * (p - 1.0));
    const double s = std::pow(T - t, 1.0 / (2.0 * m));
    const double amp = std::pow(T - t, alpha);

    SelfSimilarSlice out;
    out.tau = -std::log(T - t);
    if (!target) {
        Grid gy = g;
        for (int a = 0; a < g.dim; ++a) {
            gy.extent[std::size_t(a)] = g.extent[std::size_t(a)] / s;
            gy.origin[std::size_t(a)] = g.origin[std::size_t(a)] / s;
        }
        Field w = v;
        w *= amp;
        out.w = Field(gy, w.values());
        return out;
    }
    if (g.dim != 1 || target->dim != 1)
        throw std::invalid_argument("to_selfsimilar: explicit targets supported in 1d only");
    // evaluate the trig interpolant of v at x = y * (T-t)^{1/2m}
    std::vector<double> x(target->size());
    for (int i = 0; i < target->points[0]; ++i) x[std::size_t(i)] = target->coord(0, i) * s;
    std::vector<double> vals = eval_fourier_1d(v, x);
    for (double& val : vals) val *= amp;
    out.w = Field(*target, std::move(vals));
    return out;
}

Field from_selfsimilar(const Field& w, double T, double t, int m, double p)
{
    if (!(t >= 0.0) || !(t < T)) throw std::invalid_argument("from_selfsimilar: need 0 <= t < T");
    const double alpha = (2.0 * m - 1.0) / (2.0 * m * (p - 1.0));
    const double s = std::pow(T - t, 1.0 / (2.0 * m));
    const Grid& gy = w.grid();
    Grid gx = gy;
    for (int a = 0; a < gy.dim; ++a) {
        gx.extent[std::size_t(a)] = gy.extent[std::size_t(a)] * s;
        gx.origin[std::size_t(a)] = gy.origin[std::size_t(a)] * s;
    }
    Field v = w;
    v *= std::pow(T - t, -alpha);
    return Field(gx, v.values());
}

Field ck_rescale(const Field& v, const ScalingLaw& law,
                 const std::optional<std::vector<double>>& center)
{
    const Grid& g = v.grid();
    if (g.kind != Grid::Kind::Periodic) throw std::invalid_argument("ck_rescale: periodic grid required");
    if (law.kind != ScalingKind::CkL2 && law.kind != ScalingKind::CkLp &&
        law.kind != ScalingKind::CkHminus1)
        throw std::invalid_argument("ck_rescale: C_k kinds only");
    if (law.N != g.dim) throw std::invalid_argument("ck_rescale: law dimension mismatch");
    if (law.kind == ScalingKind::CkHminus1) {
        const double tol = 1e-9 * std::max(1.0, v.sup_norm());
        if (std::abs(v.mean()) > tol)
            throw std::invalid_argument("ck_rescale: H^-1 scaling needs zero-mean data");
    }

    // blow-up center: user supplied or the argmax of |v|
    std::vector<double> xk(std::size_t(g.dim), 0.0);
    if (center) {
        if (int(center->size()) != g.dim) throw std::invalid_argument("ck_rescale: center dim mismatch");
        xk = *center;
    } else {
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (std::abs(v[i]) > std::abs(v[best])) best = i;
        const int n1 = g.dim > 1 ? g.points[1] : 1;
        const int n2 = g.dim > 2 ? g.points[2] : 1;
        const int i2 = int(best % std::size_t(n2));
        const int i1 = int((best / std::size_t(n2)) % std::size_t(n1));
        const int i0 = int(best / (std::size_t(n2) * std::size_t(n1)));
        if (g.dim > 0) xk[0] = g.coord(0, i0);
        if (g.dim > 1) xk[1] = g.coord(1, i1);
        if (g.dim > 2) xk[2] = g.coord(2, i2);
    }

    // translate so the center sits mid-grid (band-limited; exact circular
    // shift when the center is a node), then relabel y = x/a_k and divide
    // the amplitude. Sample j of the result holds v(x_k + a_k y_j).
    const double ak = law.at("a_k");
    Grid gy = g;
    std::vector<double> shift(std::size_t(g.dim));
    for (int a = 0; a < g.dim; ++a) {
        gy.extent[std::size_t(a)] = g.extent[std::size_t(a)] / ak;
        gy.origin[std::size_t(a)] = -0.5 * gy.extent[std::size_t(a)];
        shift[std::size_t(a)] =
            xk[std::size_t(a)] - 0.5 * g.extent[std::size_t(a)] - g.origin[std::size_t(a)];
    }
    Field shifted = spectral_shift(v, shift);
    shifted *= 1.0 / law.Ck;
    return Field(gy, shifted.values());
}

std::vector<double> reference_spectrum(SpectrumCase c, int m, double alpha, int kmax)
{
    if (kmax < 0) throw std::invalid_argument("reference_spectrum: kmax must be >= 0");
    std::vector<double> out;
    out.reserve(std::size_t(kmax + 1));
    for (int k = 0; k <= kmax; ++k) {
        switch (c) {
        case SpectrumCase::Nse: out.push_back(-0.5 - 0.5 * k); break;
        case SpectrumCase::Burnett:
            out.push_back(-(2.0 * m - 1.0) / (2.0 * m) - double(k) / (2.0 * m));
            break;
        case SpectrumCase::Generic: out.push_back(-alpha - double(k) / (2.0 * m)); break;
        }
    }
    return out;
}

} // namespace kslab
