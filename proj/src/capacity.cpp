#include "kslab/capacity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kslab {

namespace {

void require_lambda(double lambda)
{
    if (!(lambda > 6.0)) throw std::invalid_argument("capacity: lambda must exceed 6");
}

} // namespace

double capacity_kappa(double lambda, double L)
{
    require_lambda(lambda);
    return std::sqrt(lambda * (lambda + 2.0) / 4.0 * std::pow(L, -(2.0 + lambda)));
}

double capacity_c_lambda(double lambda, double L)
{
    require_lambda(lambda);
    const double l = lambda;
    return l * (l - 1.0) * std::pow(L, l - 6.0) *
           ((l - 2.0) * (l - 2.0) * (l - 3.0) * (l - 3.0) / (l - 6.0) +
            2.0 * (l - 2.0) * (l - 3.0) / (l - 4.0) * L * L + L * L * L * L / (l - 2.0));
}

double capacity_b0(const BoundaryTraces& tr, double lambda, double L)
{
    const double l = lambda;
    const double Ll = std::pow(L, l);
    const double Ll1 = std::pow(L, l - 1.0);
    return -0.5 * Ll * tr.v * tr.v + l * Ll1 * ((l - 1.0) * (l - 2.0) / (L * L)) * tr.v +
           Ll * (1.0 + l * (l - 1.0) / (L * L)) * tr.dv + l * Ll1 * tr.d2v + Ll * tr.d3v;
}

double capacity_weighted_integral(const Field& v, double lambda, double L)
{
    require_lambda(lambda);
    const Grid& g = v.grid();
    if (g.kind != Grid::Kind::Interval || g.dim != 1)
        throw std::invalid_argument("capacity: interval field required");
    const double h = g.spacing(0);
    // trapezoid over nodes below L; the weight vanishes to order lambda at
    // x = L so any partial last cell contributes its left half only
    double s = 0.0;
    double prev_val = 0.0; // integrand at x = 0 (v(0) = 0 for our BCs; use stored value anyway)
    prev_val = v[0] * std::pow(L, lambda);
    double prev_x = g.coord(0, 0);
    for (int i = 1; i < g.points[0]; ++i) {
        const double x = g.coord(0, i);
        if (x >= L) {
            // close with the vanishing-weight endpoint
            s += 0.5 * (L - prev_x) * prev_val;
            return s;
        }
        const double val = v[std::size_t(i)] * std::pow(L - x, lambda);
        s += 0.5 * (x - prev_x) * (prev_val + val);
        prev_val = val;
        prev_x = x;
    }
    // grid ends before L (weight extends past the sampled domain): close the
    // last cell as if v continued by zero
    s += 0.5 * h * prev_val;
    return s;
}

CapacityReport capacity_functional(const Field& v, const BoundaryTraces& tr, double lambda, double L)
{
    CapacityReport rep;
    rep.J = capacity_weighted_integral(v, lambda, L);
    rep.B0 = capacity_b0(tr, lambda, L);
    rep.C_lambda = capacity_c_lambda(lambda, L);
    rep.H_lambda = rep.B0 - rep.C_lambda;
    rep.kappa = capacity_kappa(lambda, L);
    return rep;
}

double closed_form_envelope(BlowupCase c, double J0, double kappa, double a, double t)
{
    switch (c) {
    case BlowupCase::Strict: {
        const double c0 = std::atan(kappa * J0 / a);
        return a / kappa * std::tan(a * kappa * t + c0);
    }
    case BlowupCase::Zero:
        return J0 / (1.0 - J0 * kappa * kappa * t);
    case BlowupCase::Negative: {
        const double c0 = (kappa * J0 - a) / (kappa * J0 + a);
        const double e = c0 * std::exp(2.0 * a * kappa * t);
        return a / kappa * (1.0 + e) / (1.0 - e);
    }
    }
    return 0.0;
}

double closed_form_t_infinity(BlowupCase c, double J0, double kappa, double a)
{
    switch (c) {
    case BlowupCase::Strict: {
        if (!(a > 0.0)) throw std::invalid_argument("strict case needs a > 0");
        const double c0 = std::atan(kappa * J0 / a);
        return (std::numbers::pi / 2.0 - c0) / (a * kappa);
    }
    case BlowupCase::Zero:
        if (!(J0 > 0.0)) throw std::invalid_argument("zero case needs J0 > 0");
        return 1.0 / (kappa * kappa * J0);
    case BlowupCase::Negative:
        if (!(J0 > a / kappa)) throw std::invalid_argument("negative case needs J0 > a/kappa");
        return 1.0 / (2.0 * a * kappa) * std::log((kappa * J0 + a) / (kappa * J0 - a));
    }
    return 0.0;
}

std::optional<BlowupCertificate> certify_blowup(const Field& v0, const BoundaryTraces& tr,
                                                double lambda_lo, double lambda_hi,
                                                double L_lo, double L_hi, int lattice)
{
    if (!(lambda_lo > 6.0) || !(lambda_hi > lambda_lo))
        throw std::invalid_argument("certify_blowup: lambda range must sit above 6");
    if (!(L_lo > 0.0) || !(L_hi > L_lo)) throw std::invalid_argument("certify_blowup: bad L range");
    if (lattice < 2) throw std::invalid_argument("certify_blowup: lattice too small");

    const double zero_band = 1e-12; // |H| below this relative scale counts as the Zero case

    auto classify = [&](double lambda, double L) -> std::optional<BlowupCertificate> {
        const double B0 = capacity_b0(tr, lambda, L);
        const double Cl = capacity_c_lambda(lambda, L);
        const double H = B0 - Cl;
        const double kappa = capacity_kappa(lambda, L);
        const double J0 = capacity_weighted_integral(v0, lambda, L);
        BlowupCertificate cert;
        cert.lambda = lambda;
        cert.L = L;
        cert.kappa = kappa;
        cert.c_lambda = Cl;
        cert.J0 = J0;
        const double scale = std::max(1.0, std::abs(Cl));
        if (std::abs(H) <= zero_band * scale) {
            if (!(J0 > 0.0)) return std::nullopt;
            cert.kind = BlowupCase::Zero;
            cert.a = 0.0;
            cert.t_infinity_bound = closed_form_t_infinity(BlowupCase::Zero, J0, kappa, 0.0);
        } else if (H > 0.0) {
            cert.kind = BlowupCase::Strict;
            cert.a = std::sqrt(H);
            cert.t_infinity_bound = closed_form_t_infinity(BlowupCase::Strict, J0, kappa, cert.a);
        } else {
            const double a = std::sqrt(-H);
            if (!(J0 > a / kappa)) return std::nullopt;
            cert.kind = BlowupCase::Negative;
            cert.a = a;
            cert.t_infinity_bound = closed_form_t_infinity(BlowupCase::Negative, J0, kappa, a);
        }
        if (!std::isfinite(cert.t_infinity_bound) || !(cert.t_infinity_bound > 0.0)) return std::nullopt;
        return cert;
    };

    auto sweep = [&](double llo, double lhi, double Llo, double Lhi, int nl,
                     std::optional<BlowupCertificate>& best) {
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j) {
                // logarithmic lattice in both parameters
                const double lambda = llo * std::pow(lhi / llo, double(i) / double(nl - 1));
                const double L = Llo * std::pow(Lhi / Llo, double(j) / double(nl - 1));
                auto cert = classify(lambda, L);
                if (cert && (!best || cert->t_infinity_bound < best->t_infinity_bound)) best = cert;
            }
    };

    std::optional<BlowupCertificate> best;
    sweep(lambda_lo, lambda_hi, L_lo, L_hi, lattice, best);
    if (!best) return std::nullopt;
    // single refinement pass around the best cell
    const double dl = std::pow(lambda_hi / lambda_lo, 1.0 / double(lattice - 1));
    const double dL = std::pow(L_hi / L_lo, 1.0 / double(lattice - 1));
    sweep(std::max(lambda_lo, best->lambda / dl), std::min(lambda_hi, best->lambda * dl),
          std::max(L_lo, best->L / dL), std::min(L_hi, best->L * dL), 16, best);
    return best;
}

RiccatiResult riccati_oracle(BlowupCase c, double J0, double kappa, double a,
                             std::span<const double> t_grid, double t_guess)
{
    if (!(t_guess > 0.0)) throw std::invalid_argument("riccati_oracle: t_guess must be positive");
    double H = 0.0;
    switch (c) {
    case BlowupCase::Strict: H = a * a; break;
    case BlowupCase::Zero: H = 0.0; break;
    case BlowupCase::Negative: H = -a * a; break;
    }
    const double k2 = kappa * kappa;
    auto f = [&](double J) { return k2 * J * J + H; };
    const double dt = 1e-5 * t_guess;
    const double cap = 1e14;

    RiccatiResult res;
    double t = 0.0, J = J0;
    std::size_t gi = 0;
    auto rk4_to = [&](double target) -> bool {
        while (t < target - 1e-300) {
            const double h = std::min(dt, target - t);
            const double k1 = f(J);
            const double k2v = f(J + 0.5 * h * k1);
            const double k3 = f(J + 0.5 * h * k2v);
            const double k4 = f(J + h * k3);
            const double Jn = J + h / 6.0 * (k1 + 2 * k2v + 2 * k3 + k4);
            if (!std::isfinite(Jn) || Jn > cap) {
                res.diverged = true;
                res.t_div_low = t;
                res.t_div_high = t + h;
                return false;
            }
            J = Jn;
            t += h;
        }
        return true;
    };
    for (; gi < t_grid.size(); ++gi) {
        if (!rk4_to(t_grid[gi])) break;
        res.t.push_back(t_grid[gi]);
        res.J.push_back(J);
    }
    if (!res.diverged && !t_grid.empty()) {
        // continue past the grid to locate the singularity (bounded effort)
        const double horizon = 50.0 * t_guess;
        while (!res.diverged && t < horizon)
            if (!rk4_to(std::min(horizon, t + 1000 * dt))) break;
    }
    return res;
}

} // namespace kslab
