#include "kslab/volterra.hpp"

#include <cmath>
#include <stdexcept>

namespace kslab {

VolterraResult volterra_bound(double p, int m, int N, double t_end, int steps, double eps)
{
    if (!(p > 1.0)) throw std::invalid_argument("volterra: p must exceed 1");
    if (m < 1 || N < 1) throw std::invalid_argument("volterra: need m >= 1, N >= 1");
    if (!(t_end > 0.0) || steps < 2) throw std::invalid_argument("volterra: bad grid");

    VolterraResult res;
    res.beta = (4.0 * m - 2.0 - double(N) * (p - 1.0)) / (4.0 * m);
    if (res.beta <= 0.0) {
        res.supercritical = true;
        return res;
    }
    const double beta = res.beta;

    // stability of the implicit panel weight: dt^beta/(beta(beta+1)) times
    // the endpoint exponential factor must stay well below 1, else the
    // near-diagonal kernel mass is unresolvable on a uniform mesh
    const double efac_end = std::exp((p - 1.0) * t_end / 4.0);
    const double guard = 0.6;
    double dt = t_end / double(steps);
    {
        const double dt_max =
            std::pow(guard * beta * (beta + 1.0) / efac_end, 1.0 / beta);
        if (dt > dt_max) {
            const double needed = std::ceil(t_end / dt_max);
            if (needed > 20000.0)
                throw std::invalid_argument(
                    "volterra: beta too small to resolve the kernel mass on a uniform mesh "
                    "(needs > 20000 steps); reduce t_end or move away from the critical exponent");
            steps = int(needed);
            dt = t_end / double(steps);
        }
    }

    // product integration: on each panel [s_j, s_{j+1}] write the smooth part
    // g(s) = e^{(p-1)s/4} V(s) as a linear interpolant and integrate it
    // exactly against (t_i - s)^{beta-1}. With u = t_i - s the two moments are
    //   M0 = int u^{beta-1} du,  M1 = int u^{beta-1} (s - s_j)/dt du.
    auto m0 = [&](double u_lo, double u_hi) {
        return (std::pow(u_hi, beta) - std::pow(u_lo, beta)) / beta;
    };
    res.t.resize(std::size_t(steps + 1));
    res.V.resize(std::size_t(steps + 1));
    std::vector<double> g(std::size_t(steps + 1)); // e^{(p-1)s/4} V(s)
    res.t[0] = 0.0;
    res.V[0] = 1.0;
    g[0] = 1.0;
    for (int i = 1; i <= steps; ++i) {
        const double ti = double(i) * dt;
        res.t[std::size_t(i)] = ti;
        double acc = 0.0;
        double w_implicit = 0.0;
        for (int j = 0; j < i; ++j) {
            // panel [s_j, s_{j+1}], u = t_i - s runs over [u_hi, u_lo] reversed
            const double u_hi = double(i - j) * dt;
            const double u_lo = double(i - j - 1) * dt;
            const double M0 = m0(u_lo, u_hi);
            // M1 = (1/dt) int (s - s_j) u^{beta-1} du, s - s_j = u_hi - u
            const double M1 =
                (u_hi * M0 - (std::pow(u_hi, beta + 1.0) - std::pow(u_lo, beta + 1.0)) / (beta + 1.0)) / dt;
            const double w_left = M0 - M1;
            const double w_right = M1;
            acc += w_left * g[std::size_t(j)];
            if (j + 1 < i) acc += w_right * g[std::size_t(j + 1)];
            else w_implicit = w_right; // couples to the unknown V(t_i)
        }
        const double efac = std::exp((p - 1.0) * ti / 4.0);
        const double Vi = (1.0 + acc) / (1.0 - w_implicit * efac);
        res.V[std::size_t(i)] = Vi;
        g[std::size_t(i)] = efac * Vi;
    }

    res.V_hat.resize(res.V.size());
    const double c = 4.0 / (beta * (p - 1.0)) + eps;
    for (std::size_t i = 0; i < res.t.size(); ++i)
        res.V_hat[i] = std::exp(c * std::pow(res.t[i], beta) * std::exp((p - 1.0) * res.t[i] / 4.0));

    res.monotone = true;
    for (std::size_t i = 1; i < res.V.size(); ++i)
        if (res.V[i] < res.V[i - 1] - 1e-12) res.monotone = false;
    res.bounded_by_hat = true;
    for (std::size_t i = 0; i < res.V.size(); ++i)
        if (res.V[i] > res.V_hat[i] * (1.0 + 1e-12)) res.bounded_by_hat = false;
    return res;
}

} // namespace kslab
