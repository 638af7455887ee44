#include "kslab/flows.hpp"

#include "kslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace kslab {

namespace {

void require_flow_grid(const VectorField& u)
{
    if (u.empty()) throw std::invalid_argument("flow: empty vector field");
    const Grid& g = u[0].grid();
    if (g.kind != Grid::Kind::Periodic) throw std::invalid_argument("flow: periodic grid required");
    if (int(u.size()) != g.dim) throw std::invalid_argument("flow: one component per axis required");
    for (const Field& f : u)
        if (!f.grid().same_layout(g)) throw std::invalid_argument("flow: component grid mismatch");
}

std::vector<std::vector<fft::cplx>> to_spectral_all(const VectorField& u)
{
    std::vector<std::vector<fft::cplx>> c;
    c.reserve(u.size());
    for (const Field& f : u) c.push_back(to_spectral(f));
    return c;
}

void project_spectral(std::vector<std::vector<fft::cplx>>& c, const Grid& g)
{
    const int n0 = g.points[0];
    const int n1 = g.dim > 1 ? g.points[1] : 1;
    const int n2 = g.dim > 2 ? g.points[2] : 1;
    std::size_t flat = 0;
    for (int k0 = 0; k0 < n0; ++k0)
        for (int k1 = 0; k1 < n1; ++k1)
            for (int k2 = 0; k2 < n2; ++k2, ++flat) {
                const int kk[3] = {k0, k1, k2};
                double xi[3] = {0, 0, 0};
                double x2 = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    xi[a] = wavenumber(g, a, kk[a]);
                    x2 += xi[a] * xi[a];
                }
                if (x2 == 0.0) continue;
                fft::cplx dot(0.0, 0.0);
                for (int a = 0; a < g.dim; ++a) dot += xi[a] * c[std::size_t(a)][flat];
                for (int a = 0; a < g.dim; ++a) c[std::size_t(a)][flat] -= xi[a] * dot / x2;
            }
}

// dealiased (v.grad)v, no projection
VectorField advection(const VectorField& v)
{
    const Grid& g = v[0].grid();
    const int d = g.dim;
    VectorField vd(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) vd[std::size_t(a)] = dealias(v[std::size_t(a)]);
    VectorField out(std::size_t(d), Field::zeros(g));
    for (int i = 0; i < d; ++i) {
        Field acc = Field::zeros(g);
        for (int j = 0; j < d; ++j) {
            Field dj = derivative(vd[std::size_t(i)], j, 1);
            for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += vd[std::size_t(j)][s] * dj[s];
        }
        out[std::size_t(i)] = dealias(acc);
    }
    return out;
}

VectorField projected_advection(const VectorField& v)
{
    VectorField adv = advection(v);
    auto c = to_spectral_all(adv);
    project_spectral(c, v[0].grid());
    VectorField out(adv.size());
    for (std::size_t a = 0; a < adv.size(); ++a)
        out[a] = from_spectral(std::move(c[a]), v[0].grid());
    return out;
}

double vector_sup(const VectorField& v)
{
    double sup = 0.0;
    for (std::size_t s = 0; s < v[0].size(); ++s) {
        double mag2 = 0.0;
        for (const Field& f : v) mag2 += f[s] * f[s];
        sup = std::max(sup, mag2);
    }
    return std::sqrt(sup);
}

double vector_lp(const VectorField& v, double p)
{
    double acc = 0.0;
    for (std::size_t s = 0; s < v[0].size(); ++s) {
        double mag2 = 0.0;
        for (const Field& f : v) mag2 += f[s] * f[s];
        acc += std::pow(mag2, 0.5 * p);
    }
    return std::pow(acc * v[0].grid().cell_volume(), 1.0 / p);
}

double flow_energy(const VectorField& v)
{
    double e = 0.0;
    for (const Field& f : v) {
        const double n = l2_norm(f);
        e += n * n;
    }
    return e;
}

double flow_dissipation(const VectorField& v, int order)
{
    double e = 0.0;
    for (const Field& f : v) e += deriv_energy(f, order);
    return e;
}

bool all_finite(const VectorField& v)
{
    for (const Field& f : v)
        if (!f.finite()) return false;
    return true;
}

} // namespace

void FlowState::validate() const
{
    require_flow_grid(v);
    if (m < 1) throw std::invalid_argument("flow: m must be >= 1");
    const double scale = std::max(1.0, vector_sup(v));
    if (divergence(v).sup_norm() > 1e-8 * scale)
        throw std::invalid_argument("flow: velocity is not solenoidal");
    if (!all_finite(v)) throw std::invalid_argument("flow: velocity contains NaN/Inf");
}

VectorField leray_project(const VectorField& u)
{
    require_flow_grid(u);
    auto c = to_spectral_all(u);
    project_spectral(c, u[0].grid());
    VectorField out(u.size());
    for (std::size_t a = 0; a < u.size(); ++a)
        out[a] = from_spectral(std::move(c[a]), u[0].grid());
    return out;
}

Field divergence(const VectorField& u)
{
    require_flow_grid(u);
    Field out = Field::zeros(u[0].grid());
    for (int a = 0; a < u[0].grid().dim; ++a) {
        Field da = derivative(u[std::size_t(a)], a, 1);
        out += da;
    }
    return out;
}

VectorField rhs_flow(const FlowState& state)
{
    state.validate();
    const Grid& g = state.grid();
    VectorField adv = projected_advection(state.v);
    VectorField out(adv.size());
    for (std::size_t a = 0; a < adv.size(); ++a) {
        Field lin = neg_laplacian_power(state.v[a], double(state.m)); // zero mode stays 0
        Field r = Field::zeros(g);
        for (std::size_t s = 0; s < r.size(); ++s) r[s] = -lin[s] - adv[a][s];
        out[a] = r;
    }
    return out;
}

void FlowConfig::validate() const
{
    state0.validate();
    if (!(dt > 0.0) || !(dt < t_end)) throw std::invalid_argument("flow: need 0 < dt < t_end");
    if (!(blowup_threshold > vector_sup(state0.v)))
        throw std::invalid_argument("flow: blowup threshold must exceed sup|v0|");
}

namespace {

// Spectral-state Strang stepper: the velocity lives as Fourier coefficients
// between steps; only the advection products and monitor reads drop to
// physical space.
class FlowStepper {
public:
    using Coeffs = std::vector<std::vector<fft::cplx>>;

    FlowStepper(const Grid& g, int m, double dt) : grid_(g), dt_(dt)
    {
        const std::size_t n = g.size();
        exp_half_.resize(n);
        mask_.resize(n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            exp_half_[i] = std::exp(-std::pow(xi_squared(g, i), double(m)) * 0.5 * dt);
        // 2/3-rule mask and per-axis wavenumbers for the advection gradients
        const int d = g.dim;
        xi_.assign(std::size_t(d), std::vector<double>(n));
        const int n0 = g.points[0];
        const int n1 = d > 1 ? g.points[1] : 1;
        const int n2 = d > 2 ? g.points[2] : 1;
        std::size_t flat = 0;
        for (int k0 = 0; k0 < n0; ++k0)
            for (int k1 = 0; k1 < n1; ++k1)
                for (int k2 = 0; k2 < n2; ++k2, ++flat) {
                    const int kk[3] = {k0, k1, k2};
                    for (int a = 0; a < d; ++a) {
                        const int na = g.points[std::size_t(a)];
                        const int kp = kk[a] <= na / 2 ? kk[a] : na - kk[a];
                        if (kp > na / 3) mask_[flat] = 0.0;
                        xi_[std::size_t(a)][flat] =
                            (kk[a] == na / 2) ? 0.0 : wavenumber(g, a, kk[a]);
                    }
                }
    }

    Coeffs lift(const VectorField& v) const
    {
        Coeffs c = to_spectral_all(v);
        project_spectral(c, grid_);
        return c;
    }

    VectorField lower(const Coeffs& c) const
    {
        VectorField out(c.size());
        for (std::size_t a = 0; a < c.size(); ++a) out[a] = from_spectral(c[a], grid_);
        return out;
    }

    bool advance(Coeffs& c, Coeffs* mid = nullptr) const
    {
        const int d = grid_.dim;
        const std::size_t n = grid_.size();
        for (int a = 0; a < d; ++a)
            for (std::size_t i = 0; i < n; ++i) c[std::size_t(a)][i] *= exp_half_[i];
        Coeffs k1 = advection_spectral(c);
        Coeffs cmid = c;
        for (int a = 0; a < d; ++a)
            for (std::size_t i = 0; i < n; ++i) cmid[std::size_t(a)][i] -= 0.5 * dt_ * k1[std::size_t(a)][i];
        if (mid) *mid = cmid;
        if (!coeffs_finite(cmid)) { c = cmid; return false; }
        Coeffs k2 = advection_spectral(cmid);
        for (int a = 0; a < d; ++a)
            for (std::size_t i = 0; i < n; ++i) c[std::size_t(a)][i] -= dt_ * k2[std::size_t(a)][i];
        project_spectral(c, grid_);
        for (int a = 0; a < d; ++a)
            for (std::size_t i = 0; i < n; ++i) c[std::size_t(a)][i] *= exp_half_[i];
        return coeffs_finite(c);
    }

private:
    static bool coeffs_finite(const Coeffs& c)
    {
        for (const auto& comp : c)
            for (const fft::cplx& z : comp)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    // P(v.grad)v from spectral input, dealiased, spectral output
    Coeffs advection_spectral(const Coeffs& c) const
    {
        const int d = grid_.dim;
        const std::size_t n = grid_.size();
        // physical dealiased components
        std::vector<std::vector<double>> vphys(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            auto tmp = c[std::size_t(a)];
            for (std::size_t i = 0; i < n; ++i) tmp[i] *= mask_[i];
            vphys[std::size_t(a)] = from_spectral(std::move(tmp), grid_).values();
        }
        Coeffs out(static_cast<std::size_t>(d));
        std::vector<double> acc(n);
        for (int i = 0; i < d; ++i) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int j = 0; j < d; ++j) {
                auto gj = c[std::size_t(i)];
                for (std::size_t s = 0; s < n; ++s)
                    gj[s] *= fft::cplx(0.0, xi_[std::size_t(j)][s] * mask_[s]);
                std::vector<double> dphys = from_spectral(std::move(gj), grid_).values();
                const auto& vj = vphys[std::size_t(j)];
                for (std::size_t s = 0; s < n; ++s) acc[s] += vj[s] * dphys[s];
            }
            out[std::size_t(i)] = to_spectral(Field(grid_, acc));
            for (std::size_t s = 0; s < n; ++s) out[std::size_t(i)][s] *= mask_[s];
        }
        project_spectral(out, grid_);
        return out;
    }

    Grid grid_;
    double dt_ = 0.0;
    std::vector<double> exp_half_;
    std::vector<double> mask_;
    std::vector<std::vector<double>> xi_;
};

} // namespace

FlowState flow_step(const FlowState& state, double dt)
{
    state.validate();
    FlowStepper st(state.grid(), state.m, dt);
    auto c = st.lift(state.v);
    st.advance(c);
    FlowState out;
    out.v = st.lower(c);
    out.m = state.m;
    out.time = state.time + dt;
    return out;
}

Trajectory integrate_flow(const FlowConfig& cfg)
{
    cfg.validate();
    const Grid& g = cfg.state0.grid();
    Trajectory traj;
    traj.monitor_names = canonical_monitor_order(cfg.monitors);
    for (auto& n : traj.monitor_names) traj.series[n];
    traj.seed = cfg.seed;

    const bool want_energy_res =
        std::count(traj.monitor_names.begin(), traj.monitor_names.end(), "energy_residual") > 0;

    FlowStepper st(g, cfg.state0.m, cfg.dt);
    auto coeffs = st.lift(cfg.state0.v);
    double E_prev = flow_energy(cfg.state0.v);
    double g_prev = flow_dissipation(cfg.state0.v, cfg.state0.m);

    auto record = [&](double t, const VectorField& field, double e_res) {
        traj.times.push_back(t);
        for (auto& name : traj.monitor_names) {
            double val = 0.0;
            double p = 0.0;
            if (name == "sup_norm") val = vector_sup(field);
            else if (name == "l2") val = std::sqrt(flow_energy(field));
            else if (name == "energy") val = flow_energy(field);
            else if (name == "enstrophy") val = flow_dissipation(field, 1);
            else if (name == "energy_residual") val = e_res;
            else if (name == "mean") val = field[0].mean();
            else if (name.rfind("lp_", 0) == 0 && (p = std::stod(name.substr(3))) >= 1.0)
                val = vector_lp(field, p);
            else if (name == "l2_bound_ratio" || name == "hminus1" || name == "J_lambda")
                throw std::invalid_argument("monitor " + name + " is not defined for flow runs");
            traj.series[name].push_back(val);
        }
    };
    record(0.0, cfg.state0.v, 0.0);
    traj.final_state = cfg.state0.v;

    const long long nsteps = (long long)std::ceil(cfg.t_end / cfg.dt - 1e-9);
    for (long long k = 1; k <= nsteps; ++k) {
        const double t = double(k) * cfg.dt;
        FlowStepper::Coeffs mid;
        const bool ok = st.advance(coeffs, want_energy_res ? &mid : nullptr);
        if (!ok) {
            traj.outcome = Outcome::NumericalFailure;
            traj.t_low = double(k - 1) * cfg.dt;
            traj.t_high = t;
            return traj;
        }
        VectorField v_new = st.lower(coeffs);
        if (!all_finite(v_new)) {
            traj.outcome = Outcome::NumericalFailure;
            traj.t_low = double(k - 1) * cfg.dt;
            traj.t_high = t;
            return traj;
        }
        double e_res = 0.0;
        if (want_energy_res) {
            const double E_new = flow_energy(v_new);
            const double g_mid = flow_dissipation(st.lower(mid), cfg.state0.m);
            const double g_new = flow_dissipation(v_new, cfg.state0.m);
            e_res = std::abs((E_new - E_prev) / (2.0 * cfg.dt) +
                             (g_prev + 4.0 * g_mid + g_new) / 6.0);
            E_prev = E_new;
            g_prev = g_new;
        }
        record(t, v_new, e_res);
        traj.final_state = v_new;
        if (vector_sup(v_new) >= cfg.blowup_threshold) {
            traj.outcome = Outcome::BlowUp;
            traj.t_low = double(k - 1) * cfg.dt;
            traj.t_high = t;
            return traj;
        }
        if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) {
            for (const Field& f : v_new) traj.snapshots.push_back(f);
            traj.snapshot_times.push_back(t);
        }
    }
    traj.outcome = Outcome::Completed;
    return traj;
}

RegularityReport regularity_monitor(const Trajectory& traj, double p, int m, int N, double T)
{
    RegularityReport rep;
    char buf[32];
    std::snprintf(buf, sizeof buf, "lp_%g", p);
    const auto& lp = traj.at(buf);
    for (double x : lp) rep.sup_lp = std::max(rep.sup_lp, x);
    rep.p0 = double(N) / double(2 * m - 1);
    rep.p_exceeds_p0 = p > rep.p0;

    // running Serrin integral (1/(T-t)) int_t^T int |v|^3 from the lp_3 series
    const auto& l3 = traj.at("lp_3");
    const auto& ts = traj.times;
    std::vector<double> cum(ts.size(), 0.0); // int_0^{t_i} |v|_3^3
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double a = std::pow(l3[i - 1], 3.0), b = std::pow(l3[i], 3.0);
        cum[i] = cum[i - 1] + 0.5 * (a + b) * (ts[i] - ts[i - 1]);
    }
    const double total = cum.back();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] >= T) break;
        rep.serrin_t.push_back(ts[i]);
        rep.serrin_val.push_back((total - cum[i]) / (T - ts[i]));
    }
    return rep;
}

Field recover_pressure(const FlowState& state)
{
    state.validate();
    const Grid& g = state.grid();
    VectorField adv = advection(state.v);
    Field div_adv = divergence(adv);
    auto c = to_spectral(div_adv);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double x2 = xi_squared(g, i);
        c[i] = x2 == 0.0 ? fft::cplx(0.0, 0.0) : c[i] / x2;
    }
    return from_spectral(std::move(c), g);
}

VectorField taylor_green(const Grid& g)
{
    if (g.dim != 2) throw std::invalid_argument("taylor_green: 2d grid required");
    VectorField v(2);
    v[0] = Field::sample2(g, [](double x, double y) { return std::cos(x) * std::sin(y); });
    v[1] = Field::sample2(g, [](double x, double y) { return -std::sin(x) * std::cos(y); });
    return v;
}

VectorField random_solenoidal(const Grid& g, std::uint64_t seed, int kband, double amplitude)
{
    std::mt19937_64 rng(seed);
    auto unif = [&] { return 2.0 * double(rng() >> 11) * 0x1p-53 - 1.0; };
    VectorField u(std::size_t(g.dim));
    for (int a = 0; a < g.dim; ++a) {
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
                    for (int ax = 0; ax < g.dim; ++ax) {
                        const int n = g.points[std::size_t(ax)];
                        const int kp = kk[ax] <= n / 2 ? kk[ax] : n - kk[ax];
                        if (kp > kband) in_band = false;
                        ksum += kp;
                    }
                    if (!in_band || ksum == 0) continue;
                    c[flat] = fft::cplx(unif(), unif());
                }
        u[std::size_t(a)] = from_spectral(std::move(c), g);
    }
    // hermitian symmetry was not enforced above; taking the real part in
    // from_spectral already realises the field, now project and normalise
    VectorField v = leray_project(u);
    const double sup = vector_sup(v);
    if (sup > 0.0)
        for (Field& f : v) f *= amplitude / sup;
    return v;
}

} // namespace kslab
