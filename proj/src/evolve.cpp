#include "kslab/evolve.hpp"

#include "kslab/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace kslab {

void RunConfig::validate() const
{
    spec.validate(v0.grid());
    if (!(dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
    if (!(dt < t_end)) throw std::invalid_argument("run: dt must be smaller than t_end");
    if (start_step < 0 || double(start_step) * dt >= t_end)
        throw std::invalid_argument("run: start_step must sit before t_end");
    if (!(blowup_threshold > v0.sup_norm()))
        throw std::invalid_argument("run: blowup threshold must exceed sup|v0|");
    if (snapshot_every < 0) throw std::invalid_argument("run: snapshot_every must be >= 0");
    if (!v0.finite()) throw std::invalid_argument("run: v0 contains NaN/Inf");
}

const std::vector<double>& Trajectory::at(const std::string& name) const
{
    auto it = series.find(name);
    if (it == series.end()) throw std::invalid_argument("trajectory: missing monitor " + name);
    return it->second;
}

namespace {

bool parse_lp_monitor(const std::string& name, double& p)
{
    if (name.rfind("lp_", 0) != 0) return false;
    try {
        p = std::stod(name.substr(3));
    } catch (...) {
        return false;
    }
    return p >= 1.0;
}

const std::vector<std::string>& known_monitors()
{
    static const std::vector<std::string> k = {
        "sup_norm", "l2", "l2_bound_ratio", "hminus1",
        "energy_residual", "J_lambda", "energy", "enstrophy", "mean",
    };
    return k;
}

} // namespace

std::vector<std::string> canonical_monitor_order(const std::vector<std::string>& requested)
{
    std::vector<std::string> fixed = {"sup_norm", "l2", "l2_bound_ratio"};
    std::vector<std::string> out;
    auto want = [&](const std::string& n) {
        return std::find(requested.begin(), requested.end(), n) != requested.end();
    };
    for (auto& n : fixed)
        if (want(n)) out.push_back(n);
    std::vector<double> ps;
    for (auto& n : requested) {
        double p;
        if (parse_lp_monitor(n, p)) ps.push_back(p);
    }
    std::sort(ps.begin(), ps.end());
    for (double p : ps) {
        std::string name = "lp_" + [&] {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", p);
            return std::string(buf);
        }();
        out.push_back(name);
    }
    for (auto& n : {std::string("hminus1"), std::string("energy_residual"), std::string("J_lambda"),
                    std::string("energy"), std::string("enstrophy"), std::string("mean")})
        if (want(n)) out.push_back(n);
    // reject unknown names
    for (auto& n : requested) {
        double p;
        if (parse_lp_monitor(n, p)) continue;
        if (std::find(known_monitors().begin(), known_monitors().end(), n) == known_monitors().end())
            throw std::invalid_argument("unknown monitor: " + n);
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    return out;
}

namespace {

// Pentadiagonal Crank-Nicolson factorisation for the clamped Dirichlet IBVP.
struct DirichletCN {
    int n = 0;
    double hdt = 0.0;
    // banded storage of I - (dt/4) A over the interior unknowns 1..n-1,
    // A = -D^4 - D^2 with reflected ghosts; LU without pivoting.
    std::vector<std::array<double, 5>> lu;

    static std::vector<std::array<double, 5>> operator_rows(const Grid& g)
    {
        const int n = g.points[0];
        const double h = g.spacing(0);
        const double ih2 = 1.0 / (h * h), ih4 = ih2 * ih2;
        // row stencil of A v = -D4 v - D2 v at interior node i (1..n-1):
        // offsets -2..+2 with ghost folding at both ends
        std::vector<std::array<double, 5>> rows(std::size_t(n - 1));
        for (int i = 1; i < n; ++i) {
            std::array<double, 5> c{};
            // -D4: -(v_{i-2} -4v_{i-1} +6v_i -4v_{i+1} +v_{i+2})/h^4
            c[0] += -ih4;
            c[1] += 4 * ih4;
            c[2] += -6 * ih4;
            c[3] += 4 * ih4;
            c[4] += -ih4;
            // -D2: -(v_{i-1} -2v_i +v_{i+1})/h^2
            c[1] += -ih2;
            c[2] += 2 * ih2;
            c[3] += -ih2;
            // ghost folding: v_0 = v_n = 0; v_{-1} = v_1; v_{n+1} = v_{n-1}
            if (i == 1) { c[2] += c[0]; c[0] = 0.0; }       // v_{-1} -> v_1
            if (i == 2) { c[0] = 0.0; }                     // v_0 = 0 (coefficient dropped)
            if (i == 1) { c[1] = 0.0; }                     // v_0 = 0
            if (i == n - 1) { c[2] += c[4]; c[4] = 0.0; c[3] = 0.0; } // v_n=0, v_{n+1}->v_{n-1}
            if (i == n - 2) { c[4] = 0.0; }                 // v_n = 0
            rows[std::size_t(i - 1)] = c;
        }
        return rows;
    }

    DirichletCN(const Grid& g, double dt) : n(g.points[0]), hdt(dt)
    {
        auto rows = operator_rows(g);
        lu.resize(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::array<double, 5> c{};
            for (int o = 0; o < 5; ++o) c[std::size_t(o)] = -(dt / 4.0) * rows[r][std::size_t(o)];
            c[2] += 1.0;
            lu[r] = c;
        }
        // banded LU, bandwidth 2
        const int m = int(lu.size());
        for (int r = 0; r < m; ++r) {
            for (int k = std::max(0, r - 2); k < r; ++k) {
                const int off = r - k; // 1 or 2
                const double factor = lu[std::size_t(r)][std::size_t(2 - off)] / lu[std::size_t(k)][2];
                if (factor == 0.0) continue;
                lu[std::size_t(r)][std::size_t(2 - off)] = factor;
                for (int j = 1; j <= 2; ++j) {
                    const int col = 2 - off + j;
                    lu[std::size_t(r)][std::size_t(col)] -= factor * lu[std::size_t(k)][std::size_t(2 + j)];
                }
            }
        }
    }

    // solve (I - dt/4 A) x = (I + dt/4 A) v for the interior unknowns
    void half_step(const Grid& g, std::vector<double>& v) const
    {
        auto rows = operator_rows(g);
        const int m = n - 1;
        std::vector<double> rhsv(static_cast<std::size_t>(m));
        for (int i = 1; i < n; ++i) {
            const auto& c = rows[std::size_t(i - 1)];
            double s = v[std::size_t(i)];
            for (int o = -2; o <= 2; ++o) {
                const int j = i + o;
                if (j < 1 || j > n - 1) continue;
                s += (hdt / 4.0) * c[std::size_t(o + 2)] * v[std::size_t(j)];
            }
            rhsv[std::size_t(i - 1)] = s;
        }
        // forward substitution
        for (int r = 0; r < m; ++r)
            for (int off = 1; off <= 2; ++off)
                if (r - off >= 0) rhsv[std::size_t(r)] -= lu[std::size_t(r)][std::size_t(2 - off)] * rhsv[std::size_t(r - off)];
        // back substitution
        for (int r = m - 1; r >= 0; --r) {
            for (int off = 1; off <= 2; ++off)
                if (r + off < m) rhsv[std::size_t(r)] -= lu[std::size_t(r)][std::size_t(2 + off)] * rhsv[std::size_t(r + off)];
            rhsv[std::size_t(r)] /= lu[std::size_t(r)][2];
        }
        v[0] = 0.0;
        for (int i = 1; i < n; ++i) v[std::size_t(i)] = rhsv[std::size_t(i - 1)];
    }
};

class Stepper {
public:
    Stepper(const ModelSpec& spec, const Grid& grid, double dt)
        : spec_(periodic_equivalent(spec)), user_spec_(spec), dt_(dt)
    {
        navier_ = spec.family == Family::KseIbvp && grid.bc == BoundaryKind::Navier &&
                  grid.kind == Grid::Kind::Interval;
        dirichlet_ = spec.family == Family::KseIbvp && grid.bc == BoundaryKind::Dirichlet &&
                     grid.kind == Grid::Kind::Interval;
        if (dirichlet_) {
            cn_ = std::make_unique<DirichletCN>(grid, dt / 2.0);
            work_grid_ = grid;
            return;
        }
        work_grid_ = navier_ ? odd_extension(Field::zeros(grid)).grid() : grid;
        auto sym = linear_symbol_table(spec_, work_grid_);
        exp_half_.resize(sym.size());
        for (std::size_t i = 0; i < sym.size(); ++i) exp_half_[i] = std::exp(0.5 * dt * sym[i]);
    }

    const Grid& work_grid() const { return work_grid_; }
    bool uses_extension() const { return navier_; }

    Field lift(const Field& v) const { return navier_ ? odd_extension(v) : v; }
    Field lower(const Field& w, const Grid& g) const { return navier_ ? restrict_odd(w, g) : w; }

    // advance one step on the working grid; *mid receives the midpoint state
    Field advance(const Field& w, Field* mid = nullptr) const
    {
        if (dirichlet_) return advance_dirichlet(w, mid);
        Field a = apply_exp(w);
        Field k1 = nonlinear_term(spec_, a);
        Field amid = a;
        for (std::size_t i = 0; i < amid.size(); ++i) amid[i] += 0.5 * dt_ * k1[i];
        if (mid) *mid = amid;
        if (!amid.finite()) return amid;
        Field k2 = nonlinear_term(spec_, amid);
        Field b = a;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += dt_ * k2[i];
        return apply_exp(b);
    }

private:
    Field apply_exp(const Field& v) const
    {
        auto coeff = to_spectral(v);
        for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] *= exp_half_[i];
        return from_spectral(std::move(coeff), work_grid_);
    }

    Field advance_dirichlet(const Field& w, Field* mid) const
    {
        std::vector<double> v = w.values();
        cn_->half_step(work_grid_, v);
        Field a(work_grid_, std::move(v));
        Field k1 = kse_nl_fd(a);
        Field amid = a;
        for (std::size_t i = 0; i < amid.size(); ++i) amid[i] += 0.5 * dt_ * k1[i];
        amid[0] = 0.0;
        if (mid) *mid = amid;
        if (!amid.finite()) return amid;
        Field k2 = kse_nl_fd(amid);
        Field b = a;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += dt_ * k2[i];
        b[0] = 0.0;
        std::vector<double> out = b.values();
        cn_->half_step(work_grid_, out);
        return Field(work_grid_, std::move(out));
    }

    static Field kse_nl_fd(const Field& v)
    {
        Field w = v;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = v[i] * v[i];
        Field dw = derivative(w, 0, 1);
        dw *= 0.5;
        dw[0] = 0.0;
        return dw;
    }

    ModelSpec spec_;      // periodic working form
    ModelSpec user_spec_;
    double dt_;
    bool navier_ = false, dirichlet_ = false;
    Grid work_grid_;
    std::vector<double> exp_half_;
    std::unique_ptr<DirichletCN> cn_;
};

// g(v) for the energy-identity residual: ||D^{2l} v||^2 - ||D^l v||^2 in the
// Mkse scale (l = 1 reproduces the KSE identity).
double energy_identity_g(const ModelSpec& spec, const Field& v)
{
    const int l = spec.family == Family::KseIbvp ? 1 : spec.l;
    return deriv_energy(v, 2 * l) - deriv_energy(v, l);
}

bool supports_energy_identity(const ModelSpec& spec)
{
    return spec.family == Family::KseIbvp || spec.family == Family::Mkse;
}

} // namespace

Field step(const ModelSpec& spec, const Field& v, double dt)
{
    spec.validate(v.grid());
    if (!v.finite()) throw std::invalid_argument("step: input contains NaN/Inf");
    Stepper st(spec, v.grid(), dt);
    Field w = st.lift(v);
    Field out = st.advance(w);
    return st.lower(out, v.grid());
}

Trajectory integrate(const RunConfig& cfg)
{
    cfg.validate();
    const Grid& g = cfg.v0.grid();
    Trajectory traj;
    traj.monitor_names = canonical_monitor_order(cfg.monitors);
    for (auto& n : traj.monitor_names) traj.series[n];

    const bool want_energy_res =
        std::find(traj.monitor_names.begin(), traj.monitor_names.end(), "energy_residual") !=
        traj.monitor_names.end();
    if (want_energy_res && !supports_energy_identity(cfg.spec))
        throw std::invalid_argument("energy_residual monitor requires the kse_ibvp or mkse family");

    Stepper st(cfg.spec, g, cfg.dt);
    Field w = st.lift(cfg.v0);

    const double E0 = cfg.e0_override >= 0.0 ? cfg.e0_override : [&] {
        const double n = l2_norm(cfg.v0);
        return n * n;
    }();

    double E_prev = E0, g_prev = 0.0;
    if (want_energy_res) g_prev = energy_identity_g(cfg.spec, cfg.v0);

    // weight samples for the J_lambda monitor
    std::vector<double> jweight;
    if (std::find(traj.monitor_names.begin(), traj.monitor_names.end(), "J_lambda") !=
        traj.monitor_names.end()) {
        if (g.kind != Grid::Kind::Interval)
            throw std::invalid_argument("J_lambda monitor requires an interval grid");
        jweight.resize(g.size());
        const double L = g.extent[0];
        for (int i = 0; i < g.points[0]; ++i)
            jweight[std::size_t(i)] = std::pow(L - g.coord(0, i), cfg.capacity_lambda);
    }

    auto record = [&](double t, const Field& field, double e_res) {
        traj.times.push_back(t);
        for (auto& name : traj.monitor_names) {
            double val = 0.0;
            double p;
            if (name == "sup_norm") val = field.sup_norm();
            else if (name == "l2") val = l2_norm(field);
            else if (name == "l2_bound_ratio") {
                const double l2 = l2_norm(field);
                val = E0 > 0.0 ? (l2 * l2) / (E0 * std::exp(0.5 * t)) : 0.0;
            } else if (name == "hminus1") val = hminus1_norm(field);
            else if (name == "energy_residual") val = e_res;
            else if (name == "J_lambda") {
                double s = 0.0;
                for (std::size_t i = 0; i < field.size(); ++i) s += field[i] * jweight[i];
                val = s * g.cell_volume();
            } else if (name == "energy") {
                const double l2 = l2_norm(field);
                val = l2 * l2;
            } else if (name == "enstrophy") val = deriv_energy(field, 1);
            else if (name == "mean") val = field.mean();
            else if (parse_lp_monitor(name, p)) val = lp_norm(field, p);
            traj.series[name].push_back(val);
        }
    };

    record(double(cfg.start_step) * cfg.dt, cfg.v0, 0.0);
    traj.final_state = {cfg.v0};

    const long long nsteps = (long long)std::ceil(cfg.t_end / cfg.dt - 1e-9);
    for (long long k = cfg.start_step + 1; k <= nsteps; ++k) {
        const double t = double(k) * cfg.dt;
        Field mid_work = Field();
        Field w_new = st.advance(w, &mid_work);
        if (!w_new.finite()) {
            traj.outcome = Outcome::NumericalFailure;
            traj.t_low = double(k - 1) * cfg.dt;
            traj.t_high = t;
            return traj;
        }
        Field v_new = st.lower(w_new, g);
        double e_res = 0.0;
        if (want_energy_res) {
            const double l2 = l2_norm(v_new);
            const double E_new = l2 * l2;
            Field mid = st.lower(mid_work, g);
            const double g_mid = energy_identity_g(cfg.spec, mid);
            const double g_new = energy_identity_g(cfg.spec, v_new);
            // Simpson-weighted dissipation balance over the step
            e_res = std::abs((E_new - E_prev) / (2.0 * cfg.dt) +
                             (g_prev + 4.0 * g_mid + g_new) / 6.0);
            E_prev = E_new;
            g_prev = g_new;
        }
        record(t, v_new, e_res);
        traj.final_state = {v_new};
        if (v_new.sup_norm() >= cfg.blowup_threshold) {
            traj.outcome = Outcome::BlowUp;
            traj.t_low = double(k - 1) * cfg.dt;
            traj.t_high = t;
            return traj;
        }
        if (cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0) {
            traj.snapshots.push_back(v_new);
            traj.snapshot_times.push_back(t);
        }
        w = std::move(w_new);
    }
    traj.outcome = Outcome::Completed;
    return traj;
}

L2GrowthReport l2_growth_check(const Trajectory& traj, double tol)
{
    const auto& l2 = traj.at("l2");
    L2GrowthReport rep;
    if (l2.empty()) return rep;
    const double E0 = l2[0] * l2[0];
    if (E0 == 0.0) {
        rep.max_ratio = 0.0;
        rep.ok = true;
        return rep;
    }
    for (std::size_t i = 0; i < l2.size(); ++i) {
        const double ratio = (l2[i] * l2[i]) / (E0 * std::exp(0.5 * traj.times[i]));
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.t_at_max = traj.times[i];
        }
    }
    rep.ok = rep.max_ratio <= 1.0 + tol;
    return rep;
}

PicardResult picard_local_solve(const ModelSpec& spec, const Field& v0, double t, int iterations,
                                int subintervals, bool include_destabilizing)
{
    if (spec.family != Family::Mkse)
        throw std::invalid_argument("picard_local_solve: mkse family required");
    spec.validate(v0.grid());
    if (!(t > 0.0)) throw std::invalid_argument("picard_local_solve: t must be positive");
    const Grid& g = v0.grid();
    const int M = subintervals;
    const double ds = t / double(M);
    const int m = 2 * spec.l; // diffusion order of the heat kernel

    const std::size_t nmodes = g.size();
    auto v0hat = to_spectral(v0);

    // per-mode decay factors over lags 0..M and product-integration weights
    std::vector<double> q(nmodes);
    for (std::size_t i = 0; i < nmodes; ++i) q[i] = std::pow(xi_squared(g, i), double(m));
    std::vector<std::vector<double>> decay(std::size_t(M + 1), std::vector<double>(nmodes));
    for (int d = 0; d <= M; ++d)
        for (std::size_t i = 0; i < nmodes; ++i)
            decay[std::size_t(d)][i] = std::exp(-q[i] * double(d) * ds);
    // w[d][i] = int_{s in panel at lag d} e^{-q (s_j - s)} ds, left-endpoint rule
    std::vector<std::vector<double>> wgt(std::size_t(M + 1), std::vector<double>(nmodes, 0.0));
    for (int d = 1; d <= M; ++d)
        for (std::size_t i = 0; i < nmodes; ++i)
            wgt[std::size_t(d)][i] =
                q[i] == 0.0 ? ds : (decay[std::size_t(d - 1)][i] - decay[std::size_t(d)][i]) / q[i];

    // drift symbol (1/p) sum_k i d_k xi_k and destabilizing |xi|^{2l}
    std::vector<fft::cplx> drift_sym(nmodes);
    std::vector<double> destab(nmodes);
    {
        const int n0 = g.points[0];
        const int n1 = g.dim > 1 ? g.points[1] : 1;
        const int n2 = g.dim > 2 ? g.points[2] : 1;
        std::size_t flat = 0;
        for (int k0 = 0; k0 < n0; ++k0)
            for (int k1 = 0; k1 < n1; ++k1)
                for (int k2 = 0; k2 < n2; ++k2, ++flat) {
                    const int kk[3] = {k0, k1, k2};
                    double dot = 0.0;
                    for (int a = 0; a < g.dim; ++a) {
                        const int n = g.points[std::size_t(a)];
                        if (kk[a] == n / 2) { dot = 0.0; break; }
                        dot += spec.drift_coeff(a) * wavenumber(g, a, kk[a]);
                    }
                    drift_sym[flat] = fft::cplx(0.0, dot / spec.p);
                    destab[flat] = include_destabilizing ? std::pow(xi_squared(g, flat), double(spec.l)) : 0.0;
                }
    }

    // iterate the whole trajectory on the time grid
    std::vector<std::vector<fft::cplx>> traj(std::size_t(M + 1));
    for (int j = 0; j <= M; ++j) {
        traj[std::size_t(j)].resize(nmodes);
        for (std::size_t i = 0; i < nmodes; ++i)
            traj[std::size_t(j)][i] = v0hat[i] * decay[std::size_t(j)][i];
    }

    PicardResult result;
    std::vector<std::vector<fft::cplx>> integrand(static_cast<std::size_t>(M));
    Field prev_final = from_spectral(traj[std::size_t(M)], g);
    for (int it = 0; it < iterations; ++it) {
        // integrand at left endpoints: |xi|^{2l} vhat + drift_sym * FT(|v|^p)
        for (int j = 0; j < M; ++j) {
            Field vj = from_spectral(traj[std::size_t(j)], g);
            Field vd = dealias(vj);
            Field w = vd;
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] = vd[i] == 0.0 ? 0.0 : std::pow(std::abs(vd[i]), spec.p);
            auto what = to_spectral(dealias(w));
            auto& row = integrand[std::size_t(j)];
            row.resize(nmodes);
            for (std::size_t i = 0; i < nmodes; ++i)
                row[i] = destab[i] * traj[std::size_t(j)][i] + drift_sym[i] * what[i];
        }
        std::vector<std::vector<fft::cplx>> next(std::size_t(M + 1));
        next[0] = traj[0];
        for (int j = 1; j <= M; ++j) {
            auto& acc = next[std::size_t(j)];
            acc.resize(nmodes);
            for (std::size_t i = 0; i < nmodes; ++i) acc[i] = v0hat[i] * decay[std::size_t(j)][i];
            for (int i0 = 0; i0 < j; ++i0) {
                const auto& row = integrand[std::size_t(i0)];
                const auto& wv = wgt[std::size_t(j - i0)];
                for (std::size_t i = 0; i < nmodes; ++i) acc[i] += wv[i] * row[i];
            }
        }
        traj = std::move(next);
        Field cur_final = from_spectral(traj[std::size_t(M)], g);
        double diff = 0.0;
        for (std::size_t i = 0; i < cur_final.size(); ++i)
            diff = std::max(diff, std::abs(cur_final[i] - prev_final[i]));
        result.diffs.push_back(diff);
        prev_final = cur_final;
        if (!cur_final.finite()) {
            result.diverged = true;
            break;
        }
    }
    if (result.diffs.size() >= 3) {
        const std::size_t n = result.diffs.size();
        if (result.diffs[n - 1] > 2.0 * result.diffs[n - 2] &&
            result.diffs[n - 2] > 2.0 * result.diffs[n - 3] && result.diffs[n - 1] > 1e-8)
            result.diverged = true;
    }
    result.v = prev_final;
    return result;
}

} // namespace kslab
