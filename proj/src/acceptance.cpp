#include "kslab/acceptance.hpp"

#include "kslab/capacity.hpp"
#include "kslab/evolve.hpp"
#include "kslab/flows.hpp"
#include "kslab/kernels.hpp"
#include "kslab/norms.hpp"
#include "kslab/rescale.hpp"
#include "kslab/spectral.hpp"
#include "kslab/volterra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace kslab {

namespace {

namespace nums = std::numbers;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why)
    {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
    void note(const std::string& info)
    {
        if (pass && detail.empty()) detail = info;
    }
};

// ---- 1. energy identity --------------------------------------------------

RunConfig kse_ibvp_config(double dt, double t_end)
{
    RunConfig rc;
    rc.spec.family = Family::KseIbvp;
    rc.v0 = Field::sample(Grid::interval(256, 4.0, BoundaryKind::Navier),
                          [](double x) { return std::sin(nums::pi * x / 4.0); });
    rc.dt = dt;
    rc.t_end = t_end;
    rc.monitors = {"l2", "energy_residual"};
    return rc;
}

Check criterion_energy_identity()
{
    Check c;
    auto max_relative_residual = [&](double dt) {
        Trajectory t = integrate(kse_ibvp_config(dt, 1.0));
        c.require(t.outcome == Outcome::Completed, "run did not complete");
        const auto& res = t.at("energy_residual");
        const auto& l2 = t.at("l2");
        double worst = 0.0, worst_abs = 0.0;
        for (std::size_t i = 1; i < res.size(); ++i) {
            const double E = l2[i] * l2[i];
            worst = std::max(worst, res[i] / std::max(1.0, E));
            worst_abs = std::max(worst_abs, res[i]);
        }
        return std::pair{worst, worst_abs};
    };
    auto [rel1, abs1] = max_relative_residual(1e-4);
    c.require(rel1 <= 1e-6, fmt("residual %.3e exceeds 1e-6 * max(1,E)", rel1));
    auto [rel2, abs2] = max_relative_residual(5e-5);
    c.require(abs2 <= 0.55 * abs1, fmt("halving dt: residual %.3e vs %.3e", abs2, abs1));
    c.note(fmt("max residual/max(1,E) %.2e; halving ratio %.2f", rel1, abs2 / abs1));
    return c;
}

// ---- 2. exponential L2 bound ----------------------------------------------

Check criterion_l2_bound()
{
    Check c;
    double worst = 0.0;
    Grid g = Grid::interval(256, 4.0, BoundaryKind::Navier);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RunConfig rc;
        rc.spec.family = Family::KseIbvp;
        rc.v0 = random_band_limited_field(g, seed, 8, 1.0);
        rc.dt = 1e-3;
        rc.t_end = 5.0;
        rc.monitors = {"l2"};
        Trajectory t = integrate(rc);
        c.require(t.outcome == Outcome::Completed, fmt("seed %g did not complete", double(seed)));
        L2GrowthReport rep = l2_growth_check(t, 1e-4);
        worst = std::max(worst, rep.max_ratio);
        c.require(rep.max_ratio <= 1.0 + 1e-4,
                  fmt("seed %g: E(t)/(E(0)e^{t/2}) = %.6f", double(seed), rep.max_ratio));
    }
    c.note(fmt("max ratio over 20 seeds %.8f", worst));
    return c;
}

// ---- 3. fundamental solution ----------------------------------------------

Check criterion_kernel()
{
    Check c;
    Kernel k1 = fundamental_solution(1, 1);
    const Grid& g = k1.profile.grid();
    double sup = 0.0;
    for (int i = 0; i < g.points[0]; ++i) {
        const double y = g.coord(0, i);
        sup = std::max(sup, std::abs(k1.profile[std::size_t(i)] -
                                     std::exp(-0.25 * y * y) / std::sqrt(4.0 * nums::pi)));
    }
    c.require(sup <= 1e-10, fmt("gaussian sup-distance %.3e", sup));

    double worst_mass = 0.0;
    for (int m : {1, 2, 3})
        for (int dim : {1, 2}) {
            Kernel k = fundamental_solution(m, dim);
            worst_mass = std::max(worst_mass, std::abs(k.mass - 1.0));
        }
    c.require(worst_mass <= 1e-8, fmt("kernel mass error %.3e", worst_mass));

    double worst_res = 0.0;
    for (int m : {1, 2, 3}) {
        Kernel k = fundamental_solution(m, 1);
        worst_res = std::max(worst_res, kernel_residual(k));
    }
    for (int m : {1, 2}) {
        Kernel k = fundamental_solution(m, 2);
        worst_res = std::max(worst_res, kernel_residual(k));
    }
    c.require(worst_res <= 1e-6, fmt("kernel operator residual %.3e", worst_res));

    double worst_alpha = 0.0;
    for (int m : {2, 3}) {
        Kernel k = fundamental_solution(m, 1);
        DecayFit fit = fit_decay(k);
        const double expect = 2.0 * m / (2.0 * m - 1.0);
        worst_alpha = std::max(worst_alpha, std::abs(fit.alpha - expect) / expect);
        c.require(std::abs(fit.alpha - expect) <= 0.05 * expect,
                  fmt("m=%g: fitted alpha %.4f", double(m), fit.alpha));
    }
    c.note(fmt("gaussian %.1e, mass %.1e, residual %.1e", sup, worst_mass, worst_res) +
           fmt(", alpha within %.1f%%", 100.0 * worst_alpha));
    return c;
}

// ---- 4. blow-up closed forms vs oracle -------------------------------------

Check criterion_riccati()
{
    Check c;
    struct Case {
        BlowupCase kind;
        double J0, kappa, a, expected_T;
        const char* name;
    };
    const Case cases[] = {
        {BlowupCase::Strict, 0.0, 1.0, 1.0, nums::pi / 2.0, "strict"},
        {BlowupCase::Zero, 1.0, 2.0, 0.0, 0.25, "zero"},
        {BlowupCase::Negative, 2.0, 1.0, 1.0, 0.5 * std::log(3.0), "negative"},
    };
    double worst = 0.0;
    for (const Case& cs : cases) {
        const double T = closed_form_t_infinity(cs.kind, cs.J0, cs.kappa, cs.a);
        c.require(std::abs(T - cs.expected_T) <= 1e-12 * std::max(1.0, cs.expected_T),
                  std::string(cs.name) + ": closed-form bound mismatch");
        std::vector<double> grid;
        for (int i = 0; i <= 60; ++i) grid.push_back(0.9 * T * double(i) / 60.0);
        RiccatiResult r = riccati_oracle(cs.kind, cs.J0, cs.kappa, cs.a, grid, T);
        c.require(r.J.size() == grid.size(), "oracle fell short of 0.9 T");
        for (std::size_t i = 0; i < r.J.size(); ++i) {
            const double exact = closed_form_envelope(cs.kind, cs.J0, cs.kappa, cs.a, grid[i]);
            const double rel = std::abs(r.J[i] - exact) / std::max(1.0, std::abs(exact));
            worst = std::max(worst, rel);
        }
        c.require(worst <= 1e-8, fmt("oracle deviates by %.3e", worst));
        c.require(r.diverged && r.t_div_low <= T * (1.0 + 1e-9),
                  std::string(cs.name) + ": oracle did not diverge by the bound");
    }
    c.note(fmt("worst closed-form deviation %.2e", worst));
    return c;
}

// ---- 5. volterra -----------------------------------------------------------

Check criterion_volterra()
{
    Check c;
    VolterraResult res = volterra_bound(2.0, 2, 1, 3.0);
    c.require(res.beta == 0.625, fmt("beta = %.17g != 5/8", res.beta));
    c.require(!res.supercritical, "flagged supercritical");
    c.require(res.monotone, "V not monotone");
    c.require(res.bounded_by_hat, "V exceeds V_hat");
    c.note(fmt("V(3) = %.4g <= V_hat(3) = %.4g", res.V.back(), res.V_hat.back()));
    return c;
}

// ---- 6. critical exponents --------------------------------------------------

Check criterion_exponents()
{
    Check c;
    ExponentReport a = critical_exponents(2, 1, 2.0);
    c.require(a.p0_mkse == 7.0, "p0(m=2,N=1) != 7");
    c.require(a.gamma0.has_value() && *a.gamma0 == 0.3, "gamma0 != 0.3");
    for (int N = 1; N <= 8; ++N) {
        const bool subcritical = 2.0 < critical_exponents(2, N).p0_mkse;
        c.require(subcritical == (N < 6), fmt("p=2 subcritical flag wrong at N=%g", double(N)));
    }
    ExponentReport s = critical_exponents(2, 5);
    c.require(s.p_sobolev.has_value() && *s.p_sobolev == 9.0, "p_S(m=2,N=5) != 9");
    ExponentReport b = critical_exponents(1, 3);
    c.require(b.p0_burnett == 3.0, "burnett p0(m=1,N=3) != 3");
    ExponentReport cr = critical_exponents(1, 2);
    c.require(cr.burnett_range == BurnettRange::CriticalIncluded,
              "N=2, m=1 not flagged critical-included");
    c.note("p0 = 7, p_S = 9, burnett p0 = 3, N=2 critical-included");
    return c;
}

// ---- 7. leray projector ------------------------------------------------------

Check criterion_leray()
{
    Check c;
    Grid g = Grid::periodic({128, 128}, {2.0 * nums::pi, 2.0 * nums::pi});
    double worst_idem = 0.0, worst_grad = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        VectorField u(2);
        u[0] = random_band_limited_field(g, 2 * seed, 10, 1.0, false);
        u[1] = random_band_limited_field(g, 2 * seed + 1, 10, 1.0, false);
        VectorField once = leray_project(u);
        VectorField twice = leray_project(once);
        for (int a = 0; a < 2; ++a)
            for (std::size_t i = 0; i < once[0].size(); ++i)
                worst_idem = std::max(worst_idem,
                                      std::abs(once[std::size_t(a)][i] - twice[std::size_t(a)][i]));

        Field phi = random_band_limited_field(g, seed + 7777, 10, 1.0, false);
        VectorField grad(2);
        grad[0] = derivative(phi, 0, 1);
        grad[1] = derivative(phi, 1, 1);
        VectorField pg = leray_project(grad);
        worst_grad = std::max({worst_grad, pg[0].sup_norm(), pg[1].sup_norm()});
    }
    c.require(worst_idem <= 1e-13, fmt("idempotence defect %.3e", worst_idem));
    c.require(worst_grad <= 1e-13, fmt("gradient leak %.3e", worst_grad));
    c.note(fmt("idempotence %.1e, gradient annihilation %.1e", worst_idem, worst_grad));
    return c;
}

// ---- 8. taylor-green regression ----------------------------------------------

Check criterion_taylor_green()
{
    Check c;
    Grid g = Grid::periodic({64, 64}, {2.0 * nums::pi, 2.0 * nums::pi});
    for (int m : {1, 2}) {
        FlowConfig cfg;
        cfg.state0.v = taylor_green(g);
        cfg.state0.m = m;
        cfg.dt = 1e-3;
        cfg.t_end = 1.0;
        cfg.monitors = {"sup_norm", "energy", "energy_residual"};
        Trajectory t = integrate_flow(cfg);
        c.require(t.outcome == Outcome::Completed, "flow did not complete");
        const double rate = m == 1 ? 2.0 : 4.0;
        const double err = std::abs(t.at("sup_norm").back() - std::exp(-rate));
        c.require(err <= 1e-8, fmt("m=%g decay error %.3e", double(m), err));
        const auto& res = t.at("energy_residual");
        const auto& E = t.at("energy");
        for (std::size_t i = 1; i < res.size(); ++i)
            c.require(res[i] <= 1e-6 * std::max(1.0, E[i]),
                      fmt("m=%g residual %.3e at row %g", double(m), res[i], double(i)));
    }
    c.note("sup-norm matches e^{-2t} and e^{-4t} to 1e-8; energy law holds per step");
    return c;
}

// ---- 9. subcritical mkse uniform bound ----------------------------------------

Check criterion_mkse_bound()
{
    Check c;
    Grid g = Grid::periodic({128}, {2.0 * nums::pi});
    const double gamma0 = 0.3;
    double worst_margin = 1e300;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RunConfig rc;
        rc.spec.family = Family::Mkse;
        rc.spec.l = 1;
        rc.spec.p = 2.0;
        rc.v0 = random_band_limited_field(g, seed, 8, 1.0, true, 1.0); // unit L2 norm
        rc.dt = 2e-3;
        rc.t_end = 20.0;
        rc.monitors = {"sup_norm"};
        Trajectory t = integrate(rc);
        c.require(t.outcome == Outcome::Completed, fmt("seed %g blew up or failed", double(seed)));
        if (t.outcome != Outcome::Completed) continue;
        const auto& sup = t.at("sup_norm");
        double C0 = 0.0;
        std::size_t i = 0;
        for (; i < sup.size() && t.times[i] <= 1.0 + 1e-12; ++i)
            C0 = std::max(C0, sup[i] * std::exp(-gamma0 * t.times[i]));
        for (std::size_t j = 0; j < sup.size(); ++j) {
            const double bound = C0 * std::exp(gamma0 * t.times[j]);
            worst_margin = std::min(worst_margin, bound - sup[j]);
            c.require(sup[j] <= bound * (1.0 + 1e-9),
                      fmt("seed %g: sup %.4f over bound %.4f", double(seed), sup[j], bound));
        }
    }
    c.note(fmt("20 seeds complete; smallest bound margin %.3g", worst_margin));
    return c;
}

// ---- 10. H^-1 monotonicity ------------------------------------------------------

Check criterion_hminus1()
{
    Check c;
    Grid g = Grid::periodic({128}, {2.0 * nums::pi});
    double worst_rate = -1e300;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RunConfig rc;
        rc.spec.family = Family::Dispersion3;
        rc.spec.m = 2;
        rc.spec.p = 2.0;
        rc.v0 = random_band_limited_field(g, seed, 6, 0.3);
        rc.dt = 1e-3;
        rc.t_end = 2.0;
        rc.monitors = {"hminus1"};
        Trajectory t = integrate(rc);
        c.require(t.outcome == Outcome::Completed, fmt("seed %g did not complete", double(seed)));
        const auto& h = t.at("hminus1");
        for (std::size_t i = 1; i < h.size(); ++i) {
            const double rate = (h[i] - h[i - 1]) / (t.times[i] - t.times[i - 1]);
            worst_rate = std::max(worst_rate, rate);
            c.require(rate <= 1e-8, fmt("seed %g: H^-1 grows at %.3e per unit time", double(seed), rate));
        }
    }
    c.note(fmt("largest signed growth rate %.2e per unit time", worst_rate));
    return c;
}

// ---- 11. duhamel oracle -----------------------------------------------------------

Check criterion_picard()
{
    Check c;
    ModelSpec spec;
    spec.family = Family::Mkse;
    spec.l = 1;
    spec.p = 2.0;
    Grid g = Grid::periodic({128}, {2.0 * nums::pi});
    Field v0 = Field::sample(g, [](double x) { return 0.01 * std::sin(x); });
    const double t = 0.01;

    PicardResult pic = picard_local_solve(spec, v0, t, 8);
    c.require(!pic.diverged, "picard iteration diverged");

    RunConfig rc;
    rc.spec = spec;
    rc.v0 = v0;
    rc.dt = 1e-5;
    rc.t_end = t;
    rc.monitors = {"sup_norm"};
    Trajectory traj = integrate(rc);
    c.require(traj.outcome == Outcome::Completed && !traj.final_state.empty(), "stepper failed");
    double sup = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i)
        sup = std::max(sup, std::abs(pic.v[i] - traj.final_state[0][i]));
    c.require(sup <= 1e-5, fmt("picard vs stepper sup-discrepancy %.3e", sup));

    bool contracts = true;
    for (std::size_t i = 2; i + 1 < pic.diffs.size(); ++i) {
        if (pic.diffs[i] < 1e-15) break;
        if (pic.diffs[i + 1] > 0.5 * pic.diffs[i]) contracts = false;
    }
    c.require(contracts, "successive picard differences do not contract");
    c.note(fmt("sup-discrepancy %.2e; contraction observed", sup));
    return c;
}

// ---- 12. cahn-hilliard blow-up pattern ----------------------------------------------

Check criterion_cahn_hilliard()
{
    Check c;
    RunConfig rc;
    rc.spec.family = Family::CahnHilliard;
    rc.spec.p = 3.0;
    // 512 points: the peak narrows like (T-t)^{1/4} and must stay resolved
    // across the fit window
    Grid g = Grid::periodic({512}, {2.0 * nums::pi});
    rc.v0 = Field::sample(g, [](double x) { return 10.0 * std::sin(x); });
    rc.dt = 5e-8;
    rc.t_end = 1.0;
    rc.monitors = {"sup_norm"};
    Trajectory t = integrate(rc);
    c.require(t.outcome == Outcome::BlowUp, "no blow-up detected");
    if (t.outcome != Outcome::BlowUp) return c;
    const double T = 0.5 * (t.t_low + t.t_high);

    // log-log fit of sup-norm against (T - t) over the resolved approach
    const auto& sup = t.at("sup_norm");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        const double dtT = T - t.times[i];
        if (dtT < 50.0 * rc.dt || dtT > T / 3.0) continue;
        const double x = std::log(dtT), y = std::log(sup[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    c.require(n >= 50, fmt("fit window too small (%g points)", double(n)));
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.require(std::abs(slope - (-0.25)) <= 0.05,
              fmt("rate exponent %.4f not within 20%% of -0.25", slope));
    c.note(fmt("blow-up at T = %.6g, fitted rate exponent %.4f", T, slope));
    return c;
}

// ---- 13. rescaling laws ---------------------------------------------------------------

Check criterion_rescaling()
{
    Check c;
    ScalingLaw law = scaling_coefficients(ScalingKind::CkL2, 2, 1, 2.0, 10.0);
    c.require(std::abs(law.at("nu_k") - 1e-5) <= 1e-19, fmt("nu_k = %.17g != 1e-5", law.at("nu_k")));
    c.require(law.criticality == Criticality::Subcritical, "nu_k not flagged subcritical");

    ScalingLaw crit = scaling_coefficients(ScalingKind::CkLp, 1, 3, 3.0, 123.0);
    c.require(crit.at("nu_k") == 1.0 && crit.criticality == Criticality::Critical,
              "p = N for m = 1 not critical");

    Grid g = Grid::periodic({256}, {2.0 * nums::pi});
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Field v = random_band_limited_field(g, seed, 12, 1.0, false);
        ScalingLaw l2law = scaling_coefficients(ScalingKind::CkL2, 2, 1, 2.0, 3.0);
        worst = std::max(worst, std::abs(l2_norm(ck_rescale(v, l2law)) / l2_norm(v) - 1.0));

        ScalingLaw lplaw = scaling_coefficients(ScalingKind::CkLp, 1, 1, 3.0, 2.0);
        worst = std::max(worst, std::abs(lp_norm(ck_rescale(v, lplaw), 3.0) / lp_norm(v, 3.0) - 1.0));

        Field z = random_band_limited_field(g, seed + 50, 12, 1.0, true);
        ScalingLaw hlaw = scaling_coefficients(ScalingKind::CkHminus1, 2, 1, 2.0, 4.0);
        worst = std::max(worst, std::abs(hminus1_norm(ck_rescale(z, hlaw)) / hminus1_norm(z) - 1.0));
    }
    c.require(worst <= 1e-10, fmt("norm preservation defect %.3e", worst));
    c.note(fmt("nu_k exact; norm preservation within %.1e", worst));
    return c;
}

struct Criterion {
    int index;
    const char* name;
    Check (*fn)();
};

const Criterion kCriteria[] = {
    {1, "energy-identity", criterion_energy_identity},
    {2, "exponential-l2-bound", criterion_l2_bound},
    {3, "fundamental-solution", criterion_kernel},
    {4, "blowup-closed-forms", criterion_riccati},
    {5, "volterra-gronwall", criterion_volterra},
    {6, "critical-exponents", criterion_exponents},
    {7, "leray-projector", criterion_leray},
    {8, "taylor-green", criterion_taylor_green},
    {9, "mkse-uniform-bound", criterion_mkse_bound},
    {10, "hminus1-monotone", criterion_hminus1},
    {11, "duhamel-oracle", criterion_picard},
    {12, "cahn-hilliard-rate", criterion_cahn_hilliard},
    {13, "rescaling-laws", criterion_rescaling},
};

} // namespace

std::vector<CriterionResult> run_acceptance_detailed(const std::string& only, std::ostream& os)
{
    std::vector<int> wanted;
    if (!only.empty()) {
        std::stringstream ss(only);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) wanted.push_back(std::stoi(tok));
    }
    std::vector<CriterionResult> results;
    for (const Criterion& cr : kCriteria) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), cr.index) == wanted.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        Check c;
        try {
            c = cr.fn();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CriterionResult r;
        r.index = cr.index;
        r.name = cr.name;
        r.pass = c.pass;
        r.detail = c.detail;
        r.seconds = secs;
        results.push_back(r);
        char line[256];
        std::snprintf(line, sizeof line, "[%2d/13] %-24s %s  (%.1fs)  %s", cr.index, cr.name,
                      c.pass ? "PASS" : "FAIL", secs, c.detail.c_str());
        os << line << "\n" << std::flush;
    }
    return results;
}

bool run_acceptance(const std::string& only, std::ostream& os)
{
    auto results = run_acceptance_detailed(only, os);
    int passed = 0;
    for (const auto& r : results)
        if (r.pass) ++passed;
    os << passed << "/" << results.size() << " acceptance criteria passed\n";
    return passed == int(results.size());
}

} // namespace kslab
