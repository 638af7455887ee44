#include "kslab/runner.hpp"

#include "kslab/acceptance.hpp"
#include "kslab/capacity.hpp"
#include "kslab/evolve.hpp"
#include "kslab/flows.hpp"
#include "kslab/io.hpp"
#include "kslab/kernels.hpp"
#include "kslab/norms.hpp"
#include "kslab/rescale.hpp"
#include "kslab/spectral.hpp"
#include "kslab/volterra.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <numbers>
#include <thread>

#include "json.hpp"

namespace kslab {

namespace fs = std::filesystem;

namespace {

std::mutex g_console_mutex;

void report(const std::string& line)
{
    std::lock_guard<std::mutex> lock(g_console_mutex);
    std::cout << line << "\n";
}

struct Artifacts {
    fs::path dir;
    RunManifest manifest;

    explicit Artifacts(const std::string& outdir, const std::string& resolved, std::uint64_t seed,
                       int workers = 1)
        : dir(outdir)
    {
        fs::create_directories(dir);
        manifest.digest = digest_hex(resolved);
        manifest.seed = seed;
        manifest.tool_version = kTOOL_VERSION;
        manifest.workers = workers;
        write_text_file((dir / "resolved.cfg").string(), resolved);
        manifest.outputs.push_back((dir / "resolved.cfg").string());
    }

    std::string path(const std::string& name)
    {
        const std::string p = (dir / name).string();
        manifest.outputs.push_back(p);
        return p;
    }

    void finish() { write_manifest(manifest, (dir / "manifest.json").string()); }
};

Grid grid_from_config(ConfigMap& cfg, Family family)
{
    const bool interval = family == Family::KseIbvp;
    const std::string kind = cfg.get_string("grid.kind", interval ? "interval" : "periodic");
    if (kind == "interval") {
        const int pts = int(cfg.get_int("grid.points", 256));
        const double L = cfg.get_real("grid.extent", 4.0);
        const std::string bc = cfg.get_string("model.bc", "navier");
        if (bc != "navier" && bc != "dirichlet") throw ConfigError("model.bc must be navier or dirichlet");
        return Grid::interval(pts, L, bc == "navier" ? BoundaryKind::Navier : BoundaryKind::Dirichlet);
    }
    if (kind != "periodic") throw ConfigError("grid.kind must be periodic or interval");
    std::vector<int> pts = cfg.get_ints("grid.points", {256});
    std::vector<double> ext = cfg.get_reals("grid.extent", {2.0 * std::numbers::pi});
    if (ext.size() == 1 && pts.size() > 1) ext.assign(pts.size(), ext[0]);
    return Grid::periodic(pts, ext);
}

ModelSpec model_from_config(ConfigMap& cfg, const Grid& g)
{
    ModelSpec spec;
    const std::string fam = cfg.get_string("model.family", "mkse");
    auto parsed = family_from_name(fam);
    if (!parsed) throw ConfigError("model.family: unknown family '" + fam + "'");
    spec.family = *parsed;
    spec.l = int(cfg.get_int("model.l", 1));
    spec.m = int(cfg.get_int("model.m", 2));
    spec.p = cfg.get_real("model.p", 2.0);
    spec.drift = cfg.get_reals("model.drift", std::vector<double>(std::size_t(g.dim), 1.0));
    const std::string bc = cfg.get_string("model.bc", "navier");
    spec.bc = bc == "dirichlet" ? BoundaryKind::Dirichlet : BoundaryKind::Navier;
    if (!(spec.p > 1.0)) throw ConfigError("model.p: p must exceed 1");
    return spec;
}

Field initial_field(ConfigMap& cfg, const Grid& g)
{
    const std::string kind = cfg.get_string("init.kind", "sine");
    const double amp = cfg.get_real("init.amplitude", 1.0);
    const int mode = int(cfg.get_int("init.mode", 1));
    const std::uint64_t seed = std::uint64_t(cfg.get_int("init.seed", 1));
    const int kband = int(cfg.get_int("init.kband", 8));
    const bool zero_mean = cfg.get_bool("init.zero_mean", true);
    const double norm = cfg.get_real("init.normalize_l2", 0.0);
    const std::string file = cfg.get_string("init.file", "");
    if (kind == "zero") return Field::zeros(g);
    if (kind == "sine") {
        if (g.kind == Grid::Kind::Interval)
            return Field::sample(g, [&](double x) {
                return amp * std::sin(mode * std::numbers::pi * x / g.extent[0]);
            });
        return Field::sample(g, [&](double x) {
            return amp * std::sin(2.0 * std::numbers::pi * mode * (x - g.origin[0]) / g.extent[0]);
        });
    }
    if (kind == "random") return random_band_limited_field(g, seed, kband, amp, zero_mean, norm);
    if (kind == "file") {
        if (file.empty()) throw ConfigError("init.file: path required for init.kind = file");
        Field f = load_snapshot(file);
        if (!f.grid().same_layout(g)) throw ConfigError("init.file: snapshot grid mismatch");
        return Field(g, f.values());
    }
    throw ConfigError("init.kind must be zero, sine, random or file");
}

int do_run(ConfigMap& cfg, const std::string& action_label)
{
    Grid probe_grid = [&] {
        const std::string fam = cfg.get_string("model.family", "mkse");
        auto parsed = family_from_name(fam);
        if (!parsed) throw ConfigError("model.family: unknown family '" + fam + "'");
        return grid_from_config(cfg, *parsed);
    }();
    ModelSpec spec = model_from_config(cfg, probe_grid);

    RunConfig rc;
    rc.spec = spec;
    rc.v0 = initial_field(cfg, probe_grid);
    rc.dt = cfg.get_real("run.dt", 1e-3);
    rc.t_end = cfg.get_real("run.t_end", 1.0);
    rc.blowup_threshold = cfg.get_real("run.threshold", 1e6);
    rc.snapshot_every = int(cfg.get_int("run.snapshot_every", 0));
    rc.monitors = cfg.get_strings("monitors.set", {"sup_norm", "l2"});
    rc.capacity_lambda = cfg.get_real("monitors.lambda", 8.0);
    const std::uint64_t seed = std::uint64_t(cfg.get_int("init.seed", 1));
    const std::string outdir = cfg.get_string("output.dir", "out");
    const std::string resume = cfg.get_string("run.resume", "");
    const int checkpoint_every = int(cfg.get_int("run.checkpoint_every", 0));
    cfg.finish();

    if (!resume.empty()) {
        Checkpoint ck = load_checkpoint(resume, probe_grid);
        if (ck.kind != "run" || ck.fields.size() != 1)
            throw ConfigError("run.resume: not a scalar-run checkpoint");
        rc.v0 = Field(probe_grid, ck.fields[0].values());
        rc.start_step = ck.step;
        rc.e0_override = ck.e0;
    }

    Artifacts art(outdir, cfg.resolved_text(action_label), seed);

    // segmented stepping: identical bits to a monolithic run, with a
    // checkpoint after every segment
    const long long total_steps = (long long)std::ceil(rc.t_end / rc.dt - 1e-9);
    const long long seg = checkpoint_every > 0 ? checkpoint_every : total_steps;
    Trajectory traj;
    bool first_segment = true;
    const double E0 = rc.e0_override >= 0.0 ? rc.e0_override : [&] {
        const double n = l2_norm(rc.v0);
        return n * n;
    }();
    rc.e0_override = E0;
    int ckpt_index = 0;
    while (true) {
        RunConfig part = rc;
        part.t_end = std::min(rc.t_end, double(part.start_step + seg) * rc.dt);
        Trajectory tp = integrate(part);
        if (first_segment) {
            traj = tp;
            first_segment = false;
        } else {
            for (std::size_t i = 1; i < tp.times.size(); ++i) {
                traj.times.push_back(tp.times[i]);
                for (auto& name : traj.monitor_names)
                    traj.series[name].push_back(tp.at(name)[i]);
            }
            for (std::size_t i = 0; i < tp.snapshots.size(); ++i) {
                traj.snapshots.push_back(tp.snapshots[i]);
                traj.snapshot_times.push_back(tp.snapshot_times[i]);
            }
            traj.outcome = tp.outcome;
            traj.t_low = tp.t_low;
            traj.t_high = tp.t_high;
            traj.final_state = tp.final_state;
        }
        if (tp.outcome != Outcome::Completed) break;
        const long long done = (long long)std::llround(tp.times.back() / rc.dt);
        if (checkpoint_every > 0 && !tp.final_state.empty()) {
            Checkpoint ck;
            ck.kind = "run";
            ck.step = done;
            ck.time = tp.times.back();
            ck.seed = seed;
            ck.m = 0;
            ck.e0 = E0;
            ck.fields.push_back(tp.final_state[0]);
            char name[64];
            std::snprintf(name, sizeof name, "checkpoint_%06d.ckpt", ckpt_index++);
            save_checkpoint(ck, art.path(name));
        }
        if (done >= total_steps) break;
        rc.start_step = done;
        rc.v0 = tp.final_state[0];
    }
    traj.seed = seed;
    write_monitor_csv(traj, art.path("monitors.csv"));
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snap_%06zu.f64", i);
        save_snapshot(traj.snapshots[i], art.path(name));
    }
    art.finish();

    switch (traj.outcome) {
    case Outcome::Completed:
        report(action_label + ": completed, " + std::to_string(traj.times.size()) + " rows -> " +
               (art.dir / "monitors.csv").string());
        return kExitOk;
    case Outcome::BlowUp:
        report(action_label + ": blow-up bracketed in [" + std::to_string(traj.t_low) + ", " +
               std::to_string(traj.t_high) + "]");
        return kExitBlowUp;
    default:
        report(action_label + ": numerical failure near t = " + std::to_string(traj.t_high));
        return kExitNumericalFailure;
    }
}

int do_flow(ConfigMap& cfg)
{
    FlowConfig fc;
    std::vector<int> pts = cfg.get_ints("grid.points", {64, 64});
    std::vector<double> ext = cfg.get_reals("grid.extent", {2.0 * std::numbers::pi});
    if (ext.size() == 1 && pts.size() > 1) ext.assign(pts.size(), ext[0]);
    Grid g = Grid::periodic(pts, ext);
    fc.state0.m = int(cfg.get_int("flow.m", 1));
    fc.seed = std::uint64_t(cfg.get_int("flow.seed", 1));
    const std::string init = cfg.get_string("flow.init", "taylor_green");
    if (init == "taylor_green") fc.state0.v = taylor_green(g);
    else if (init == "random")
        fc.state0.v = random_solenoidal(g, fc.seed, int(cfg.get_int("flow.kband", 4)),
                                        cfg.get_real("flow.amplitude", 0.5));
    else throw ConfigError("flow.init must be taylor_green or random");
    fc.dt = cfg.get_real("run.dt", 1e-3);
    fc.t_end = cfg.get_real("run.t_end", 1.0);
    fc.blowup_threshold = cfg.get_real("run.threshold", 1e6);
    fc.snapshot_every = int(cfg.get_int("run.snapshot_every", 0));
    fc.monitors = cfg.get_strings("monitors.set", {"sup_norm", "energy", "enstrophy"});
    const std::string outdir = cfg.get_string("output.dir", "out");
    cfg.finish();

    Artifacts art(outdir, cfg.resolved_text("flow"), fc.seed);
    Trajectory traj = integrate_flow(fc);
    write_monitor_csv(traj, art.path("monitors.csv"));
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snap_%06zu.f64", i);
        save_snapshot(traj.snapshots[i], art.path(name));
    }
    art.finish();

    switch (traj.outcome) {
    case Outcome::Completed: report("flow: completed"); return kExitOk;
    case Outcome::BlowUp: report("flow: blow-up bracketed"); return kExitBlowUp;
    default: report("flow: numerical failure"); return kExitNumericalFailure;
    }
}

int do_kernel(ConfigMap& cfg)
{
    const int m = int(cfg.get_int("kernel.m", 2));
    const int dim = int(cfg.get_int("kernel.dim", 1));
    const int pts = int(cfg.get_int("kernel.points", 0));
    const double ext = cfg.get_real("kernel.extent", 0.0);
    const std::string outdir = cfg.get_string("output.dir", "out");
    cfg.finish();

    Kernel k = (pts > 0 && ext > 0.0)
                   ? fundamental_solution(m, dim,
                                          Grid::periodic_centered(std::vector<int>(std::size_t(dim), pts),
                                                                  std::vector<double>(std::size_t(dim), ext)))
                   : fundamental_solution(m, dim);
    const double residual = kernel_residual(k);
    nlohmann::json rep;
    rep["m"] = m;
    rep["dim"] = dim;
    rep["mass"] = k.mass;
    rep["residual_sup"] = residual;
    if (dim == 1) {
        DecayFit fit = fit_decay(k);
        rep["decay"] = {{"D", fit.D}, {"d", fit.d}, {"alpha", fit.alpha},
                        {"alpha_expected", 2.0 * m / (2.0 * m - 1.0)}};
    }

    Artifacts art(outdir, cfg.resolved_text("kernel"), 0);
    if (dim == 1) {
        std::string csv = "y,F\n";
        const Grid& g = k.profile.grid();
        char buf[80];
        for (int i = 0; i < g.points[0]; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.coord(0, i), k.profile[std::size_t(i)]);
            csv += buf;
        }
        write_text_file(art.path("kernel.csv"), csv);
    } else {
        save_snapshot(k.profile, art.path("kernel.f64"));
    }
    write_text_file(art.path("report.json"), rep.dump(2) + "\n");
    art.finish();
    report("kernel: mass " + std::to_string(k.mass) + ", residual " + std::to_string(residual));
    return kExitOk;
}

int do_certify(ConfigMap& cfg)
{
    // direct mode: a prescribed case with (a, kappa, J0) evaluates the
    // closed-form divergence bound and cross-checks it against the oracle
    const std::string case_s = cfg.get_string("certify.case", "");
    if (!case_s.empty()) {
        BlowupCase kind;
        if (case_s == "strict") kind = BlowupCase::Strict;
        else if (case_s == "zero") kind = BlowupCase::Zero;
        else if (case_s == "negative") kind = BlowupCase::Negative;
        else throw ConfigError("certify.case must be strict, zero or negative");
        const double a = cfg.get_real("certify.a", 1.0);
        const double kappa = cfg.get_real("certify.kappa", 1.0);
        const double J0 = cfg.get_real("certify.j0", 0.0);
        const std::string outdir = cfg.get_string("output.dir", "out");
        cfg.finish();
        const double T = closed_form_t_infinity(kind, J0, kappa, a);
        std::vector<double> grid;
        for (int i = 0; i <= 20; ++i) grid.push_back(0.9 * T * double(i) / 20.0);
        RiccatiResult oracle = riccati_oracle(kind, J0, kappa, a, grid, T);
        nlohmann::json rep;
        rep["case"] = case_s;
        rep["a"] = a;
        rep["kappa"] = kappa;
        rep["J0"] = J0;
        rep["t_infinity_bound"] = T;
        rep["envelope_t"] = grid;
        std::vector<double> env;
        for (double tg : grid) env.push_back(closed_form_envelope(kind, J0, kappa, a, tg));
        rep["envelope_J"] = env;
        rep["oracle_J"] = oracle.J;
        rep["oracle_diverged"] = oracle.diverged;
        rep["oracle_divergence_bracket"] = {oracle.t_div_low, oracle.t_div_high};
        Artifacts art(outdir, cfg.resolved_text("certify"), 0);
        write_text_file(art.path("certificate.json"), rep.dump(2) + "\n");
        art.finish();
        report("certify: " + case_s + " case, T_infinity bound " + std::to_string(T));
        return kExitOk;
    }

    BoundaryTraces tr;
    tr.v = cfg.get_real("certify.trace_v", 0.0);
    tr.dv = cfg.get_real("certify.trace_dv", 0.0);
    tr.d2v = cfg.get_real("certify.trace_d2v", 0.0);
    tr.d3v = cfg.get_real("certify.trace_d3v", 0.0);
    const double lambda_lo = cfg.get_real("certify.lambda_min", 6.5);
    const double lambda_hi = cfg.get_real("certify.lambda_max", 30.0);
    const double L_lo = cfg.get_real("certify.L_min", 0.25);
    const double L_hi = cfg.get_real("certify.L_max", 2.0);
    const int lattice = int(cfg.get_int("certify.lattice", 64));
    const double L_domain = cfg.get_real("certify.domain", 2.0);
    const int pts = int(cfg.get_int("certify.points", 256));
    const std::string profile = cfg.get_string("certify.profile", "poly");
    const double c = cfg.get_real("certify.c", 1.0);
    const double mu = cfg.get_real("certify.mu", 2.0);
    const std::string fromfile = cfg.get_string("certify.file", "");
    const std::string outdir = cfg.get_string("output.dir", "out");
    cfg.finish();

    Grid g = Grid::interval(pts, L_domain, BoundaryKind::Dirichlet);
    Field v0 = Field::zeros(g);
    if (!fromfile.empty()) {
        Field f = load_snapshot(fromfile);
        v0 = Field(g, f.values());
    } else if (profile == "poly") {
        v0 = Field::sample(g, [&](double x) { return c * std::pow(x, mu); });
    } else if (profile == "sine") {
        v0 = Field::sample(g, [&](double x) { return c * std::sin(std::numbers::pi * x / L_domain); });
    } else {
        throw ConfigError("certify.profile must be poly or sine");
    }

    auto cert = certify_blowup(v0, tr, lambda_lo, lambda_hi, L_lo, L_hi, lattice);
    nlohmann::json rep;
    rep["certified"] = cert.has_value();
    if (cert) {
        rep["lambda"] = cert->lambda;
        rep["L"] = cert->L;
        rep["kappa"] = cert->kappa;
        rep["C_lambda"] = cert->c_lambda;
        rep["J0"] = cert->J0;
        rep["case"] = cert->kind == BlowupCase::Strict ? "strict"
                      : cert->kind == BlowupCase::Zero ? "zero"
                                                       : "negative";
        rep["a"] = cert->a;
        rep["t_infinity_bound"] = cert->t_infinity_bound;
    }
    Artifacts art(outdir, cfg.resolved_text("certify"), 0);
    write_text_file(art.path("certificate.json"), rep.dump(2) + "\n");
    art.finish();
    report(cert ? "certify: T_infinity bound " + std::to_string(cert->t_infinity_bound)
                : "certify: no certificate in the searched range");
    return kExitOk;
}

int do_volterra(ConfigMap& cfg)
{
    const double p = cfg.get_real("volterra.p", 2.0);
    const int m = int(cfg.get_int("volterra.m", 2));
    const int N = int(cfg.get_int("volterra.n", 1));
    const double t_end = cfg.get_real("volterra.t_end", 3.0);
    const int steps = int(cfg.get_int("volterra.steps", 1200));
    const double eps = cfg.get_real("volterra.eps", 0.01);
    const std::string outdir = cfg.get_string("output.dir", "out");
    cfg.finish();

    VolterraResult res = volterra_bound(p, m, N, t_end, steps, eps);
    nlohmann::json rep;
    rep["beta"] = res.beta;
    rep["supercritical"] = res.supercritical;
    rep["monotone"] = res.monotone;
    rep["bounded_by_hat"] = res.bounded_by_hat;

    Artifacts art(outdir, cfg.resolved_text("volterra"), 0);
    if (!res.supercritical) {
        std::string csv = "t,V,V_hat\n";
        char buf[120];
        for (std::size_t i = 0; i < res.t.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", res.t[i], res.V[i], res.V_hat[i]);
            csv += buf;
        }
        write_text_file(art.path("volterra.csv"), csv);
    }
    write_text_file(art.path("report.json"), rep.dump(2) + "\n");
    art.finish();
    report("volterra: beta = " + std::to_string(res.beta) +
           (res.supercritical ? " (supercritical)" : res.bounded_by_hat ? ", V <= V_hat" : ", bound FAILED"));
    return kExitOk;
}

int do_rescale(ConfigMap& cfg)
{
    const std::string kind_s = cfg.get_string("rescale.kind", "ck_l2");
    ScalingKind kind;
    if (kind_s == "ck_l2") kind = ScalingKind::CkL2;
    else if (kind_s == "ck_lp") kind = ScalingKind::CkLp;
    else if (kind_s == "ck_hminus1") kind = ScalingKind::CkHminus1;
    else if (kind_s == "t_minus_t") kind = ScalingKind::TminusT;
    else if (kind_s == "leray") kind = ScalingKind::Leray;
    else throw ConfigError("rescale.kind must be ck_l2, ck_lp, ck_hminus1, t_minus_t or leray");
    const int m = int(cfg.get_int("rescale.m", 2));
    const int N = int(cfg.get_int("rescale.n", 1));
    const double p = cfg.get_real("rescale.p", 2.0);
    const double Ck = cfg.get_real("rescale.ck", 10.0);
    const std::string input = cfg.get_string("rescale.input", "");
    const int kmax = int(cfg.get_int("rescale.spectrum_kmax", 8));
    const std::string outdir = cfg.get_string("output.dir", "out");
    cfg.finish();

    ScalingLaw law = scaling_coefficients(kind, m, N, p, Ck);
    nlohmann::json rep;
    rep["kind"] = kind_s;
    for (auto& [k, v] : law.derived) rep["derived"][k] = v;
    rep["criticality"] = law.criticality == Criticality::Subcritical   ? "subcritical"
                         : law.criticality == Criticality::Critical    ? "critical"
                                                                       : "supercritical";
    if (kind == ScalingKind::TminusT || kind == ScalingKind::Leray) {
        auto spec = reference_spectrum(kind == ScalingKind::Leray ? SpectrumCase::Nse
                                                                  : SpectrumCase::Generic,
                                       m, law.at("alpha"), kmax);
        rep["reference_spectrum"] = spec;
    }

    Artifacts art(outdir, cfg.resolved_text("rescale"), 0);
    if (!input.empty() &&
        (kind == ScalingKind::CkL2 || kind == ScalingKind::CkLp || kind == ScalingKind::CkHminus1)) {
        Field v = load_snapshot(input);
        Field w = ck_rescale(v, law);
        save_snapshot(w, art.path("rescaled.f64"));
        rep["rescaled_l2"] = l2_norm(w);
        rep["input_l2"] = l2_norm(v);
    }
    write_text_file(art.path("report.json"), rep.dump(2) + "\n");
    art.finish();
    report("rescale: wrote report.json");
    return kExitOk;
}

int do_sweep(ConfigMap cfg)
{
    auto combos = cfg.take_sweeps();
    if (combos.empty()) throw ConfigError("sweep: no sweep.<section.key> axes given");
    const std::string outdir = cfg.get_string("output.dir", "out");
    const std::string action = cfg.get_string("sweep.action", "run");
    if (action != "run" && action != "flow") throw ConfigError("sweep.action must be run or flow");

    const int workers = sweep_workers(int(combos.size()));
    std::atomic<int> next{0};
    std::atomic<int> worst{kExitOk};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < int(combos.size()); i = next.fetch_add(1)) {
                ConfigMap sub = cfg;
                for (auto& [k, v] : combos[std::size_t(i)]) sub.set(k, v);
                char name[32];
                std::snprintf(name, sizeof name, "run_%04d", i);
                sub.set("output.dir", (fs::path(outdir) / name).string());
                int rc = kExitIoError;
                try {
                    rc = action == "run" ? do_run(sub, "run") : do_flow(sub);
                } catch (const std::exception& e) {
                    report(std::string(name) + ": error: " + e.what());
                    rc = kExitConfigError;
                }
                int cur = worst.load();
                while (rc > cur && !worst.compare_exchange_weak(cur, rc)) {}
            }
        });
    for (auto& th : pool) th.join();

    // top-level manifest listing the per-run directories
    Artifacts art(outdir, cfg.resolved_text("sweep"), 0, workers);
    for (std::size_t i = 0; i < combos.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%04zu", i);
        art.manifest.outputs.push_back((fs::path(outdir) / name / "manifest.json").string());
    }
    art.finish();
    report("sweep: " + std::to_string(combos.size()) + " runs with " + std::to_string(workers) +
           " workers");
    return worst.load();
}

} // namespace

int sweep_workers(int run_count)
{
    if (const char* env = std::getenv("KSLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return std::min(w, run_count);
    }
    return std::max(1, run_count);
}

int run_action(const std::string& action, ConfigMap cfg)
{
    try {
        if (action == "run") return do_run(cfg, "run");
        if (action == "flow") return do_flow(cfg);
        if (action == "kernel") return do_kernel(cfg);
        if (action == "certify") return do_certify(cfg);
        if (action == "volterra") return do_volterra(cfg);
        if (action == "rescale") return do_rescale(cfg);
        if (action == "sweep") return do_sweep(std::move(cfg));
        if (action == "check") {
            const std::string only = cfg.get_string("check.only", "");
            cfg.finish();
            return run_acceptance(only, std::cout) ? kExitOk : kExitIoError;
        }
        throw ConfigError("unknown action: " + action);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}

} // namespace kslab
