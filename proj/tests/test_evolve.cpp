#include "doctest.h"

#include "kslab/capacity.hpp"
#include "kslab/evolve.hpp"
#include "kslab/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace kslab;
namespace nums = std::numbers;

namespace {

ModelSpec mkse_spec(double p = 2.0, std::vector<double> drift = {1.0})
{
    ModelSpec s;
    s.family = Family::Mkse;
    s.l = 1;
    s.p = p;
    s.drift = std::move(drift);
    return s;
}

Field sine_mode(const Grid& g, int k, double amp = 1.0)
{
    return Field::sample(g, [&](double x) {
        return amp * std::sin(2.0 * nums::pi * k * (x - g.origin[0]) / g.extent[0]);
    });
}

double sup_diff(const Field& a, const Field& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("step: linearized KSE leaves the neutral mode invariant")
{
    Grid g = Grid::periodic({64}, {2.0 * nums::pi});
    Field v = sine_mode(g, 1);
    Field out = step(mkse_spec(2.0, {0.0}), v, 0.37); // symbol -1+1 = 0 at |xi|=1
    CHECK(sup_diff(out, v) <= 1e-13);
}

TEST_CASE("step: linearized KSE decays sin(2x) at the exact symbol rate")
{
    Grid g = Grid::periodic({64}, {2.0 * nums::pi});
    Field v = sine_mode(g, 2);
    const double dt = 0.01;
    Field out = step(mkse_spec(2.0, {0.0}), v, dt);
    Field expected = v;
    expected *= std::exp(-12.0 * dt); // -(16) + 4
    CHECK(sup_diff(out, expected) <= 1e-13);
}

TEST_CASE("step: pure heat decay of the first mode")
{
    ModelSpec s;
    s.family = Family::PureDivergent;
    s.m = 1;
    s.p = 2.0;
    s.drift = {0.0};
    Grid g = Grid::periodic({64}, {2.0 * nums::pi});
    Field v = sine_mode(g, 1);
    const double dt = 0.05;
    Field out = step(s, v, dt);
    Field expected = v;
    expected *= std::exp(-dt);
    CHECK(sup_diff(out, expected) <= 1e-13);
}

TEST_CASE("integrate: decaying IBVP completes with monotone energy")
{
    RunConfig cfg;
    cfg.spec.family = Family::KseIbvp;
    cfg.v0 = Field::sample(Grid::interval(128, nums::pi / 2.0, BoundaryKind::Navier),
                           [](double x) { return std::sin(2.0 * x); }); // least mode |xi| = 2
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.monitors = {"l2", "sup_norm"};
    Trajectory traj = integrate(cfg);
    CHECK(traj.outcome == Outcome::Completed);
    const auto& l2 = traj.at("l2");
    for (std::size_t i = 1; i < l2.size(); ++i) CHECK(l2[i] <= l2[i - 1] * (1.0 + 1e-12));
    CHECK(l2.back() < 0.1 * l2.front());
}

TEST_CASE("integrate: zero data stays identically zero")
{
    RunConfig cfg;
    cfg.spec = mkse_spec();
    cfg.v0 = Field::zeros(Grid::periodic({64}, {2.0 * nums::pi}));
    cfg.dt = 1e-2;
    cfg.t_end = 0.5;
    cfg.monitors = {"sup_norm", "l2"};
    Trajectory traj = integrate(cfg);
    CHECK(traj.outcome == Outcome::Completed);
    for (double x : traj.at("sup_norm")) CHECK(x == 0.0);
}

TEST_CASE("integrate: Cahn-Hilliard large data blows up with a tight bracket")
{
    RunConfig cfg;
    cfg.spec.family = Family::CahnHilliard;
    cfg.spec.p = 3.0;
    cfg.v0 = sine_mode(Grid::periodic({128}, {2.0 * nums::pi}), 1, 10.0);
    cfg.dt = 1e-5;
    cfg.t_end = 1.0;
    cfg.monitors = {"sup_norm"};
    Trajectory traj = integrate(cfg);
    REQUIRE(traj.outcome == Outcome::BlowUp);
    CHECK(traj.t_high - traj.t_low == doctest::Approx(cfg.dt).epsilon(1e-12));

    // threshold bump moves the bracket by at most a few steps
    RunConfig cfg8 = cfg;
    cfg8.blowup_threshold = 1e8;
    Trajectory traj8 = integrate(cfg8);
    REQUIRE(traj8.outcome == Outcome::BlowUp);
    CHECK(std::abs(traj8.t_high - traj.t_high) <= 4.0 * cfg.dt);

    // halving dt keeps the detected time stable
    RunConfig cfg_half = cfg;
    cfg_half.dt = 5e-6;
    Trajectory traj_half = integrate(cfg_half);
    REQUIRE(traj_half.outcome == Outcome::BlowUp);
    CHECK(traj_half.t_high - traj_half.t_low == doctest::Approx(cfg_half.dt).epsilon(1e-12));
    CHECK(std::abs(traj_half.t_high - traj.t_high) <= 5.0 * cfg.dt);
}

TEST_CASE("integrate: determinism is bitwise")
{
    RunConfig cfg;
    cfg.spec = mkse_spec();
    cfg.v0 = sine_mode(Grid::periodic({64}, {4.0 * nums::pi}), 3, 0.8);
    cfg.dt = 1e-3;
    cfg.t_end = 0.2;
    cfg.monitors = {"sup_norm", "l2"};
    Trajectory a = integrate(cfg);
    Trajectory b = integrate(cfg);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        CHECK(a.at("sup_norm")[i] == b.at("sup_norm")[i]);
        CHECK(a.at("l2")[i] == b.at("l2")[i]);
    }
}

TEST_CASE("integrate: refinement order of the splitting is >= 1")
{
    auto final_field = [&](double dt) {
        RunConfig cfg;
        cfg.spec = mkse_spec();
        cfg.v0 = sine_mode(Grid::periodic({64}, {4.0 * nums::pi}), 2, 0.5);
        cfg.dt = dt;
        cfg.t_end = 0.5;
        cfg.monitors = {"sup_norm"};
        cfg.snapshot_every = int(std::llround(0.5 / dt));
        Trajectory t = integrate(cfg);
        REQUIRE(t.snapshots.size() >= 1);
        return t.snapshots.back();
    };
    Field c = final_field(2e-3);
    Field f = final_field(1e-3);
    Field ff = final_field(5e-4);
    const double e1 = sup_diff(c, ff);
    const double e2 = sup_diff(f, ff);
    CHECK(e2 < 0.6 * e1); // order >= 1; midpoint Strang actually gives ~4x
}

TEST_CASE("energy residual: halving dt at least halves it")
{
    auto max_residual = [&](double dt) {
        RunConfig cfg;
        cfg.spec.family = Family::KseIbvp;
        cfg.v0 = Field::sample(Grid::interval(128, 4.0, BoundaryKind::Navier),
                               [](double x) { return std::sin(nums::pi * x / 4.0); });
        cfg.dt = dt;
        cfg.t_end = 0.2;
        cfg.monitors = {"energy_residual", "l2"};
        Trajectory t = integrate(cfg);
        REQUIRE(t.outcome == Outcome::Completed);
        double m = 0.0;
        for (double r : t.at("energy_residual")) m = std::max(m, r);
        return m;
    };
    const double r1 = max_residual(2e-3);
    const double r2 = max_residual(1e-3);
    CHECK(r2 <= 0.55 * r1);
}

TEST_CASE("dispersion3: hminus1 monitor is nonincreasing")
{
    RunConfig cfg;
    cfg.spec.family = Family::Dispersion3;
    cfg.spec.m = 2;
    cfg.spec.p = 2.0;
    Grid g = Grid::periodic({128}, {2.0 * nums::pi});
    cfg.v0 = sine_mode(g, 1, 0.3) + sine_mode(g, 3, 0.15);
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    cfg.monitors = {"hminus1", "l2"};
    Trajectory traj = integrate(cfg);
    REQUIRE(traj.outcome == Outcome::Completed);
    const auto& h = traj.at("hminus1");
    for (std::size_t i = 1; i < h.size(); ++i)
        CHECK(h[i] - h[i - 1] <= 1e-8 * (traj.times[i] - traj.times[i - 1]));
}

TEST_CASE("l2_growth_check flags and zero trajectory")
{
    RunConfig cfg;
    cfg.spec = mkse_spec();
    cfg.v0 = Field::zeros(Grid::periodic({64}, {2.0 * nums::pi}));
    cfg.dt = 1e-2;
    cfg.t_end = 0.3;
    cfg.monitors = {"l2"};
    Trajectory traj = integrate(cfg);
    L2GrowthReport rep = l2_growth_check(traj);
    CHECK(rep.max_ratio == 0.0);
    CHECK(rep.ok);

    // heat decay keeps the ratio at 1 at t=0 and below afterwards
    RunConfig heat;
    heat.spec.family = Family::PureDivergent;
    heat.spec.m = 1;
    heat.spec.drift = {0.0};
    heat.v0 = sine_mode(Grid::periodic({64}, {2.0 * nums::pi}), 1);
    heat.dt = 1e-2;
    heat.t_end = 0.5;
    heat.monitors = {"l2"};
    L2GrowthReport hr = l2_growth_check(integrate(heat));
    CHECK(hr.ok);
    CHECK(hr.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate: config invariants rejected")
{
    RunConfig cfg;
    cfg.spec = mkse_spec();
    cfg.v0 = sine_mode(Grid::periodic({64}, {2.0 * nums::pi}), 1, 5.0);
    cfg.dt = 1.0;
    cfg.t_end = 0.5; // dt >= t_end
    CHECK_THROWS(integrate(cfg));
    cfg.dt = 1e-3;
    cfg.blowup_threshold = 1.0; // below sup|v0|
    CHECK_THROWS(integrate(cfg));
    cfg.blowup_threshold = 1e6;
    cfg.monitors = {"no_such_monitor"};
    CHECK_THROWS(integrate(cfg));
}

TEST_CASE("integrate: overflow lands in NumericalFailure")
{
    RunConfig cfg;
    cfg.spec = mkse_spec();
    Grid g = Grid::periodic({64}, {2.0 * nums::pi});
    cfg.v0 = Field::sample(g, [](double x) { return 1e150 * std::sin(x); });
    cfg.dt = 1.0;
    cfg.t_end = 10.0;
    cfg.blowup_threshold = 1e200;
    cfg.monitors = {"sup_norm"};
    Trajectory t = integrate(cfg);
    CHECK(t.outcome == Outcome::NumericalFailure);
    CHECK(t.t_high == 1.0);
    CHECK(t.times.size() == 1); // the garbage row is not recorded
}

TEST_CASE("integrate: clamped Dirichlet scheme runs stably and decays")
{
    RunConfig cfg;
    cfg.spec.family = Family::KseIbvp;
    cfg.spec.bc = BoundaryKind::Dirichlet;
    Grid g = Grid::interval(200, 2.0, BoundaryKind::Dirichlet);
    cfg.v0 = Field::sample(g, [](double x) { return 4.0 * x * x * (2.0 - x) * (2.0 - x); });
    cfg.dt = 1e-3;
    cfg.t_end = 2.0;
    cfg.monitors = {"sup_norm", "l2"};
    Trajectory t = integrate(cfg);
    REQUIRE(t.outcome == Outcome::Completed);
    const auto& l2 = t.at("l2");
    CHECK(l2.back() < 0.2 * l2.front()); // every mode of the small interval decays
    // clamped ends hold along the run
    REQUIRE(!t.final_state.empty());
    CHECK(t.final_state[0][0] == 0.0);
}

TEST_CASE("J_lambda monitor matches the weighted quadrature")
{
    RunConfig cfg;
    cfg.spec.family = Family::KseIbvp;
    Grid g = Grid::interval(128, 4.0, BoundaryKind::Navier);
    cfg.v0 = Field::sample(g, [](double x) { return std::sin(nums::pi * x / 4.0); });
    cfg.dt = 1e-3;
    cfg.t_end = 0.01;
    cfg.monitors = {"J_lambda", "l2"};
    cfg.capacity_lambda = 7.5;
    Trajectory t = integrate(cfg);
    REQUIRE(t.outcome == Outcome::Completed);
    const double direct = capacity_weighted_integral(cfg.v0, 7.5, 4.0);
    CHECK(t.at("J_lambda").front() == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("picard: nonlinearity absent reproduces the heat propagation")
{
    ModelSpec s = mkse_spec(2.0, {0.0});
    Grid g = Grid::periodic({64}, {2.0 * nums::pi});
    Field v0 = sine_mode(g, 1, 0.5) + sine_mode(g, 2, 0.25);
    const double t = 0.05;
    PicardResult res = picard_local_solve(s, v0, t, 1, 64, /*include_destabilizing=*/false);
    Field expected = heat_propagate(v0, 2, t); // m = 2l = 2
    CHECK(sup_diff(res.v, expected) <= 1e-12);
}

TEST_CASE("picard vs stepper: independent discretizations agree")
{
    ModelSpec s = mkse_spec();
    Grid g = Grid::periodic({128}, {2.0 * nums::pi});
    Field v0 = sine_mode(g, 1, 0.01);
    const double t = 0.01;

    PicardResult pic = picard_local_solve(s, v0, t, 8);
    CHECK_FALSE(pic.diverged);

    RunConfig cfg;
    cfg.spec = s;
    cfg.v0 = v0;
    cfg.dt = 1e-5;
    cfg.t_end = t;
    cfg.monitors = {"sup_norm"};
    cfg.snapshot_every = 1000;
    Trajectory traj = integrate(cfg);
    REQUIRE(traj.outcome == Outcome::Completed);
    REQUIRE(traj.snapshots.size() == 1);
    CHECK(sup_diff(pic.v, traj.snapshots[0]) <= 1e-5);
}

TEST_CASE("picard: successive differences contract geometrically")
{
    ModelSpec s = mkse_spec();
    Grid g = Grid::periodic({64}, {2.0 * nums::pi});
    Field v0 = sine_mode(g, 1, 0.05);
    PicardResult res = picard_local_solve(s, v0, 0.02, 6);
    REQUIRE(res.diffs.size() >= 4);
    // skip the first difference (initial iterate is only the heat flow)
    for (std::size_t i = 2; i + 1 < res.diffs.size(); ++i) {
        if (res.diffs[i] < 1e-15) break; // hit rounding floor
        CHECK(res.diffs[i + 1] <= 0.5 * res.diffs[i]);
    }
}
