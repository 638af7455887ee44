#include "doctest.h"

#include "kslab/flows.hpp"
#include "kslab/rescale.hpp"
#include "kslab/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace kslab;
namespace nums = std::numbers;

namespace {

Grid box2(int n = 64) { return Grid::periodic({n, n}, {2.0 * nums::pi, 2.0 * nums::pi}); }

double sup_diff(const Field& a, const Field& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("leray: annihilates gradients, fixes solenoidal fields")
{
    Grid g = box2();
    VectorField grad(2);
    grad[0] = Field::sample2(g, [](double x, double y) { return std::cos(x) * std::cos(y); }); // d_x sin(x)cos(y)
    grad[1] = Field::sample2(g, [](double x, double y) { return -std::sin(x) * std::sin(y); });
    VectorField pg = leray_project(grad);
    CHECK(pg[0].sup_norm() <= 1e-13);
    CHECK(pg[1].sup_norm() <= 1e-13);

    VectorField sol(2);
    sol[0] = Field::sample2(g, [](double x, double y) { return -std::sin(x) * std::cos(y); }); // -d_y psi
    sol[1] = Field::sample2(g, [](double x, double y) { return std::cos(x) * std::sin(y); });  // d_x psi
    VectorField ps = leray_project(sol);
    CHECK(sup_diff(ps[0], sol[0]) <= 1e-14);
    CHECK(sup_diff(ps[1], sol[1]) <= 1e-14);
}

TEST_CASE("leray: mixed field keeps only the solenoidal part")
{
    // u = (sin y, 0) + grad(sin x sin y) -> P u = (sin y, 0)
    Grid g = box2();
    VectorField u(2);
    u[0] = Field::sample2(g, [](double x, double y) { return std::sin(y) + std::cos(x) * std::sin(y); });
    u[1] = Field::sample2(g, [](double x, double y) { return std::sin(x) * std::cos(y); });
    VectorField pu = leray_project(u);
    Field expect0 = Field::sample2(g, [](double, double y) { return std::sin(y); });
    CHECK(sup_diff(pu[0], expect0) <= 1e-13);
    CHECK(pu[1].sup_norm() <= 1e-13);
}

TEST_CASE("leray: idempotence and orthogonality on random fields")
{
    Grid g = Grid::periodic({128, 128}, {2.0 * nums::pi, 2.0 * nums::pi});
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        VectorField u(2);
        u[0] = Field::sample2(g, [&](double x, double y) {
            return std::sin(3 * x + double(seed)) * std::cos(2 * y) + 0.3 * std::cos(x - y);
        });
        u[1] = Field::sample2(g, [&](double x, double y) {
            return std::cos(2 * x) * std::sin(y + 0.1 * double(seed)) - 0.2 * std::sin(x + 2 * y);
        });
        VectorField once = leray_project(u);
        VectorField twice = leray_project(once);
        CHECK(sup_diff(once[0], twice[0]) <= 1e-13);
        CHECK(sup_diff(once[1], twice[1]) <= 1e-13);
        CHECK(divergence(once).sup_norm() <= 1e-12);
    }
}

TEST_CASE("leray: projected fields are L2-orthogonal to gradients")
{
    Grid g = box2();
    for (std::uint64_t seed = 11; seed <= 13; ++seed) {
        VectorField u(2);
        u[0] = random_band_limited_field(g, seed, 8, 1.0, false);
        u[1] = random_band_limited_field(g, seed + 100, 8, 1.0, false);
        Field phi = random_band_limited_field(g, seed + 200, 8, 1.0, false);
        VectorField pu = leray_project(u);
        double inner = 0.0;
        for (int a = 0; a < 2; ++a) {
            Field gphi = derivative(phi, a, 1);
            for (std::size_t i = 0; i < gphi.size(); ++i) inner += pu[std::size_t(a)][i] * gphi[i];
        }
        inner *= g.cell_volume();
        CHECK(std::abs(inner) <= 1e-12);
    }
}

TEST_CASE("rhs_flow: taylor-green advection projects away")
{
    Grid g = box2();
    FlowState st;
    st.v = taylor_green(g);
    st.m = 1;
    VectorField r1 = rhs_flow(st);
    // rhs = -2 v for m = 1
    Field expect0 = st.v[0];
    expect0 *= -2.0;
    CHECK(sup_diff(r1[0], expect0) <= 1e-11);

    st.m = 2;
    VectorField r2 = rhs_flow(st);
    Field expect20 = st.v[0];
    expect20 *= -4.0;
    CHECK(sup_diff(r2[0], expect20) <= 1e-9); // |xi|^4 rounding amplification

    FlowState zero;
    zero.v = VectorField{Field::zeros(g), Field::zeros(g)};
    VectorField rz = rhs_flow(zero);
    CHECK(rz[0].sup_norm() == 0.0);
    CHECK(rz[1].sup_norm() == 0.0);

    // non-solenoidal input rejected
    FlowState bad;
    bad.v = VectorField{Field::sample2(g, [](double x, double) { return std::sin(x); }),
                        Field::zeros(g)};
    CHECK_THROWS(rhs_flow(bad));
}

TEST_CASE("integrate_flow: taylor-green decays at the exact viscous rate")
{
    for (int m : {1, 2}) {
        FlowConfig cfg;
        cfg.state0.v = taylor_green(box2());
        cfg.state0.m = m;
        cfg.dt = 1e-3;
        cfg.t_end = 0.25;
        cfg.monitors = {"sup_norm", "energy", "energy_residual"};
        Trajectory traj = integrate_flow(cfg);
        REQUIRE(traj.outcome == Outcome::Completed);
        const double rate = m == 1 ? 2.0 : 4.0;
        const double expected = std::exp(-rate * 0.25); // sup |v0| = 1
        CHECK(std::abs(traj.at("sup_norm").back() - expected) <= 1e-8);
        double res = 0.0;
        for (double r : traj.at("energy_residual")) res = std::max(res, r);
        CHECK(res <= 1e-6 * std::max(1.0, traj.at("energy").front()));
    }
}

TEST_CASE("integrate_flow: random data dissipates energy and conserves momentum")
{
    Grid g = box2();
    FlowConfig cfg;
    cfg.seed = 42;
    cfg.state0.v = random_solenoidal(g, cfg.seed, 4, 0.5);
    cfg.state0.m = 1;
    cfg.dt = 1e-3;
    cfg.t_end = 0.2;
    cfg.monitors = {"energy", "enstrophy", "mean", "energy_residual", "sup_norm"};
    Trajectory traj = integrate_flow(cfg);
    REQUIRE(traj.outcome == Outcome::Completed);
    CHECK(traj.seed == 42);
    const auto& E = traj.at("energy");
    for (std::size_t i = 1; i < E.size(); ++i) CHECK(E[i] <= E[i - 1] * (1.0 + 1e-12));
    const auto& mean = traj.at("mean");
    for (double mv : mean) CHECK(std::abs(mv - mean[0]) <= 1e-12);
    double res = 0.0;
    for (double r : traj.at("energy_residual")) res = std::max(res, r);
    CHECK(res <= 1e-6 * std::max(1.0, E.front()));
}

TEST_CASE("integrate_flow: solenoidality preserved along the run")
{
    Grid g = box2();
    FlowState st;
    st.v = random_solenoidal(g, 7, 5, 0.8);
    st.m = 1;
    const double mean0 = st.v[0].mean(), mean1 = st.v[1].mean();
    for (int k = 0; k < 20; ++k) {
        st = flow_step(st, 1e-3);
        CHECK(divergence(st.v).sup_norm() <= 1e-10);
        CHECK(std::abs(st.v[0].mean() - mean0) <= 1e-12);
        CHECK(std::abs(st.v[1].mean() - mean1) <= 1e-12);
    }
}

TEST_CASE("recover_pressure: taylor-green closed form and shift equivariance")
{
    Grid g = box2();
    FlowState st;
    st.v = taylor_green(g);
    Field p = recover_pressure(st);
    Field expect = Field::sample2(g, [](double x, double y) {
        return -0.25 * (std::cos(2 * x) + std::cos(2 * y));
    });
    CHECK(sup_diff(p, expect) <= 1e-12);
    CHECK(std::abs(p.mean()) <= 1e-14);

    // gradient consistency: grad p = -(I - P)(v.grad)v
    FlowState z;
    z.v = VectorField{Field::zeros(g), Field::zeros(g)};
    CHECK(recover_pressure(z).sup_norm() == 0.0);

    // shifted state gives the shifted pressure
    VectorField vs(2);
    vs[0] = Field::sample2(g, [](double x, double y) { return std::cos(x + 1.0) * std::sin(y); });
    vs[1] = Field::sample2(g, [](double x, double y) { return -std::sin(x + 1.0) * std::cos(y); });
    FlowState sts;
    sts.v = vs;
    Field ps = recover_pressure(sts);
    Field expect_s = Field::sample2(g, [](double x, double y) {
        return -0.25 * (std::cos(2 * (x + 1.0)) + std::cos(2 * y));
    });
    CHECK(sup_diff(ps, expect_s) <= 1e-12);
}

TEST_CASE("regularity monitor: exponents and bounded serrin integral")
{
    FlowConfig cfg;
    cfg.state0.v = taylor_green(box2());
    cfg.state0.m = 1;
    cfg.dt = 2e-3;
    cfg.t_end = 0.5;
    cfg.monitors = {"lp_3", "sup_norm"};
    Trajectory traj = integrate_flow(cfg);
    RegularityReport rep = regularity_monitor(traj, 3.0, 1, 2, 0.5);
    CHECK(rep.p0 == 2.0);
    CHECK(rep.p_exceeds_p0);
    CHECK(rep.sup_lp == doctest::Approx(traj.at("lp_3").front()).epsilon(1e-12)); // decaying flow
    REQUIRE(!rep.serrin_val.empty());
    // exact decay keeps the running integral bounded by its t = 0 value scale
    for (double s : rep.serrin_val) CHECK(s <= rep.serrin_val.front() * (1.0 + 1e-9));

    RegularityReport rep2 = regularity_monitor(traj, 3.0, 2, 3, 1.0);
    CHECK(rep2.p0 == 1.0);
}

TEST_CASE("ck-rescaled flow reproduces the nu_k advection coefficient")
{
    // w(y) = v(a_k y)/C_k on the y-grid: P(w.grad)w sampled at y_j equals
    // (a_k/C_k^2) P(v.grad)v sampled at x_j, so the rescaled-equation
    // advection coefficient is b_k C_k^2/(a_k C_k) = a_k^{2m-1} C_k = nu_k.
    Grid g = box2();
    const int m = 2;
    const double p = 3.0, Ck = 2.5;
    ScalingLaw law = scaling_coefficients(ScalingKind::CkLp, m, 2, p, Ck);
    const double ak = law.at("a_k");

    VectorField v = taylor_green(g);
    FlowState st;
    st.v = v;
    st.m = m;
    VectorField adv_v = leray_project([&] {
        VectorField a(2);
        FlowState tmp;
        tmp.v = v;
        tmp.m = m;
        VectorField r = rhs_flow(tmp); // -(-Lap)^m v - P(v.grad)v
        for (int c = 0; c < 2; ++c) {
            Field lin = neg_laplacian_power(v[std::size_t(c)], double(m));
            a[std::size_t(c)] = Field::zeros(g);
            for (std::size_t s = 0; s < lin.size(); ++s)
                a[std::size_t(c)][s] = -(r[std::size_t(c)][s] + lin[s]); // P(v.grad)v
        }
        return a;
    }());

    // center at the box midpoint so sample j of w aligns with sample j of v
    VectorField w(2);
    std::vector<double> center = {nums::pi, nums::pi};
    for (int c = 0; c < 2; ++c) w[std::size_t(c)] = ck_rescale(v[std::size_t(c)], law, center);
    FlowState stw;
    stw.v = w;
    stw.m = m;
    VectorField adv_w = leray_project([&] {
        VectorField r = rhs_flow(stw);
        VectorField a(2);
        for (int c = 0; c < 2; ++c) {
            Field lin = neg_laplacian_power(w[std::size_t(c)], double(m));
            a[std::size_t(c)] = Field::zeros(w[0].grid());
            for (std::size_t s = 0; s < lin.size(); ++s)
                a[std::size_t(c)][s] = -(r[std::size_t(c)][s] + lin[s]);
        }
        return a;
    }());

    // pointwise identity adv_w = (a_k/C_k^2) adv_v and the closed form nu_k
    const double factor = ak / (Ck * Ck);
    double err = 0.0;
    for (int c = 0; c < 2; ++c)
        for (std::size_t s = 0; s < adv_v[0].size(); ++s)
            err = std::max(err, std::abs(adv_w[std::size_t(c)][s] - factor * adv_v[std::size_t(c)][s]));
    CHECK(err <= 1e-10);
    CHECK(law.at("nu_k") == doctest::Approx(std::pow(ak, 2 * m - 1) * Ck).epsilon(1e-12));
}
