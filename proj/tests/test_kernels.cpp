#include "doctest.h"

#include "kslab/kernels.hpp"
#include "kslab/norms.hpp"
#include "kslab/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace kslab;
namespace nums = std::numbers;

TEST_CASE("fundamental solution m=1 is the gaussian")
{
    Kernel k = fundamental_solution(1, 1);
    const Grid& g = k.profile.grid();
    // F(0) = (4 pi)^{-1/2}
    const int center = g.points[0] / 2;
    CHECK(std::abs(k.profile[std::size_t(center)] - 0.28209479177387814) <= 1e-10);
    double sup = 0.0;
    for (int i = 0; i < g.points[0]; ++i) {
        const double y = g.coord(0, i);
        sup = std::max(sup, std::abs(k.profile[std::size_t(i)] -
                                     std::exp(-y * y / 4.0) / std::sqrt(4.0 * nums::pi)));
    }
    CHECK(sup <= 1e-10);
    CHECK(std::abs(k.mass - 1.0) <= 1e-12);
}

TEST_CASE("kernel mass is one across orders and dimensions")
{
    for (int m : {1, 2, 3})
        for (int dim : {1, 2}) {
            Kernel k = fundamental_solution(m, dim);
            CHECK(std::abs(k.mass - 1.0) <= 1e-8);
        }
}

TEST_CASE("m=2 kernel oscillates")
{
    Kernel k = fundamental_solution(2, 1);
    double minval = 1e300;
    for (double v : k.profile.values()) minval = std::min(minval, v);
    CHECK(minval < -1e-4); // genuinely negative lobes
}

TEST_CASE("kernel tail criterion rejects small domains")
{
    Grid tiny = Grid::periodic_centered({256}, {8.0});
    CHECK_THROWS(fundamental_solution(2, 1, tiny));
}

TEST_CASE("kernel residual small for computed kernels, fires on a bump")
{
    Kernel k1 = fundamental_solution(1, 1);
    CHECK(kernel_residual(k1) <= 1e-8);

    Kernel k2 = fundamental_solution(2, 1);
    CHECK(kernel_residual(k2) <= 1e-6);

    Kernel bad = k2;
    const Grid& g = bad.profile.grid();
    for (int i = 0; i < g.points[0]; ++i) {
        const double y = g.coord(0, i);
        bad.profile[std::size_t(i)] += 0.01 * std::exp(-y * y);
    }
    CHECK(kernel_residual(bad) > 1e-3);
}

TEST_CASE("decay exponent fits match 2m/(2m-1)")
{
    Kernel k1 = fundamental_solution(1, 1);
    DecayFit f1 = fit_decay(k1);
    CHECK(std::abs(f1.alpha - 2.0) <= 0.02);
    CHECK(f1.d == doctest::Approx(0.25).epsilon(0.02));

    Kernel k2 = fundamental_solution(2, 1);
    DecayFit f2 = fit_decay(k2);
    CHECK(std::abs(f2.alpha - 4.0 / 3.0) <= 0.05 * 4.0 / 3.0);

    Kernel k3 = fundamental_solution(3, 1);
    DecayFit f3 = fit_decay(k3);
    CHECK(std::abs(f3.alpha - 6.0 / 5.0) <= 0.05 * 6.0 / 5.0);
    CHECK(k3.decay_fit.has_value());
}

TEST_CASE("heat semigroup: identity, symbol decay, kernel bound")
{
    Grid g = Grid::periodic({64}, {2.0 * nums::pi});
    Field v = Field::sample(g, [](double x) { return std::sin(x) + 0.3 * std::cos(2 * x); });

    Field id = heat_semigroup_apply(2, 0.0, v);
    double e0 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) e0 = std::max(e0, std::abs(id[i] - v[i]));
    CHECK(e0 <= 1e-14);

    Field s = Field::sample(g, [](double x) { return std::sin(x); });
    Field decayed = heat_semigroup_apply(2, 1.0, s);
    double e1 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        e1 = std::max(e1, std::abs(decayed[i] - std::exp(-1.0) * s[i]));
    CHECK(e1 <= 1e-13);

    CHECK_THROWS(heat_semigroup_apply(2, -0.1, v));

    // |b(t)*v|_inf <= |F|_1 |v|_inf
    Kernel k = fundamental_solution(2, 1);
    Field absF = k.profile;
    for (std::size_t i = 0; i < absF.size(); ++i) absF[i] = std::abs(absF[i]);
    const double F_l1 = integrate(absF);
    CHECK(F_l1 >= 1.0); // oscillatory kernel has |F|_1 > mass
    for (double t : {0.01, 0.1, 1.0})
        CHECK(heat_semigroup_apply(2, t, v).sup_norm() <= F_l1 * v.sup_norm() * (1.0 + 1e-12));
}

TEST_CASE("semigroup property composes exactly")
{
    Grid g = Grid::periodic({128}, {7.0});
    Field v = Field::sample(g, [&](double x) { return std::sin(2 * nums::pi * x / 7.0) + 0.2; });
    Field ab = heat_semigroup_apply(2, 0.3, heat_semigroup_apply(2, 0.5, v));
    Field once = heat_semigroup_apply(2, 0.8, v);
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(ab[i] - once[i]));
    CHECK(err <= 1e-12);
}

TEST_CASE("delta spike heat flow reproduces the self-similar profile")
{
    const int m = 2;
    Kernel k = fundamental_solution(m, 1);
    const Grid& g = k.profile.grid();
    const int n = g.points[0];
    const double h = g.spacing(0);

    Field spike = Field::zeros(g);
    spike[std::size_t(n / 2)] = 1.0 / h; // unit-mass discrete delta at x = 0
    const double t = std::pow(0.5, 2 * m); // t^{1/2m} = 1/2 so y = 2x lands on grid nodes
    Field u = heat_semigroup_apply(m, t, spike);

    const double scale = std::pow(t, 1.0 / (2.0 * m)); // t^{N/2m}, N = 1
    double sup = 0.0;
    for (int j = n / 4 + 8; j < 3 * n / 4 - 8; ++j) {
        const int src = 2 * j - n / 2; // index of y = 2 x_j
        sup = std::max(sup, std::abs(scale * u[std::size_t(j)] - k.profile[std::size_t(src)]));
    }
    CHECK(sup <= 1e-4);
}
