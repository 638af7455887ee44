#include "doctest.h"

#include "kslab/capacity.hpp"
#include "kslab/volterra.hpp"

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

using namespace kslab;
namespace nums = std::numbers;

TEST_CASE("kappa and C_lambda closed forms at lambda=7, L=1")
{
    CHECK(capacity_kappa(7.0, 1.0) == doctest::Approx(std::sqrt(63.0 / 4.0)).epsilon(1e-14));
    // 42 * (400 + 40/3 + 1/5) = 260526/15 = 17368.4
    CHECK(capacity_c_lambda(7.0, 1.0) == doctest::Approx(260526.0 / 15.0).epsilon(1e-13));
    CHECK_THROWS(capacity_kappa(6.0, 1.0));
    CHECK_THROWS(capacity_c_lambda(5.5, 1.0));
}

TEST_CASE("capacity functional on zero data")
{
    Grid g = Grid::interval(128, 1.0, BoundaryKind::Navier);
    CapacityReport rep = capacity_functional(Field::zeros(g), BoundaryTraces{}, 7.0, 1.0);
    CHECK(rep.J == 0.0);
    CHECK(rep.B0 == 0.0);
    CHECK(rep.H_lambda == doctest::Approx(-rep.C_lambda).epsilon(1e-15));
}

TEST_CASE("weighted integral against an analytic moment")
{
    // oracle: int_0^1 x (1-x)^7 dx = 1/72
    Grid g = Grid::interval(512, 1.0, BoundaryKind::Dirichlet);
    Field v = Field::sample(g, [](double x) { return x; });
    CHECK(capacity_weighted_integral(v, 7.0, 1.0) == doctest::Approx(1.0 / 72.0).epsilon(1e-4));
}

TEST_CASE("closed-form divergence bounds for the three worked cases")
{
    // strict: a = kappa = 1, J0 = 0 -> c0 = 0, T = pi/2
    CHECK(closed_form_t_infinity(BlowupCase::Strict, 0.0, 1.0, 1.0) ==
          doctest::Approx(nums::pi / 2.0).epsilon(1e-15));
    // zero: kappa = 2, J0 = 1 -> T = 1/(4*1) = 0.25 and J(0.1) = 1/0.6
    CHECK(closed_form_t_infinity(BlowupCase::Zero, 1.0, 2.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(closed_form_envelope(BlowupCase::Zero, 1.0, 2.0, 0.0, 0.1) ==
          doctest::Approx(1.0 / 0.6).epsilon(1e-15));
    // negative: a = kappa = 1, J0 = 2 -> c0 = 1/3, T = (1/2) ln 3
    CHECK(closed_form_t_infinity(BlowupCase::Negative, 2.0, 1.0, 1.0) ==
          doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    CHECK_THROWS(closed_form_t_infinity(BlowupCase::Zero, -1.0, 2.0, 0.0));
    CHECK_THROWS(closed_form_t_infinity(BlowupCase::Negative, 0.5, 1.0, 1.0)); // J0 <= a/kappa
}

TEST_CASE("riccati oracle matches the closed forms to 1e-8 up to 0.9 T")
{
    struct Case {
        BlowupCase c;
        double J0, kappa, a;
    };
    for (const Case& cs : {Case{BlowupCase::Strict, 0.0, 1.0, 1.0},
                           Case{BlowupCase::Zero, 1.0, 2.0, 0.0},
                           Case{BlowupCase::Negative, 2.0, 1.0, 1.0}}) {
        const double T = closed_form_t_infinity(cs.c, cs.J0, cs.kappa, cs.a);
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(0.9 * T * double(i) / 40.0);
        RiccatiResult res = riccati_oracle(cs.c, cs.J0, cs.kappa, cs.a, grid, T);
        REQUIRE(res.J.size() == grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double exact = closed_form_envelope(cs.c, cs.J0, cs.kappa, cs.a, grid[i]);
            const double denom = std::max(1.0, std::abs(exact));
            CHECK(std::abs(res.J[i] - exact) / denom <= 1e-8);
        }
        // divergence no later than the closed-form bound
        CHECK(res.diverged);
        CHECK(res.t_div_low <= T * (1.0 + 1e-9)); // singularity bracket opens before the bound
        CHECK(res.t_div_high - res.t_div_low <= 2e-5 * T + 1e-12);
    }
}

TEST_CASE("riccati equilibria")
{
    std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
    RiccatiResult z = riccati_oracle(BlowupCase::Zero, 0.0, 2.0, 0.0, grid, 1.0);
    for (double J : z.J) CHECK(J == 0.0);

    // J' = k^2 J^2 - a^2 with J0 = a/k sits at the fixed point
    RiccatiResult fp = riccati_oracle(BlowupCase::Negative, 0.5, 2.0, 1.0, grid, 1.0);
    for (double J : fp.J) CHECK(J == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("strict-case bound decreases as a grows")
{
    double prev = 1e300;
    for (double a : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double T = closed_form_t_infinity(BlowupCase::Strict, 1.0, 1.5, a);
        CHECK(T < prev);
        prev = T;
    }
}

TEST_CASE("certify_blowup finds a strict certificate and honors the oracle")
{
    Grid g = Grid::interval(256, 2.0, BoundaryKind::Dirichlet);
    Field v0 = Field::sample(g, [](double x) { return x * x; });
    BoundaryTraces tr;
    tr.dv = 5e4; // large inflow derivative drives B0 above C_lambda for small L

    auto cert = certify_blowup(v0, tr, 6.5, 20.0, 0.25, 2.0, 48);
    REQUIRE(cert.has_value());
    CHECK(cert->t_infinity_bound > 0.0);
    CHECK(cert->lambda > 6.0);

    // soundness: the oracle envelope diverges no later than the bound
    std::vector<double> grid = {0.0};
    RiccatiResult res = riccati_oracle(cert->kind, cert->J0, cert->kappa, cert->a, grid,
                                       cert->t_infinity_bound);
    CHECK(res.diverged);
    CHECK(res.t_div_low <= cert->t_infinity_bound * (1.0 + 1e-6));
}

TEST_CASE("certify_blowup returns nothing when no point certifies")
{
    Grid g = Grid::interval(128, 1.0, BoundaryKind::Dirichlet);
    auto cert = certify_blowup(Field::zeros(g), BoundaryTraces{}, 6.5, 12.0, 0.5, 1.0, 16);
    CHECK_FALSE(cert.has_value());
}

TEST_CASE("volterra: exact beta, initial value, supersolution domination")
{
    VolterraResult res = volterra_bound(2.0, 2, 1, 3.0);
    CHECK(res.beta == 0.625); // (8 - 2 - 1)/8 exactly
    CHECK_FALSE(res.supercritical);
    CHECK(res.V[0] == 1.0);
    CHECK(res.monotone);
    CHECK(res.bounded_by_hat);
    CHECK(res.V.back() > 1.0);
    CHECK(res.V_hat.back() > res.V.back());
}

TEST_CASE("volterra: supersolution dominates across a (p, m, N) lattice")
{
    // The doubly exponential majorant is a finite-window bound: the equality
    // solution's exponent scales like e^{(p-1)t/(4 beta)}, so for small beta
    // (or long horizons) it overtakes V_hat. The lattice asserts domination
    // where the window comfortably contains t_end = 2 (beta >= 1/2) and only
    // well-posedness below that.
    for (int m : {1, 2, 3})
        for (int N : {1, 2})
            for (double p : {1.5, 2.0, 2.5}) {
                const double beta = (4.0 * m - 2.0 - N * (p - 1.0)) / (4.0 * m);
                if (beta <= 0.0) {
                    CHECK(volterra_bound(p, m, N, 2.0, 400).supercritical);
                    continue;
                }
                if (beta < 0.5) {
                    try {
                        VolterraResult res = volterra_bound(p, m, N, 2.0, 400);
                        CHECK(res.monotone);
                        CHECK(res.V.back() >= 1.0);
                    } catch (const std::invalid_argument&) {
                        // uniform-mesh kernel mass unresolvable: documented exit
                    }
                    continue;
                }
                VolterraResult res = volterra_bound(p, m, N, 2.0, 400);
                CHECK(res.monotone);
                CHECK(res.bounded_by_hat);
            }
}

TEST_CASE("volterra: refinement stability and supercritical flag")
{
    VolterraResult coarse = volterra_bound(2.0, 2, 1, 3.0, 600);
    VolterraResult fine = volterra_bound(2.0, 2, 1, 3.0, 2400);
    CHECK(coarse.V.back() == doctest::Approx(fine.V.back()).epsilon(2e-3));

    VolterraResult sup = volterra_bound(6.0, 1, 1, 1.0);
    CHECK(sup.supercritical);
    CHECK(sup.V.empty());
    CHECK_THROWS(volterra_bound(0.5, 2, 1, 1.0));
}
