#include "doctest.h"

#include "kslab/norms.hpp"
#include "kslab/rescale.hpp"
#include "kslab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kslab;
namespace nums = std::numbers;

namespace {

Field band_limited(const Grid& g, std::uint64_t seed, int kmax, bool zero_mean = true)
{
    std::mt19937_64 rng(seed);
    auto unif = [&] { return 2.0 * double(rng() >> 11) * 0x1p-53 - 1.0; };
    std::vector<double> v(g.size(), 0.0);
    for (int k = 1; k <= kmax; ++k) {
        const double a = unif(), b = unif();
        for (int i = 0; i < g.points[0]; ++i) {
            const double th = 2.0 * nums::pi * k * (g.coord(0, i) - g.origin[0]) / g.extent[0];
            v[std::size_t(i)] += a * std::sin(th) + b * std::cos(th);
        }
    }
    if (!zero_mean)
        for (double& x : v) x += 0.37;
    return Field(g, std::move(v));
}

} // namespace

TEST_CASE("scaling coefficients: closed forms and criticality")
{
    // mkse L2 zoom at m=2, N=1, p=2, C_k=10: nu_k = 10^{2-1-6} = 1e-5
    ScalingLaw a = scaling_coefficients(ScalingKind::CkL2, 2, 1, 2.0, 10.0);
    CHECK(a.at("nu_k") == doctest::Approx(1e-5).epsilon(1e-14));
    CHECK(a.at("a_k") == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(a.at("mu_k") == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(a.criticality == Criticality::Subcritical);

    // NSE Lp zoom is exactly critical at p = N for m = 1
    ScalingLaw b = scaling_coefficients(ScalingKind::CkLp, 1, 3, 3.0, 17.0);
    CHECK(b.at("nu_k") == 1.0);
    CHECK(b.criticality == Criticality::Critical);

    // exponent hits zero at p0 = 1 + 2(2m-1)/N: m=2, N=6 -> p0 = 2
    ScalingLaw c = scaling_coefficients(ScalingKind::CkL2, 2, 6, 2.0, 5.0);
    CHECK(c.at("nu_exponent") == 0.0);
    CHECK(c.criticality == Criticality::Critical);

    // H^-1 zoom: a_k = C_k^{-2/(N+2)}, nu exponent p-1-2(2m-3)/(N+2)
    ScalingLaw d = scaling_coefficients(ScalingKind::CkHminus1, 2, 1, 2.0, 8.0);
    CHECK(d.at("a_k") == doctest::Approx(std::pow(8.0, -2.0 / 3.0)).epsilon(1e-14));
    CHECK(d.at("nu_exponent") == doctest::Approx(1.0 - 2.0 / 3.0).epsilon(1e-14));
    CHECK(d.criticality == Criticality::Supercritical);

    CHECK_THROWS(scaling_coefficients(ScalingKind::CkL2, 2, 1, 0.5, 2.0));
    CHECK_THROWS(scaling_coefficients(ScalingKind::CkL2, 2, 1, 2.0, -1.0));
}

TEST_CASE("criticality classification matches the exponent sign on a lattice")
{
    for (int m = 1; m <= 3; ++m)
        for (int N = 1; N <= 4; ++N)
            for (double p : {1.5, 2.0, 3.0, 5.0, 9.0}) {
                ScalingLaw law = scaling_coefficients(ScalingKind::CkL2, m, N, p, 3.0);
                const double e = law.at("nu_exponent");
                if (e < 0.0) CHECK(law.criticality == Criticality::Subcritical);
                else if (e > 0.0) CHECK(law.criticality == Criticality::Supercritical);
                else CHECK(law.criticality == Criticality::Critical);
            }
}

TEST_CASE("ck_rescale: identity at C_k = 1 and designated-norm preservation")
{
    Grid g = Grid::periodic({256}, {2.0 * nums::pi});
    Field v = band_limited(g, 3, 12, false);

    ScalingLaw id = scaling_coefficients(ScalingKind::CkL2, 2, 1, 2.0, 1.0);
    Field w = ck_rescale(v, id, std::vector<double>{0.5 * g.extent[0]});
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(w[i] - v[i]));
    CHECK(err <= 1e-12);

    // L2 kind: |w|_2 = |v|_2; the sin(x), C_k = 4 example has a_k = 1/16
    Field s = Field::sample(g, [](double x) { return std::sin(x); });
    ScalingLaw l2law = scaling_coefficients(ScalingKind::CkL2, 2, 1, 2.0, 4.0);
    CHECK(l2law.at("a_k") == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    Field ws = ck_rescale(s, l2law);
    CHECK(l2_norm(ws) == doctest::Approx(l2_norm(s)).epsilon(1e-10));

    // Lp kind preserves |.|_p
    for (std::uint64_t seed : {5u, 6u}) {
        Field r = band_limited(g, seed, 9, false);
        ScalingLaw lplaw = scaling_coefficients(ScalingKind::CkLp, 1, 1, 3.0, 2.0);
        Field wr = ck_rescale(r, lplaw);
        CHECK(lp_norm(wr, 3.0) == doctest::Approx(lp_norm(r, 3.0)).epsilon(1e-9));
    }

    // H^-1 kind preserves the H^-1 norm and requires zero mean
    Field z = band_limited(g, 9, 9, true);
    ScalingLaw hlaw = scaling_coefficients(ScalingKind::CkHminus1, 2, 1, 2.0, 3.0);
    Field wz = ck_rescale(z, hlaw);
    CHECK(hminus1_norm(wz) == doctest::Approx(hminus1_norm(z)).epsilon(1e-10));
    CHECK_THROWS(ck_rescale(band_limited(g, 10, 5, false), hlaw));
}

TEST_CASE("to_selfsimilar: identity slice at T - t = 1 and exponents")
{
    Grid g = Grid::periodic_centered({128}, {8.0});
    Field v = band_limited(g, 11, 10);
    SelfSimilarSlice slice = to_selfsimilar(v, 3.0, 2.0, 2, 2.0);
    CHECK(slice.tau == 0.0);
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(slice.w[i] - v[i]));
    CHECK(err == 0.0); // (T-t) = 1: pure relabeling
    CHECK(slice.w.grid().extent[0] == g.extent[0]);

    // alpha = (2m-1)/(2m(p-1)): m=2, p=2 -> 3/4; Leray m=1, p=2 -> 1/2
    ScalingLaw t1 = scaling_coefficients(ScalingKind::TminusT, 2, 1, 2.0, 1.0);
    CHECK(t1.at("alpha") == 0.75);
    ScalingLaw t2 = scaling_coefficients(ScalingKind::Leray, 1, 3, 2.0, 1.0);
    CHECK(t2.at("alpha") == 0.5);
    CHECK_THROWS(scaling_coefficients(ScalingKind::Leray, 2, 3, 2.0, 1.0));
    CHECK_THROWS(to_selfsimilar(v, 1.0, 1.5, 2, 2.0));
}

TEST_CASE("to_selfsimilar: exact self-similar data gives a tau-independent profile")
{
    // v(x,t) = (T-t)^{-alpha} f(x/(T-t)^{1/2m}) with band-limited f; slices at
    // different t resampled onto the f-grid agree within interpolation error
    const int m = 2;
    const double p = 2.0, alpha = 0.75, T = 1.0;
    Grid gf = Grid::periodic_centered({256}, {40.0});
    Field f = Field::sample(gf, [](double y) {
        return std::exp(-y * y / 9.0) * (1.0 + 0.3 * std::sin(2.0 * y));
    });

    auto v_at = [&](double t) {
        const double s = std::pow(T - t, 1.0 / (2.0 * m));
        Grid gx = gf;
        gx.extent[0] = gf.extent[0] * s;
        gx.origin[0] = gf.origin[0] * s;
        Field v = Field::sample(gx, [&](double x) {
            const double y = x / s;
            return std::pow(T - t, -alpha) * std::exp(-y * y / 9.0) * (1.0 + 0.3 * std::sin(2.0 * y));
        });
        return v;
    };

    SelfSimilarSlice w1 = to_selfsimilar(v_at(0.2), T, 0.2, m, p, gf);
    SelfSimilarSlice w2 = to_selfsimilar(v_at(0.7), T, 0.7, m, p, gf);
    double err = 0.0;
    for (std::size_t i = 0; i < w1.w.size(); ++i) err = std::max(err, std::abs(w1.w[i] - w2.w[i]));
    CHECK(err <= 1e-8);
    CHECK(w1.tau == doctest::Approx(-std::log(0.8)).epsilon(1e-14));
}

TEST_CASE("self-similar round trip recovers the field")
{
    Grid g = Grid::periodic_centered({128}, {6.0});
    Field v = band_limited(g, 13, 9);
    const double T = 2.0, t = 1.3;
    SelfSimilarSlice slice = to_selfsimilar(v, T, t, 2, 2.0);
    Field back = from_selfsimilar(slice.w, T, t, 2, 2.0);
    REQUIRE(back.grid().extent[0] == doctest::Approx(g.extent[0]).epsilon(1e-14));
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(back[i] - v[i]));
    CHECK(err <= 1e-12);
}

TEST_CASE("reference spectra: pinned values, strict decrease, step 1/2m")
{
    auto nse = reference_spectrum(SpectrumCase::Nse, 1, 0.0, 2);
    CHECK(nse[0] == -0.5);
    CHECK(nse[1] == -1.0);
    CHECK(nse[2] == -1.5);

    auto bur = reference_spectrum(SpectrumCase::Burnett, 2, 0.0, 0);
    CHECK(bur[0] == -0.75);

    auto gen = reference_spectrum(SpectrumCase::Generic, 2, 0.75, 1);
    CHECK(gen[1] == -1.0);

    for (int m : {1, 2, 3}) {
        auto spec = reference_spectrum(SpectrumCase::Burnett, m, 0.0, 8);
        for (std::size_t k = 1; k < spec.size(); ++k)
            CHECK(spec[k - 1] - spec[k] == doctest::Approx(1.0 / (2.0 * m)).epsilon(1e-14));
    }
    CHECK_THROWS(reference_spectrum(SpectrumCase::Nse, 1, 0.0, -1));
}
