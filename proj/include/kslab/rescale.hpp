#pragma once

#include "kslab/grid.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kslab {

enum class ScalingKind { CkL2, CkLp, CkHminus1, TminusT, Leray };

enum class Criticality { Subcritical, Critical, Supercritical };

// Closed-form scaling coefficients of the C_k zoom v = C_k w(y), x = a_k y
// (plus the (T-t)/Leray self-similar exponents). The derived map holds the
// coefficients applicable to the kind, keyed a_k, mu_k, nu_k, b_k, alpha,
// nu_exponent, gamma0.
struct ScalingLaw {
    ScalingKind kind = ScalingKind::CkL2;
    int m = 1;
    int N = 1;
    double p = 2.0;
    double Ck = 1.0;
    std::map<std::string, double> derived;
    Criticality criticality = Criticality::Critical;

    double at(const std::string& key) const;
};

ScalingLaw scaling_coefficients(ScalingKind kind, int m, int N, double p, double Ck);

struct SelfSimilarSlice {
    Field w;
    double tau = 0.0;
};

// v(x,t) = (T-t)^{-alpha} w(y, tau), alpha = (2m-1)/(2m(p-1)),
// y = x/(T-t)^{1/2m}, tau = -ln(T-t). Leray's scaling is the m=1, p=2 case.
// The slice grid is the image of v's grid (no resampling); pass a target to
// resample by trigonometric evaluation (1D).
SelfSimilarSlice to_selfsimilar(const Field& v, double T, double t, int m, double p,
                                const std::optional<Grid>& target = std::nullopt);
Field from_selfsimilar(const Field& w, double T, double t, int m, double p);

// w(y) = v(x_k + a_k y)/C_k with a_k from the law; preserves the designated
// norm to rounding. center defaults to the argmax of |v|.
Field ck_rescale(const Field& v, const ScalingLaw& law,
                 const std::optional<std::vector<double>>& center = std::nullopt);

enum class SpectrumCase { Nse, Burnett, Generic };

// Eigenvalues of the rescaled linearized operators:
//   Nse:     -1/2 - k/2            Burnett: -(2m-1)/2m - k/2m
//   Generic: -alpha - k/2m
std::vector<double> reference_spectrum(SpectrumCase c, int m, double alpha, int kmax);

} // namespace kslab
