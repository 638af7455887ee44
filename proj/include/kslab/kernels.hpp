#pragma once

#include "kslab/grid.hpp"

#include <optional>

namespace kslab {

struct DecayFit {
    double D = 0.0;
    double d = 0.0;
    double alpha = 0.0;
};

// Rescaled profile F of the polyharmonic heat kernel t^{-N/2m} F(x/t^{1/2m}),
// computed as the inverse Fourier transform of exp(-|xi|^{2m}) on a centered
// periodic grid. mass is the quadrature integral (1 up to rounding by
// construction of the zero mode).
struct Kernel {
    int m = 1;
    int dim = 1;
    Field profile;
    double mass = 0.0;
    std::optional<DecayFit> decay_fit;
};

// Default domain: [-R, R]^N with R = 40 for m <= 2 doubling per extra order
// (the decay constant d shrinks with m, see fit_decay), 2048 points in 1D and
// 512 per axis in 2D. Throws if the tail at the boundary exceeds 1e-14.
Kernel fundamental_solution(int m, int dim);
Kernel fundamental_solution(int m, int dim, const Grid& grid);

// sup-norm of BF = -(-Lap)^m F + (1/2m) y.grad F + (N/2m) F evaluated from
// the stored profile by spectral differentiation.
double kernel_residual(const Kernel& k);

// Least-squares fit of ln|F| against ln D - d |y|^alpha over the oscillation
// envelope (local maxima of |F| with 3 <= |y| <= 0.8 y_max above the rounding
// floor); monotone profiles (m = 1) fall back to direct samples in the same
// window. 1D only.
DecayFit fit_decay(Kernel& k);

// b(t) * v: multiplies Fourier coefficients by exp(-|xi|^{2m} t).
Field heat_semigroup_apply(int m, double t, const Field& v);

} // namespace kslab
