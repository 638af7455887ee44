#pragma once

#include "kslab/fft.hpp"
#include "kslab/grid.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace kslab {

// Unnormalised forward DFT of a real field (periodic grids only).
std::vector<fft::cplx> to_spectral(const Field& f);
// Inverse DFT (with 1/n^N), real part sampled back onto g.
Field from_spectral(std::vector<fft::cplx> coeff, const Grid& g);

// Wavenumber of DFT index k on the given axis, in the usual symmetric
// convention (k > n/2 maps to k - n; the Nyquist index keeps +n/2).
double wavenumber(const Grid& g, int axis, int k);

// |xi|^2 at a flat spectral index.
double xi_squared(const Grid& g, std::size_t flat);

// Exact Fourier differentiation on periodic grids; boundary-aware schemes on
// intervals (sine basis for Navier, second-order centered differences with
// reflected ghosts for Dirichlet). order in 1..4.
Field derivative(const Field& f, int axis, int order);

// Multiplies Fourier coefficients by |xi|^(2l). For l < 0 the field must have
// vanishing mean; the zero mode maps to 0 in either case. Periodic only.
Field neg_laplacian_power(const Field& f, double l);

// 2/3-rule spectral truncation (periodic and Navier-interval grids).
Field dealias(const Field& f);

// e^{-|xi|^(2m) t} applied mode-wise.
Field heat_propagate(const Field& f, int m, double t);

// Band-limited translation: v(x) -> v(x + shift).
Field spectral_shift(const Field& f, const std::vector<double>& shift);

// Odd 2L-periodic extension of an interval field (Navier sine basis) and its
// restriction back. The extension grid has 2n points on extent 2L.
Field odd_extension(const Field& f);
Field restrict_odd(const Field& ext, const Grid& interval_grid);

// Trig-series evaluation of a 1D periodic field at arbitrary points.
std::vector<double> eval_fourier_1d(const Field& f, const std::vector<double>& x);

// Deterministic band-limited random field: iid coefficients on modes with
// per-axis index <= kband, scaled to the requested sup amplitude (or to the
// requested L2 norm when normalize_l2 > 0). Periodic grids use trig modes;
// Navier intervals use the sine basis.
Field random_band_limited_field(const Grid& g, std::uint64_t seed, int kband, double amplitude,
                                bool zero_mean = true, double normalize_l2 = 0.0);

} // namespace kslab
