#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kslab::fft {

using cplx = std::complex<double>;

// In-place radix-2 Cooley-Tukey. n must be a power of two.
// inverse=true applies the conjugate transform and the 1/n factor.
void transform_1d(cplx* a, std::size_t n, bool inverse);

// Multi-dimensional transform over a row-major array. dims holds the extent
// of each axis; trailing unused axes must be 1.
void transform_nd(std::vector<cplx>& data, const int* dims, int ndim, bool inverse);

bool is_pow2(std::size_t n);

} // namespace kslab::fft
