#include "kslab/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kslab::fft {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void transform_1d(cplx* a, std::size_t n, bool inverse)
{
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // one direct-trig root table for the full size keeps the noise floor at
    // a few ulps across all stages
    const double sgn = inverse ? 1.0 : -1.0;
    std::vector<cplx> roots(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = sgn * 2.0 * std::numbers::pi * double(j) / double(n);
        roots[j] = cplx(std::cos(ang), std::sin(ang));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx w = roots[j * step];
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / double(n);
        for (std::size_t i = 0; i < n; ++i) a[i] *= inv;
    }
}

void transform_nd(std::vector<cplx>& data, const int* dims, int ndim, bool inverse)
{
    std::size_t total = 1;
    for (int d = 0; d < ndim; ++d) total *= std::size_t(dims[d]);
    if (data.size() != total) throw std::invalid_argument("fft: size mismatch");

    std::vector<cplx> line;
    for (int axis = 0; axis < ndim; ++axis) {
        const std::size_t n = std::size_t(dims[axis]);
        if (n == 1) continue;
        std::size_t stride = 1;
        for (int d = axis + 1; d < ndim; ++d) stride *= std::size_t(dims[d]);
        const std::size_t nlines = total / n;
        line.resize(n);
        for (std::size_t l = 0; l < nlines; ++l) {
            // base index of the l-th line along this axis
            const std::size_t block = l / stride;
            const std::size_t offset = l % stride;
            const std::size_t base = block * stride * n + offset;
            for (std::size_t i = 0; i < n; ++i) line[i] = data[base + i * stride];
            transform_1d(line.data(), n, inverse);
            for (std::size_t i = 0; i < n; ++i) data[base + i * stride] = line[i];
        }
    }
}

} // namespace kslab::fft
