#pragma once

#include <complex>
#include <vector>

namespace flowlab {

using cplx = std::complex<double>;

/// In-place radix-2 FFT; n must be a power of two. invert=true applies the
/// inverse transform including the 1/n factor.
void fft(std::vector<cplx>& a, bool invert);

/// Row-column 2-D transform of an nx*ny row-major array; both sizes powers of two.
void fft2(std::vector<cplx>& a, int nx, int ny, bool invert);

int next_pow2(int n);

}  // namespace flowlab
