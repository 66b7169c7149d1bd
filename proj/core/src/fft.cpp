#include "flowlab/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace flowlab {

void fft(std::vector<cplx>& a, bool invert) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / static_cast<double>(len) * (invert ? 1.0 : -1.0);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (invert) {
    for (cplx& x : a) x /= static_cast<double>(n);
  }
}

void fft2(std::vector<cplx>& a, int nx, int ny, bool invert) {
  if (a.size() != static_cast<size_t>(nx) * ny) throw std::invalid_argument("fft2: size mismatch");
  std::vector<cplx> row(nx), col(ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) row[i] = a[static_cast<size_t>(j) * nx + i];
    fft(row, invert);
    for (int i = 0; i < nx; ++i) a[static_cast<size_t>(j) * nx + i] = row[i];
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) col[j] = a[static_cast<size_t>(j) * nx + i];
    fft(col, invert);
    for (int j = 0; j < ny; ++j) a[static_cast<size_t>(j) * nx + i] = col[j];
  }
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace flowlab
