#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace opa::detail {

using cd = std::complex<double>;

// e^{2 pi i j / n} for j = 0..n-1 with the eight symmetric points exact and
// the remaining values taken from the first octant so that conjugate and
// quadrant-related nodes agree bitwise.
inline std::vector<cd> roots_of_unity(std::size_t n) {
  std::vector<cd> w(n);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Reduce to the first quadrant with exact index arithmetic.
    const std::size_t quarter = n / 4;
    const std::size_t q = j / quarter;
    const std::size_t r = j % quarter;
    double c;
    double s;
    if (r == 0) {
      c = 1.0;
      s = 0.0;
    } else if (2 * r == quarter) {
      c = std::numbers::sqrt2 / 2.0;
      s = c;
    } else if (2 * r < quarter) {
      c = std::cos(step * static_cast<double>(r));
      s = std::sin(step * static_cast<double>(r));
    } else {
      const double t = step * static_cast<double>(quarter - r);
      c = std::sin(t);
      s = std::cos(t);
    }
    switch (q) {
      case 0: w[j] = {c, s}; break;
      case 1: w[j] = {-s, c}; break;
      case 2: w[j] = {-c, -s}; break;
      default: w[j] = {s, -c}; break;
    }
  }
  return w;
}

// In-place iterative radix-2 transform. sign = -1 computes
// X_k = sum_j x_j e^{-2 pi i jk/n}; sign = +1 the unnormalized inverse.
// `roots` must be roots_of_unity(n).
inline void fft_inplace(std::vector<cd>& a, std::span<const cd> roots, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        cd w = roots[k * stride];
        if (sign < 0) w = std::conj(w);
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace opa::detail
