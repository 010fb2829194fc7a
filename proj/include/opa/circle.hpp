#pragma once

// Quadrature and Fourier analysis on the unit circle T with the normalized
// measure dm. Every integral is a uniform Riemann sum over the N-th roots of
// unity, which is exact for trigonometric polynomials of bandwidth < N.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "opa/detail/fft.hpp"
#include "opa/detail/summation.hpp"
#include "opa/error.hpp"

namespace opa {

using cd = std::complex<double>;

inline constexpr std::size_t kDefaultGridPoints = 4096;
inline constexpr double kDefaultAliasingTolerance = 1e-8;

/// Hoelder conjugate q = p / (p - 1). The only place the dual exponent is
/// formed.
inline double conjugate_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("exponent must lie in (1, inf), got " + std::to_string(p));
  }
  return p / (p - 1.0);
}

/// Uniform grid of N points on the unit circle, N a power of two >= 16.
/// Copies share the node table.
class BoundaryGrid {
 public:
  explicit BoundaryGrid(std::size_t n_points) : n_(n_points) {
    if (n_points < 16 || !std::has_single_bit(n_points)) {
      throw InvalidArgument("grid size must be a power of two >= 16, got " +
                            std::to_string(n_points));
    }
    nodes_ = std::make_shared<const std::vector<cd>>(detail::roots_of_unity(n_points));
  }

  std::size_t size() const noexcept { return n_; }
  cd node(std::size_t j) const { return (*nodes_)[j]; }
  std::span<const cd> nodes() const noexcept { return *nodes_; }
  double angle(std::size_t j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_);
  }
  /// The same circle sampled twice as densely.
  BoundaryGrid refined() const { return BoundaryGrid(2 * n_); }

  friend bool operator==(const BoundaryGrid& a, const BoundaryGrid& b) noexcept {
    return a.n_ == b.n_;
  }

 private:
  std::size_t n_;
  std::shared_ptr<const std::vector<cd>> nodes_;
};

inline BoundaryGrid uniform_grid(std::size_t n_points) { return BoundaryGrid(n_points); }

/// Complex values of a function at the nodes of a BoundaryGrid.
class BoundarySamples {
 public:
  BoundarySamples(BoundaryGrid grid, std::vector<cd> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw InvalidArgument("sample count " + std::to_string(values_.size()) +
                            " does not match grid size " + std::to_string(grid_.size()));
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
      if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag())) {
        throw InvalidArgument("non-finite sample at node " + std::to_string(j));
      }
    }
  }

  /// Samples of fn(z) at every node.
  template <class F>
  static BoundarySamples from(const BoundaryGrid& grid, F&& fn) {
    std::vector<cd> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.node(j));
    return BoundarySamples(grid, std::move(v));
  }

  static BoundarySamples constant(const BoundaryGrid& grid, cd c) {
    return BoundarySamples(grid, std::vector<cd>(grid.size(), c));
  }

  const BoundaryGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const cd> values() const noexcept { return values_; }
  cd operator[](std::size_t j) const { return values_[j]; }

  /// Pointwise map; the result is validated like any other samples.
  template <class F>
  BoundarySamples map(F&& fn) const {
    std::vector<cd> v(values_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(values_[j]);
    return BoundarySamples(grid_, std::move(v));
  }

  BoundarySamples conj() const {
    return map([](cd v) { return std::conj(v); });
  }

  friend BoundarySamples operator+(const BoundarySamples& a, const BoundarySamples& b) {
    return zip(a, b, std::plus<>{});
  }
  friend BoundarySamples operator-(const BoundarySamples& a, const BoundarySamples& b) {
    return zip(a, b, std::minus<>{});
  }
  friend BoundarySamples operator*(const BoundarySamples& a, const BoundarySamples& b) {
    return zip(a, b, std::multiplies<>{});
  }
  friend BoundarySamples operator*(cd c, const BoundarySamples& a) {
    return a.map([c](cd v) { return c * v; });
  }

 private:
  template <class Op>
  static BoundarySamples zip(const BoundarySamples& a, const BoundarySamples& b, Op op) {
    require_same_grid(a, b);
    std::vector<cd> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = op(a.values_[j], b.values_[j]);
    return BoundarySamples(a.grid_, std::move(v));
  }

  friend void require_same_grid(const BoundarySamples& a, const BoundarySamples& b) {
    if (!(a.grid_ == b.grid_)) {
      throw InvalidArgument("samples live on different grids (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + " points)");
    }
  }

  BoundaryGrid grid_;
  std::vector<cd> values_;
};

/// Coefficients c(offset), ..., c(offset + size - 1).
struct FourierCoeffs {
  int offset = 0;
  std::vector<cd> values;

  cd at(int k) const {
    const int i = k - offset;
    if (i < 0 || i >= static_cast<int>(values.size())) return {0.0, 0.0};
    return values[static_cast<std::size_t>(i)];
  }
  int last() const { return offset + static_cast<int>(values.size()) - 1; }
};

/// Mean of |s|^p over the grid, i.e. ||s||_p^p.
inline double lp_power_mean(const BoundarySamples& s, double p) {
  if (!(p > 0.0)) throw InvalidArgument("exponent must be positive");
  const auto v = s.values();
  if (p == 2.0) return detail::pairwise_mean<double>(v.size(), [&](std::size_t j) { return std::norm(v[j]); });
  return detail::pairwise_mean<double>(v.size(), [&](std::size_t j) { return std::pow(std::abs(v[j]), p); });
}

/// ||s||_p = (mean |s|^p)^{1/p}.
inline double lp_norm(const BoundarySamples& s, double p) {
  if (!(p > 1.0)) throw InvalidArgument("lp_norm requires p > 1");
  return std::pow(lp_power_mean(s, p), 1.0 / p);
}

/// Pointwise |v|^{t-1} conj(v), with 0 mapped to 0.
inline cd signed_power(cd v, double t) {
  if (v == cd{0.0, 0.0}) return {0.0, 0.0};
  return std::pow(std::abs(v), t - 1.0) * std::conj(v);
}

inline BoundarySamples signed_power(const BoundarySamples& s, double t) {
  if (!(t > 0.0)) throw InvalidArgument("signed power exponent must be positive");
  return s.map([t](cd v) { return signed_power(v, t); });
}

/// <f, g> = mean f conj(g).
inline cd pairing(const BoundarySamples& f, const BoundarySamples& g) {
  require_same_grid(f, g);
  const auto a = f.values();
  const auto b = g.values();
  return detail::pairwise_mean<cd>(a.size(), [&](std::size_t j) { return a[j] * std::conj(b[j]); });
}

/// mean |x|^{p-2} conj(x) y. Vanishes iff x is Birkhoff-James orthogonal to y
/// in L^p of the grid measure.
inline cd bj_residual(const BoundarySamples& x, const BoundarySamples& y, double p) {
  if (!(p > 1.0)) throw InvalidArgument("bj_residual requires p > 1");
  require_same_grid(x, y);
  const auto a = x.values();
  const auto b = y.values();
  return detail::pairwise_mean<cd>(a.size(), [&](std::size_t j) { return signed_power(a[j], p - 1.0) * b[j]; });
}

namespace detail {

inline std::vector<cd> dft_normalized(const BoundarySamples& s) {
  std::vector<cd> a(s.values().begin(), s.values().end());
  fft_inplace(a, s.grid().nodes(), -1);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (cd& c : a) c *= inv;
  return a;
}

inline std::size_t wrap_index(int k, std::size_t n) {
  const auto m = static_cast<long long>(n);
  return static_cast<std::size_t>(((static_cast<long long>(k) % m) + m) % m);
}

}  // namespace detail

/// c(k) = mean s e^{-ik theta} for k in [k_min, k_max]. Exact for
/// band-limited samples.
inline FourierCoeffs fourier_coefficients(const BoundarySamples& s, int k_min, int k_max) {
  if (k_max < k_min) throw InvalidArgument("empty coefficient range");
  if (static_cast<std::size_t>(k_max - k_min) >= s.size()) {
    throw InvalidArgument("coefficient range wider than the grid");
  }
  const auto spectrum = detail::dft_normalized(s);
  FourierCoeffs out{k_min, {}};
  out.values.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) out.values.push_back(spectrum[detail::wrap_index(k, s.size())]);
  return out;
}

/// Samples of sum_k c(k) z^k on `grid`. Frequencies must fit in the grid.
inline BoundarySamples synthesize(const BoundaryGrid& grid, const FourierCoeffs& c) {
  const std::size_t n = grid.size();
  if (c.values.size() > n) throw InvalidArgument("too many coefficients for grid");
  std::vector<cd> a(n, cd{0.0, 0.0});
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    a[detail::wrap_index(c.offset + static_cast<int>(i), n)] += c.values[i];
  }
  detail::fft_inplace(a, grid.nodes(), +1);
  return BoundarySamples(grid, std::move(a));
}

/// Riesz projection P_+: drop negative frequencies. Grid frequencies
/// N/2..N-1 are read as -N/2..-1 (the Nyquist bin counts as negative).
inline BoundarySamples riesz_project(const BoundarySamples& s) {
  const std::size_t n = s.size();
  auto spectrum = detail::dft_normalized(s);
  for (std::size_t k = n / 2; k < n; ++k) spectrum[k] = {0.0, 0.0};
  detail::fft_inplace(spectrum, s.grid().nodes(), +1);
  return BoundarySamples(s.grid(), std::move(spectrum));
}

/// True when two evaluations of the same integral on N and 2N points agree to
/// `rel_tol` relative (absolute below unit scale).
inline bool quadrature_agrees(double coarse, double fine, double rel_tol = kDefaultAliasingTolerance) {
  return std::abs(coarse - fine) <= rel_tol * std::max(1.0, std::abs(fine));
}

}  // namespace opa
