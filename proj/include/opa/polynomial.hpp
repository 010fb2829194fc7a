#pragma once

// Dense complex polynomials in ascending coefficient order, c[k] z^k.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "opa/error.hpp"

namespace opa::poly {

using cd = std::complex<double>;
using Coeffs = std::vector<cd>;

/// Drop trailing coefficients with |c| <= rel_tol * max|c|. rel_tol = 0 drops
/// exact zeros only. The zero polynomial becomes an empty vector.
inline Coeffs trim(Coeffs c, double rel_tol = 0.0) {
  double scale = 0.0;
  for (const cd& v : c) scale = std::max(scale, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= rel_tol * scale) c.pop_back();
  return c;
}

inline cd eval(const Coeffs& c, cd z) {
  cd acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline cd derivative_at(const Coeffs& c, cd z) {
  cd acc{0.0, 0.0};
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * c[k];
  return acc;
}

inline Coeffs add(const Coeffs& a, const Coeffs& b) {
  Coeffs out(std::max(a.size(), b.size()), cd{0.0, 0.0});
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return out;
}

inline Coeffs scale(const Coeffs& a, cd s) {
  Coeffs out(a);
  for (cd& v : out) v *= s;
  return out;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, cd{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Coefficients of c(gamma z).
inline Coeffs rotate(const Coeffs& c, cd gamma) {
  Coeffs out(c);
  cd g{1.0, 0.0};
  for (cd& v : out) {
    v *= g;
    g *= gamma;
  }
  return out;
}

inline Coeffs from_roots(const std::vector<cd>& roots, cd leading = {1.0, 0.0}) {
  Coeffs out{leading};
  for (const cd& w : roots) out = mul(out, Coeffs{-w, {1.0, 0.0}});
  return out;
}

struct Division {
  Coeffs quotient;
  cd remainder;
};

/// c(z) = (z - w) quotient(z) + remainder.
inline Division divide_linear(const Coeffs& c, cd w) {
  if (c.empty()) return {{}, {0.0, 0.0}};
  Coeffs q(c.size() - 1, cd{0.0, 0.0});
  cd carry = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    q[k] = carry;
    carry = c[k] + carry * w;
  }
  return {q, carry};
}

/// All roots of the polynomial as eigenvalues of its companion matrix,
/// refined by a few Newton steps on the original coefficients.
inline std::vector<cd> roots(const Coeffs& coeffs) {
  const Coeffs c = trim(coeffs);
  if (c.empty()) throw InvalidArgument("the zero polynomial has no well-defined roots");
  const std::size_t d = c.size() - 1;
  if (d == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / c[d];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw SingularSystem("companion eigenvalue iteration failed");
  std::vector<cd> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    cd r = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (int it = 0; it < 3; ++it) {
      const cd value = eval(c, r);
      const cd slope = derivative_at(c, r);
      if (std::abs(slope) == 0.0) break;
      const cd next = r - value / slope;
      if (!(std::abs(eval(c, next)) < std::abs(value))) break;
      r = next;
    }
    out[i] = r;
  }
  std::sort(out.begin(), out.end(), [](cd a, cd b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

}  // namespace opa::poly
