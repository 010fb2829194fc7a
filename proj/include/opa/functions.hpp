#pragma once

// Symbolic Hardy-space functions. Every representable function is rational
// with all poles outside the closed unit disk, so it is analytic across T.

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opa/circle.hpp"
#include "opa/error.hpp"
#include "opa/polynomial.hpp"

namespace opa {

/// Roots within this distance of the unit circle count as boundary roots.
inline constexpr double kBoundaryTolerance = 1e-6;

using poly::Coeffs;

/// c * prod_k (w_k - z) / (1 - conj(w_k) z), |w_k| < 1, |c| = 1.
struct FiniteBlaschke {
  std::vector<cd> zeros;
  cd unimodular{1.0, 0.0};

  FiniteBlaschke() = default;
  FiniteBlaschke(std::vector<cd> zs, cd c) : zeros(std::move(zs)), unimodular(c) {
    for (const cd& w : zeros) {
      if (!(std::abs(w) < 1.0)) {
        throw InvalidArgument("Blaschke zeros must lie in the open unit disk");
      }
    }
    if (std::abs(std::abs(unimodular) - 1.0) > 1e-12) {
      throw InvalidArgument("Blaschke constant must be unimodular");
    }
  }

  cd operator()(cd z) const {
    cd acc = unimodular;
    for (const cd& w : zeros) acc *= (w - z) / (1.0 - std::conj(w) * z);
    return acc;
  }

  /// J(0) = c * prod w_k.
  cd at_zero() const {
    cd acc = unimodular;
    for (const cd& w : zeros) acc *= w;
    return acc;
  }

  bool trivial() const { return zeros.empty(); }
};

/// Numerator and denominator coefficients of a rational function.
struct RationalForm {
  Coeffs numerator;
  Coeffs denominator;
};

class HardyFunction;

namespace detail {
struct HardyNode;
}

/// Immutable, cheaply copyable handle to a function tree.
class HardyFunction {
 public:
  struct Polynomial {
    Coeffs coeffs;
  };
  struct Rational {
    Coeffs numerator;
    Coeffs denominator;
  };
  struct Scaled;
  struct Sum;
  struct Product;
  struct Rotated;

  static HardyFunction polynomial(Coeffs c);
  static HardyFunction constant(cd c) { return polynomial(Coeffs{c}); }
  /// Throws InvalidArgument when the denominator vanishes in the closed disk
  /// (within kBoundaryTolerance of T).
  static HardyFunction rational(Coeffs numerator, Coeffs denominator);
  static HardyFunction blaschke(FiniteBlaschke b);
  static HardyFunction scaled(cd factor, HardyFunction f);
  static HardyFunction sum(HardyFunction a, HardyFunction b);
  static HardyFunction product(HardyFunction a, HardyFunction b);
  /// z -> f(gamma z).
  static HardyFunction rotated(cd gamma, HardyFunction f);

  cd operator()(cd z) const;
  cd at_zero() const { return (*this)(cd{0.0, 0.0}); }
  RationalForm to_rational() const;
  /// Coefficients when the tree is a bare polynomial node.
  const Coeffs* polynomial_coeffs() const;
  const FiniteBlaschke* blaschke_factor() const;
  /// Canonical text in the expression grammar; parse(to_string()) evaluates
  /// identically.
  std::string to_string() const;

 private:
  explicit HardyFunction(std::shared_ptr<const detail::HardyNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::HardyNode> node_;
};

struct HardyFunction::Scaled {
  cd factor;
  HardyFunction f;
};
struct HardyFunction::Sum {
  HardyFunction a;
  HardyFunction b;
};
struct HardyFunction::Product {
  HardyFunction a;
  HardyFunction b;
};
struct HardyFunction::Rotated {
  cd gamma;
  HardyFunction f;
};

namespace detail {
struct HardyNode {
  std::variant<HardyFunction::Polynomial, HardyFunction::Rational, FiniteBlaschke,
               HardyFunction::Scaled, HardyFunction::Sum, HardyFunction::Product,
               HardyFunction::Rotated>
      v;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline void require_zero_free_disk(const Coeffs& den) {
  const Coeffs d = poly::trim(den);
  if (d.empty()) throw InvalidArgument("denominator is identically zero");
  for (const cd& r : poly::roots(d)) {
    if (std::abs(r) <= 1.0 + kBoundaryTolerance) {
      throw InvalidArgument("denominator vanishes in the closed unit disk (root of modulus " +
                            std::to_string(std::abs(r)) + ")");
    }
  }
}

inline std::string format_real(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

// A complex literal that parses back to the same value.
inline std::string format_complex(cd c) {
  if (c.imag() == 0.0) {
    const std::string re = format_real(c.real());
    return c.real() < 0 || std::signbit(c.real()) ? "(" + re + ")" : re;
  }
  const std::string im = format_real(std::abs(c.imag())) + "i";
  const char* sign = c.imag() < 0 ? "-" : "+";
  if (c.real() == 0.0) return c.imag() < 0 ? "(-" + im + ")" : im;
  return "(" + format_real(c.real()) + sign + im + ")";
}

inline std::string format_polynomial(const Coeffs& c) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == cd{0.0, 0.0}) continue;
    if (!out.empty()) out += " + ";
    out += format_complex(c[k]);
    if (k == 1) out += "*z";
    if (k > 1) out += "*z^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}
}  // namespace detail

inline HardyFunction HardyFunction::polynomial(Coeffs c) {
  if (c.empty()) c.push_back({0.0, 0.0});
  return HardyFunction(std::make_shared<const detail::HardyNode>(detail::HardyNode{Polynomial{std::move(c)}}));
}

inline HardyFunction HardyFunction::rational(Coeffs numerator, Coeffs denominator) {
  detail::require_zero_free_disk(denominator);
  if (numerator.empty()) numerator.push_back({0.0, 0.0});
  return HardyFunction(std::make_shared<const detail::HardyNode>(
      detail::HardyNode{Rational{std::move(numerator), poly::trim(std::move(denominator))}}));
}

inline HardyFunction HardyFunction::blaschke(FiniteBlaschke b) {
  return HardyFunction(std::make_shared<const detail::HardyNode>(detail::HardyNode{std::move(b)}));
}

inline HardyFunction HardyFunction::scaled(cd factor, HardyFunction f) {
  return HardyFunction(std::make_shared<const detail::HardyNode>(detail::HardyNode{Scaled{factor, std::move(f)}}));
}

inline HardyFunction HardyFunction::sum(HardyFunction a, HardyFunction b) {
  return HardyFunction(std::make_shared<const detail::HardyNode>(detail::HardyNode{Sum{std::move(a), std::move(b)}}));
}

inline HardyFunction HardyFunction::product(HardyFunction a, HardyFunction b) {
  return HardyFunction(
      std::make_shared<const detail::HardyNode>(detail::HardyNode{Product{std::move(a), std::move(b)}}));
}

inline HardyFunction HardyFunction::rotated(cd gamma, HardyFunction f) {
  if (std::abs(std::abs(gamma) - 1.0) > 1e-12) throw InvalidArgument("rotation must be unimodular");
  return HardyFunction(
      std::make_shared<const detail::HardyNode>(detail::HardyNode{Rotated{gamma, std::move(f)}}));
}

inline cd HardyFunction::operator()(cd z) const {
  return std::visit(detail::overloaded{
                        [&](const Polynomial& p) { return poly::eval(p.coeffs, z); },
                        [&](const Rational& r) { return poly::eval(r.numerator, z) / poly::eval(r.denominator, z); },
                        [&](const FiniteBlaschke& b) { return b(z); },
                        [&](const Scaled& s) { return s.factor * s.f(z); },
                        [&](const Sum& s) { return s.a(z) + s.b(z); },
                        [&](const Product& s) { return s.a(z) * s.b(z); },
                        [&](const Rotated& s) { return s.f(s.gamma * z); },
                    },
                    node_->v);
}

inline RationalForm HardyFunction::to_rational() const {
  return std::visit(
      detail::overloaded{
          [](const Polynomial& p) { return RationalForm{p.coeffs, Coeffs{cd{1.0, 0.0}}}; },
          [](const Rational& r) { return RationalForm{r.numerator, r.denominator}; },
          [](const FiniteBlaschke& b) {
            RationalForm out{Coeffs{b.unimodular}, Coeffs{cd{1.0, 0.0}}};
            for (const cd& w : b.zeros) {
              out.numerator = poly::mul(out.numerator, Coeffs{w, cd{-1.0, 0.0}});
              out.denominator = poly::mul(out.denominator, Coeffs{cd{1.0, 0.0}, -std::conj(w)});
            }
            return out;
          },
          [](const Scaled& s) {
            RationalForm r = s.f.to_rational();
            r.numerator = poly::scale(r.numerator, s.factor);
            return r;
          },
          [](const Sum& s) {
            const RationalForm a = s.a.to_rational();
            const RationalForm b = s.b.to_rational();
            if (a.denominator == b.denominator) {
              return RationalForm{poly::add(a.numerator, b.numerator), a.denominator};
            }
            return RationalForm{poly::add(poly::mul(a.numerator, b.denominator), poly::mul(b.numerator, a.denominator)),
                                poly::mul(a.denominator, b.denominator)};
          },
          [](const Product& s) {
            const RationalForm a = s.a.to_rational();
            const RationalForm b = s.b.to_rational();
            return RationalForm{poly::mul(a.numerator, b.numerator), poly::mul(a.denominator, b.denominator)};
          },
          [](const Rotated& s) {
            const RationalForm r = s.f.to_rational();
            return RationalForm{poly::rotate(r.numerator, s.gamma), poly::rotate(r.denominator, s.gamma)};
          },
      },
      node_->v);
}

inline const Coeffs* HardyFunction::polynomial_coeffs() const {
  if (const auto* p = std::get_if<Polynomial>(&node_->v)) return &p->coeffs;
  return nullptr;
}

inline const FiniteBlaschke* HardyFunction::blaschke_factor() const {
  return std::get_if<FiniteBlaschke>(&node_->v);
}

inline std::string HardyFunction::to_string() const {
  using detail::format_complex;
  using detail::format_polynomial;
  return std::visit(detail::overloaded{
                        [](const Polynomial& p) { return format_polynomial(p.coeffs); },
                        [](const Rational& r) {
                          return "(" + format_polynomial(r.numerator) + ")/(" + format_polynomial(r.denominator) + ")";
                        },
                        [](const FiniteBlaschke& b) {
                          std::string out = "blaschke(";
                          for (std::size_t k = 0; k < b.zeros.size(); ++k) {
                            if (k) out += ", ";
                            out += format_complex(b.zeros[k]);
                          }
                          return out + "; " + format_complex(b.unimodular) + ")";
                        },
                        [](const Scaled& s) { return format_complex(s.factor) + "*(" + s.f.to_string() + ")"; },
                        [](const Sum& s) { return "(" + s.a.to_string() + ") + (" + s.b.to_string() + ")"; },
                        [](const Product& s) { return "(" + s.a.to_string() + ")*(" + s.b.to_string() + ")"; },
                        [this](const Rotated&) {
                          const RationalForm r = to_rational();
                          return "(" + format_polynomial(r.numerator) + ")/(" + format_polynomial(r.denominator) + ")";
                        },
                    },
                    node_->v);
}

/// Pointwise values of f at the grid nodes.
inline BoundarySamples evaluate_on_grid(const HardyFunction& f, const BoundaryGrid& grid) {
  return BoundarySamples::from(grid, [&](cd z) { return f(z); });
}

/// Taylor coefficients c_0..c_M at the origin.
struct TaylorSeries {
  Coeffs coeffs;

  cd operator[](std::size_t k) const { return k < coeffs.size() ? coeffs[k] : cd{0.0, 0.0}; }
  std::size_t size() const { return coeffs.size(); }
};

/// First `count` Taylor coefficients of f. Polynomials are read off
/// directly; other functions via the DFT of their boundary samples, which is
/// exact up to aliasing because f is analytic across T.
inline TaylorSeries taylor_coefficients(const HardyFunction& f, std::size_t count, const BoundaryGrid& grid) {
  if (count == 0) return {};
  if (2 * count > grid.size()) throw InvalidArgument("taylor count must be below half the grid size");
  if (const Coeffs* c = f.polynomial_coeffs()) {
    TaylorSeries out{Coeffs(count, cd{0.0, 0.0})};
    for (std::size_t k = 0; k < std::min(count, c->size()); ++k) out.coeffs[k] = (*c)[k];
    return out;
  }
  const FourierCoeffs fc = fourier_coefficients(evaluate_on_grid(f, grid), 0, static_cast<int>(count) - 1);
  return TaylorSeries{fc.values};
}

/// Power series of 1/f: g_0 = 1/f_0, g_m = -(1/f_0) sum_{j=1}^m f_j g_{m-j}.
inline TaylorSeries reciprocal_series(const TaylorSeries& f, std::size_t count) {
  if (f.size() == 0 || f[0] == cd{0.0, 0.0}) {
    throw InvalidArgument("reciprocal series requires f(0) != 0");
  }
  TaylorSeries g{Coeffs(count, cd{0.0, 0.0})};
  if (count == 0) return g;
  const cd inv0 = 1.0 / f[0];
  g.coeffs[0] = inv0;
  for (std::size_t m = 1; m < count; ++m) {
    cd acc{0.0, 0.0};
    for (std::size_t j = 1; j <= m; ++j) acc += f[j] * g.coeffs[m - j];
    g.coeffs[m] = -inv0 * acc;
  }
  return g;
}

inline std::vector<cd> polynomial_roots(const Coeffs& coeffs) { return poly::roots(coeffs); }

/// Inner factor of a polynomial: order of vanishing at 0 plus the Blaschke
/// product over its zeros in the open disk.
struct InnerPart {
  /// Includes `monomial_order` zeros at the origin.
  FiniteBlaschke inner;
  int monomial_order = 0;
  cd value_at_zero{1.0, 0.0};

  bool trivial() const { return inner.trivial(); }
};

inline InnerPart inner_part_of_polynomial(const Coeffs& coeffs) {
  const Coeffs c = poly::trim(coeffs);
  if (c.empty()) throw InvalidArgument("the zero polynomial has no inner-outer factorization");
  InnerPart out;
  std::size_t m = 0;
  while (c[m] == cd{0.0, 0.0}) ++m;
  out.monomial_order = static_cast<int>(m);
  std::vector<cd> zeros(m, cd{0.0, 0.0});
  const Coeffs reduced(c.begin() + static_cast<std::ptrdiff_t>(m), c.end());
  for (const cd& r : poly::roots(reduced)) {
    const double mod = std::abs(r);
    if (std::abs(mod - 1.0) <= kBoundaryTolerance) {
      throw UnsupportedInput("polynomial has a zero on the unit circle (|w| = " + std::to_string(mod) + ")");
    }
    if (mod < 1.0) zeros.push_back(r);
  }
  out.inner = FiniteBlaschke(std::move(zeros), {1.0, 0.0});
  out.value_at_zero = out.inner.at_zero();
  return out;
}

/// Inner part of any representable function: the poles lie outside the
/// closed disk, so only numerator zeros contribute.
inline InnerPart inner_part(const HardyFunction& f) {
  return inner_part_of_polynomial(f.to_rational().numerator);
}

}  // namespace opa
